#include "vpm/cli/repro.hpp"

#include <chrono>
#include <cmath>

#include "vpm/analysis/analysis.hpp"
#include "vpm/calibration/calibration.hpp"
#include "vpm/cli/config.hpp"
#include "vpm/cli/io.hpp"
#include "vpm/cylinder/desk.hpp"
#include "vpm/error.hpp"
#include "vpm/poiseuille/poiseuille.hpp"
#include "vpm/stagnation/stagnation.hpp"

namespace vpm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void say(const ReproOptions& o, const std::string& s) {
    if (o.log) o.log(s);
}

std::string fmt(double x) { return format_double(x); }

std::vector<MaskProfile> smooth_profiles() {
    return {MaskProfile::tanh(), MaskProfile::erf(), compactify(MaskProfile::tanh(), 1.0),
            compactify(MaskProfile::erf(), 1.0)};
}

std::string header_for(const std::string& id, const KeyValues& kv) { return comment_header("repro " + id, kv.canonical()); }

std::vector<double> half_decades(int from, int to) {
    std::vector<double> out;
    for (int k = 2 * from; k >= 2 * to; --k) out.push_back(std::pow(10.0, k / 2.0));
    return out;
}

}  // namespace

BandCheck band(std::string name, double value, double lo, double hi) {
    BandCheck b{std::move(name), value, lo, hi, true, false};
    b.pass = std::isfinite(value) && value >= lo && value <= hi;
    return b;
}

BandCheck not_applicable(std::string name) { return BandCheck{std::move(name), 0.0, 0.0, 0.0, false, true}; }

bool ReproOutput::passed() const {
    for (const auto& c : checks) {
        if (c.applicable && !c.pass) return false;
    }
    return true;
}

const std::vector<std::string>& repro_ids() {
    static const std::vector<std::string> ids{"table1", "fig4", "fig5", "fig6-desk", "cylinder-desk"};
    return ids;
}

ReproOutput run_repro(const std::string& id, const ReproOptions& opts) {
    const auto t0 = Clock::now();
    ReproOutput out;
    if (id == "table1") out = repro_table1(opts);
    else if (id == "fig4") out = repro_fig4(opts);
    else if (id == "fig5") out = repro_fig5(opts);
    else if (id == "fig6-desk") out = repro_fig6_desk(opts);
    else if (id == "cylinder-desk") out = repro_cylinder_desk(opts);
    else throw ConfigError("unknown repro id '" + id + "'");
    out.wall_seconds = seconds_since(t0);
    return out;
}

ReproOutput repro_table1(const ReproOptions& opts) {
    ReproOutput out;
    out.id = "table1";
    KeyValues kv;
    kv.set("profiles", "tanh; erf; compact_tanh,c=1; compact_erf,c=1");
    std::string csv = header_for(out.id, kv) + "profile,delta,optimal_shift,residual,tabulated,deviation\n";
    for (const auto& p : smooth_profiles()) {
        say(opts, "calibrating " + p.name());
        const CalibrationResult r = zero_shift_smoothing(p);
        const double tab = tabulated_zero_shift_smoothing(p);
        const double dev = r.delta - tab;
        csv += p.name() + "," + fmt(r.delta) + "," + fmt(r.optimal_shift) + "," + fmt(r.residual) + "," + fmt(tab) +
               "," + fmt(dev) + "\n";
        out.checks.push_back(band("delta* - tabulated, " + p.name(), dev, -1e-9, 1e-9));
    }
    out.files.emplace_back("table1.csv", csv);
    return out;
}

ReproOutput repro_fig4(const ReproOptions& opts) {
    ReproOutput out;
    out.id = "fig4";
    KeyValues kv;
    kv.set("delta", "1e-3 .. 8, 45 log-spaced");
    kv.set("inner_bvp_n", "1000, 2000, 4000");
    std::string csv = header_for(out.id, kv) + "profile,delta,optimal_shift\n";
    for (const auto& p : smooth_profiles()) {
        say(opts, "shift curve " + p.name());
        for (int k = 0; k < 45; ++k) {
            const double delta = 1e-3 * std::pow(8000.0, k / 44.0);
            csv += p.name() + "," + fmt(delta) + "," + fmt(riccati_optimal_shift(p, delta)) + "\n";
        }
        out.checks.push_back(band("l*(1e-6) - 1, " + p.name(), riccati_optimal_shift(p, 1e-6) - 1.0, -1e-5, 1e-5));
    }
    out.files.emplace_back("fig4.csv", csv);

    say(opts, "discontinuous inner problem");
    const MaskSpec sharp{MaskProfile::discontinuous(), 0.0, 0.0};
    const Interval dom = inner_domain(sharp);
    std::string bvp = header_for(out.id, kv) + "n,displacement,error\n";
    std::vector<double> err;
    for (std::size_t n : {1000, 2000, 4000}) {
        const double d = solve_inner_bvp(sharp, dom.lo, dom.hi, n).displacement;
        err.push_back(std::abs(d + 1.0));
        bvp += std::to_string(n) + "," + fmt(d) + "," + fmt(d + 1.0) + "\n";
    }
    out.files.emplace_back("inner_bvp.csv", bvp);
    out.checks.push_back(band("inner BVP displacement + 1 at N = 4000", err.back(), 0.0, 1e-4));
    out.checks.push_back(band("inner BVP observed order", std::log2(err[1] / err[2]), 1.7, 2.3));
    return out;
}

ReproOutput repro_fig5(const ReproOptions& opts) {
    ReproOutput out;
    out.id = "fig5";
    const std::vector<double> eps{std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
    const double ds = zero_shift_smoothing(MaskProfile::erf()).delta;
    const std::vector<MaskRecipe> masks{{"standard", MaskProfile::discontinuous(), 0.0, false, 0.0, false},
                                        {"shifted", MaskProfile::discontinuous(), 1.0, true, 0.0, false},
                                        {"smoothed", MaskProfile::erf(), 0.0, false, ds, true}};
    KeyValues kv;
    kv.set("eps", format_doubles(eps));
    kv.set("masks", format_mask_recipes(masks));
    kv.set("n", "4001");
    say(opts, "poiseuille sweep");
    const PoiseuilleSweep sw = poiseuille_sweep(eps, masks, 4001, -1.0, opts.jobs);
    std::string csv = header_for(out.id, kv) + "epsilon,mask,E1,Einf,slope_fit,plateau\n";
    for (const auto& r : sw.rows) {
        if (r.failure) throw NumericalError("poiseuille row failed: " + *r.failure);
        std::size_t m = 0;
        while (sw.masks[m] != r.mask) ++m;
        csv += fmt(r.epsilon) + "," + r.mask + "," + fmt(r.e1) + "," + fmt(r.einf) + "," + fmt(sw.fits[m].slope) + "," +
               fmt(r.plateau) + "\n";
        if (r.mask == "standard") {
            out.checks.push_back(
                band("plateau / 2 eps^2 at eps = " + fmt(r.epsilon), r.plateau / (2.0 * r.epsilon * r.epsilon), 0.9, 1.1));
        }
    }
    out.files.emplace_back("fig5.csv", csv);
    out.checks.push_back(band("E1 slope, standard", sw.fits[0].slope, 0.9, 1.1));
    out.checks.push_back(band("E1 slope, shifted", sw.fits[1].slope, 1.85, 2.15));
    out.checks.push_back(band("E1 slope, smoothed erf", sw.fits[2].slope, 1.85, 2.15));
    return out;
}

ReproOutput repro_fig6_desk(const ReproOptions& opts) {
    ReproOutput out;
    out.id = "fig6-desk";
    const std::vector<double> re{1.0, 100.0, 1000.0};
    const std::vector<double> etas = half_decades(-1, -6);
    const double dc = zero_shift_smoothing(compactify(MaskProfile::erf(), 1.0)).delta;
    const std::vector<MaskRecipe> masks{{"standard", MaskProfile::discontinuous(), 0.0, false, 0.0, false},
                                        {"shifted", MaskProfile::discontinuous(), 1.0, true, 0.0, false},
                                        {"smoothed", compactify(MaskProfile::erf(), 1.0), 0.0, false, dc, true}};
    KeyValues kv;
    kv.set("Re", format_doubles(re));
    kv.set("eta", format_doubles(etas));
    kv.set("masks", format_mask_recipes(masks));
    kv.set("n", "4001");
    say(opts, "stagnation sweep");
    const StagnationSweep sw = stagnation_regime_sweep(re, etas, masks, 10.0, 4001, opts.jobs);
    std::string csv = header_for(out.id, kv) + "Re,eta,eps,mask,E1,Einf\n";
    for (const auto& r : sw.rows) {
        if (r.failure) throw NumericalError("stagnation row failed: " + *r.failure);
        csv += fmt(r.Re) + "," + fmt(r.eta) + "," + fmt(r.eps) + "," + r.mask + "," + fmt(r.e1) + "," + fmt(r.einf) + "\n";
    }
    out.files.emplace_back("fig6.csv", csv);

    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("nan"); };
    std::string fits = header_for(out.id, kv) + "Re,mask,single_slope,slope_high,slope_low,break_eta\n";
    for (const auto& f : sw.fits) {
        fits += fmt(f.Re) + "," + f.mask + "," + fmt(f.single.slope) + "," + opt(f.slope_high) + "," +
                opt(f.slope_low) + "," + opt(f.break_eta) + "\n";
        const std::string tag = "Re = " + fmt(f.Re) + ", " + f.mask;
        if (f.mask == "standard") {
            out.checks.push_back(f.slope_high ? band("high-eta slope, " + tag, *f.slope_high, 0.85, 1.15)
                                              : not_applicable("high-eta slope, " + tag));
            out.checks.push_back(f.slope_low ? band("low-eta slope, " + tag, *f.slope_low, 0.35, 0.65)
                                             : not_applicable("low-eta slope, " + tag));
            out.checks.push_back(f.break_eta ? band("break eta * Re, " + tag, *f.break_eta * f.Re, 0.1, 10.0)
                                             : not_applicable("break eta * Re, " + tag));
        } else {
            out.checks.push_back(band("single slope, " + tag, f.single.slope, 0.85, 1.15));
        }
    }
    out.files.emplace_back("fig6_fits.csv", fits);
    return out;
}

std::string forces_csv(const ForceTorqueSeries& s, const std::string& header) {
    std::string csv = header + "t,Fx,Fy,T,F0x,F0y,T0\n";
    for (const auto& x : s.samples) {
        csv += fmt(x.t) + "," + fmt(x.Fx) + "," + fmt(x.Fy) + "," + fmt(x.T) + "," + fmt(x.F0x) + "," + fmt(x.F0y) + "," +
               fmt(x.T0) + "\n";
    }
    return csv;
}

ReproOutput repro_cylinder_desk(const ReproOptions& opts) {
    ReproOutput out;
    out.id = "cylinder-desk";
    DeskStudyConfig cfg;
    KeyValues kv = to_key_values(CylinderRunConfig{cfg.base, {}});
    kv.set("eta", format_doubles(cfg.etas));
    kv.set("mask", "standard; shifted; smoothed");
    kv.set("radial_points", std::to_string(cfg.radial_points));
    kv.set("reference_dt", fmt(cfg.reference_dt));
    const std::string head = header_for(out.id, kv);

    DeskProgress progress;
    progress.started = [&](const std::string& s) { say(opts, "running " + s); };
    const DeskStudy st = run_desk_study(cfg, opts.exec, progress);

    out.files.emplace_back("reference_forces.csv", forces_csv(st.reference.series, head));
    std::string table = head + "mask,eta,max_dFx,max_dFy,max_dT,E1_u,Einf_u,E1_v,Einf_v,E1_P,Einf_P\n";
    for (const auto& r : st.runs) {
        const std::string name = to_string(r.mask) + "_eta" + fmt(r.eta);
        out.files.emplace_back("forces_" + name + ".csv", forces_csv(r.result.series, head));
        table += to_string(r.mask) + "," + fmt(r.eta) + "," + fmt(r.forces.max_abs_dFx) + "," +
                 fmt(r.forces.max_abs_dFy) + "," + fmt(r.forces.max_abs_dT) + "," + fmt(r.fields.u.e1) + "," +
                 fmt(r.fields.u.einf) + "," + fmt(r.fields.v.e1) + "," + fmt(r.fields.v.einf) + "," +
                 fmt(r.fields.P.e1) + "," + fmt(r.fields.P.einf) + "\n";
    }
    out.files.emplace_back("errors.csv", table);

    std::string summary =
        head + "mask,einf_u_ratio,dFx_ratio,shape_mismatch_u,dFx_fine,dFx_richardson,richardson_gain\n";
    const double root10 = std::sqrt(10.0);
    for (const auto& s : st.summaries) {
        summary += to_string(s.mask) + "," + fmt(s.einf_u_ratio) + "," + fmt(s.dFx_ratio) + "," +
                   fmt(s.shape_mismatch_u) + "," + fmt(s.dFx_fine) + "," + fmt(s.dFx_richardson) + "," +
                   fmt(s.richardson_gain) + "\n";
        const std::string m = to_string(s.mask);
        if (is_optimized(s.mask)) {
            out.checks.push_back(band("Einf(u) ratio, " + m, s.einf_u_ratio, 7.0, 13.0));
            out.checks.push_back(band("|dFx| ratio, " + m, s.dFx_ratio, 7.0, 13.0));
            out.checks.push_back(band("normalized u error mismatch, " + m, s.shape_mismatch_u, 0.0, 0.15));
            out.checks.push_back(band("Richardson gain, " + m, s.richardson_gain, 10.0, INFINITY));
        } else {
            out.checks.push_back(band("Einf(u) ratio, " + m, s.einf_u_ratio, 0.7 * root10, 1.3 * root10));
            out.checks.push_back(band("|dFx| ratio, " + m, s.dFx_ratio, 0.7 * root10, 1.3 * root10));
            out.checks.push_back(band("Richardson gain, " + m, s.richardson_gain, 0.0, 2.0));
        }
    }
    out.files.emplace_back("summary.csv", summary);
    say(opts, "penalized runs took " + std::to_string(st.penalized_wall_seconds) + " s");
    return out;
}

}  // namespace vpm
