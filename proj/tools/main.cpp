#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "vpm/analysis/analysis.hpp"
#include "vpm/calibration/calibration.hpp"
#include "vpm/cli/config.hpp"
#include "vpm/cli/io.hpp"
#include "vpm/cli/repro.hpp"
#include "vpm/cylinder/cylinder.hpp"
#include "vpm/error.hpp"
#include "vpm/poiseuille/poiseuille.hpp"
#include "vpm/stagnation/stagnation.hpp"

using json = nlohmann::ordered_json;
using namespace vpm;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kSolver = 3, kBand = 4 };

void emit_error(int code, const std::string& type, const std::string& message, json extra = json::object()) {
    json j{{"error", {{"code", code}, {"type", type}, {"message", message}}}};
    for (auto& [k, v] : extra.items()) j["error"][k] = v;
    std::cerr << j.dump() << "\n";
}

std::string fmt(double x) { return format_double(x); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json fit_json(const SlopeFit& f) {
    if (f.used == 0) return nullptr;
    json j{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"used", f.used},
           {"excluded", f.excluded}};
    if (f.excluded) j["excluded_x"] = f.excluded_x;
    return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

MaskProfile parse_profile(const std::string& s) {
    const auto comma = s.find(',');
    MaskProfile p{parse_mask_family(s.substr(0, comma)), 0.0};
    if (p.compact()) {
        p.c = 1.0;
        if (comma != std::string::npos) {
            const std::string opt = s.substr(comma + 1);
            if (opt.rfind("c=", 0) != 0) throw ConfigError("profile option must be c=<value>");
            p.c = parse_double(opt.substr(2));
        }
    } else if (comma != std::string::npos) {
        throw ConfigError("only compact profiles take c");
    }
    p.validate();
    if (!p.smooth()) throw ConfigError("calibration needs a smooth profile");
    return p;
}

ExecPolicy parse_exec(const std::string& s) {
    if (s == "serial") return ExecPolicy::serial;
    if (s == "parallel") return ExecPolicy::parallel;
    throw ConfigError("exec must be serial or parallel");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        write_file_atomic(path, content);
    }
}

std::string join_dir(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory '" + dir + "'");
}

// key = value overrides from --set
void apply_overrides(KeyValues& kv, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        auto trim = [](std::string x) {
            x.erase(0, x.find_first_not_of(" \t"));
            x.erase(x.find_last_not_of(" \t") + 1);
            return x;
        };
        kv.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

// ---- calibrate

struct CalibrateArgs {
    std::vector<std::string> profiles;
    std::string out, json_out;
};

void run_calibrate(const CalibrateArgs& a) {
    std::vector<MaskProfile> profiles;
    if (a.profiles.empty()) {
        profiles = {MaskProfile::tanh(), MaskProfile::erf(), compactify(MaskProfile::tanh(), 1.0),
                    compactify(MaskProfile::erf(), 1.0)};
    } else {
        for (const auto& p : a.profiles) profiles.push_back(parse_profile(p));
    }
    KeyValues kv;
    std::string names;
    for (std::size_t i = 0; i < profiles.size(); ++i) names += (i ? "; " : "") + format_profile(profiles[i]);
    kv.set("profiles", names);

    std::string csv = comment_header("calibrate", kv.canonical()) + "profile,delta,optimal_shift,residual\n";
    json results = json::array(), constants = json::object();
    for (const auto& p : profiles) {
        const CalibrationResult r = zero_shift_smoothing(p);
        csv += p.name() + "," + fmt(r.delta) + "," + fmt(r.optimal_shift) + "," + fmt(r.residual) + "\n";
        json row{{"profile", p.name()}, {"delta", r.delta}, {"optimal_shift", r.optimal_shift}, {"residual", r.residual}};
        if (const double tab = tabulated_zero_shift_smoothing(p); tab > 0.0) {
            row["tabulated"] = tab;
            row["deviation"] = r.delta - tab;
        }
        results.push_back(row);
        constants[p.name()] = r.delta;
    }
    if (!a.out.empty()) write_output(a.out, csv);
    json j{{"version", kVersion}, {"tool", "calibrate"}, {"config", kv.entries()}, {"constants", constants},
           {"results", results}};
    if (a.json_out.empty()) print_json(j);
    else write_output(a.json_out, j.dump(2) + "\n");
}

// ---- poiseuille

struct SweepArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    int jobs = 1;
};

std::vector<MaskRecipe> default_masks(bool compact) {
    const MaskProfile smooth = compact ? compactify(MaskProfile::erf(), 1.0) : MaskProfile::erf();
    return {{"standard", MaskProfile::discontinuous(), 0.0, false, 0.0, false},
            {"shifted", MaskProfile::discontinuous(), 1.0, true, 0.0, false},
            {"smoothed", smooth, 0.0, false, zero_shift_smoothing(smooth).delta, true}};
}

KeyValues sweep_config(const SweepArgs& a) {
    KeyValues kv = a.config.empty() ? KeyValues{} : KeyValues::load(a.config);
    apply_overrides(kv, a.sets);
    return kv;
}

void run_poiseuille(const SweepArgs& a, const std::vector<std::string>& flag_masks, const std::string& flag_eps) {
    KeyValues kv = sweep_config(a);
    if (!flag_eps.empty()) kv.set("eps", flag_eps);
    if (!flag_masks.empty()) {
        std::vector<MaskRecipe> ms;
        for (const auto& m : flag_masks) ms.push_back(parse_mask_recipe(m));
        kv.set("masks", format_mask_recipes(ms));
    }
    static const std::vector<std::string> known{"eps", "masks", "n", "x_min"};
    kv.require_known(known);
    const auto eps = kv.get_doubles("eps", {std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3});
    const auto masks = kv.has("masks") ? parse_mask_recipes(kv.get_string("masks", "")) : default_masks(false);
    const std::size_t n = kv.get_size("n", 4001);
    const double x_min = kv.get_double("x_min", -1.0);

    KeyValues canon;
    canon.set("eps", format_doubles(eps));
    canon.set("masks", format_mask_recipes(masks));
    canon.set("n", std::to_string(n));
    canon.set("x_min", fmt(x_min));

    const PoiseuilleSweep sw = poiseuille_sweep(eps, masks, n, x_min, a.jobs);
    std::string csv = comment_header("poiseuille", canon.canonical()) + "epsilon,mask,E1,Einf,slope_fit\n";
    for (const auto& r : sw.rows) {
        if (r.failure) throw NumericalError("poiseuille row eps = " + fmt(r.epsilon) + " failed: " + *r.failure);
        std::size_t m = 0;
        while (sw.masks[m] != r.mask) ++m;
        csv += fmt(r.epsilon) + "," + r.mask + "," + fmt(r.e1) + "," + fmt(r.einf) + "," + fmt(sw.fits[m].slope) + "\n";
    }
    json fits = json::object();
    for (std::size_t m = 0; m < sw.masks.size(); ++m) fits[sw.masks[m]] = fit_json(sw.fits[m]);
    write_output(a.out, csv);
    if (!a.out.empty() && a.out != "-") {
        print_json({{"version", kVersion}, {"tool", "poiseuille"}, {"config", canon.entries()}, {"fits", fits}});
    }
}

// ---- stagnation

void run_stagnation(const SweepArgs& a, const std::vector<std::string>& flag_masks, const std::string& flag_re,
                    const std::string& flag_eta) {
    KeyValues kv = sweep_config(a);
    if (!flag_re.empty()) kv.set("Re", flag_re);
    if (!flag_eta.empty()) kv.set("eta", flag_eta);
    if (!flag_masks.empty()) {
        std::vector<MaskRecipe> ms;
        for (const auto& m : flag_masks) ms.push_back(parse_mask_recipe(m));
        kv.set("masks", format_mask_recipes(ms));
    }
    static const std::vector<std::string> known{"Re", "eta", "masks", "n", "x_max"};
    kv.require_known(known);
    std::vector<double> default_eta;
    for (int k = -2; k >= -12; --k) default_eta.push_back(std::pow(10.0, k / 2.0));
    const auto re = kv.get_doubles("Re", {1.0, 100.0, 1000.0});
    const auto eta = kv.get_doubles("eta", default_eta);
    const auto masks = kv.has("masks") ? parse_mask_recipes(kv.get_string("masks", "")) : default_masks(true);
    const std::size_t n = kv.get_size("n", 4001);
    const double x_max = kv.get_double("x_max", 10.0);

    KeyValues canon;
    canon.set("Re", format_doubles(re));
    canon.set("eta", format_doubles(eta));
    canon.set("masks", format_mask_recipes(masks));
    canon.set("n", std::to_string(n));
    canon.set("x_max", fmt(x_max));

    const StagnationSweep sw = stagnation_regime_sweep(re, eta, masks, x_max, n, a.jobs);
    std::string csv = comment_header("stagnation", canon.canonical()) + "Re,eta,eps,mask,E1,Einf\n";
    for (const auto& r : sw.rows) {
        if (r.failure) {
            throw NumericalError("stagnation row Re = " + fmt(r.Re) + ", eta = " + fmt(r.eta) + " failed: " + *r.failure);
        }
        csv += fmt(r.Re) + "," + fmt(r.eta) + "," + fmt(r.eps) + "," + r.mask + "," + fmt(r.e1) + "," + fmt(r.einf) + "\n";
    }
    write_output(a.out, csv);
    json fits = json::array();
    for (const auto& f : sw.fits) {
        fits.push_back({{"Re", f.Re},
                        {"mask", f.mask},
                        {"single", fit_json(f.single)},
                        {"slope_high", optional_json(f.slope_high)},
                        {"slope_low", optional_json(f.slope_low)},
                        {"break_eta", optional_json(f.break_eta)}});
    }
    if (!a.out.empty() && a.out != "-") {
        print_json({{"version", kVersion}, {"tool", "stagnation"}, {"config", canon.entries()}, {"fits", fits}});
    }
}

// ---- cylinder

struct CylinderArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string mode = "penalized";
    std::string out_dir = ".";
    std::string exec = "parallel";
    std::vector<double> snapshot_times;
    bool print_config = false;
};

json norms_json(const ErrorNorms& n) { return {{"E1", n.e1}, {"Einf", n.einf}}; }

void run_cylinder(const CylinderArgs& a) {
    KeyValues kv = a.config.empty() ? KeyValues{} : KeyValues::load(a.config);
    apply_overrides(kv, a.sets);
    const CylinderRunConfig rc = cylinder_run_config(kv);
    const std::string canon = to_key_values(rc).canonical();
    if (a.print_config) {
        std::cout << canon;
        return;
    }
    const CylinderConfig cfg = rc.resolved();
    if (a.mode != "penalized" && a.mode != "reference" && a.mode != "both") {
        throw ConfigError("mode must be penalized, reference or both");
    }
    ensure_dir(a.out_dir);
    const std::string header = comment_header("cylinder", canon);

    RunOptions opts;
    opts.exec = parse_exec(a.exec);
    opts.snapshot_times = a.snapshot_times;

    std::vector<CaseResult> results;
    for (CylinderMode mode : {CylinderMode::penalized, CylinderMode::reference}) {
        const std::string name = to_string(mode);
        if (a.mode != "both" && a.mode != name) continue;
        opts.checkpoint_path = join_dir(a.out_dir, "checkpoint_" + name + ".bin");
        std::cerr << "running " << name << "\n";
        CaseResult r = run_case(cfg, mode, opts);
        std::cerr << name << ": " << r.steps << " steps, " << r.wall_seconds << " s\n";
        write_file_atomic(join_dir(a.out_dir, "forces_" + name + ".csv"), forces_csv(r.series, header));
        for (const auto& s : r.snapshots) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "snapshot_%s_t%.6f.bin", name.c_str(), s.t);
            write_snapshot(join_dir(a.out_dir, buf), s);
        }
        results.push_back(std::move(r));
    }
    if (results.size() == 2) {
        const auto& pen = results[0];
        const auto& ref = results[1];
        const auto fe = field_errors(pen.snapshots.back().fields, ref.snapshots.back().fields, 1.0, cfg.R2);
        const auto ce = force_errors(pen.series, ref.series);
        json j{{"version", kVersion},
               {"tool", "cylinder"},
               {"config", to_key_values(rc).entries()},
               {"t", pen.final_state.t},
               {"fields", {{"u", norms_json(fe.u)}, {"v", norms_json(fe.v)}, {"P", norms_json(fe.P)},
                           {"omega", norms_json(fe.omega)}, {"r_lo", fe.r_lo}, {"r_hi", fe.r_hi}}},
               {"forces", {{"max_abs_dFx", ce.max_abs_dFx}, {"max_abs_dFy", ce.max_abs_dFy}, {"max_abs_dT", ce.max_abs_dT}}}};
        write_file_atomic(join_dir(a.out_dir, "errors.json"), j.dump(2) + "\n");
        print_json(j);
    }
}


// ---- extrapolate

struct ExtrapolateArgs {
    std::string a, b, out;
    double eta_a = 0.0, eta_b = 0.0;
};

bool is_snapshot(const std::string& path) { return std::filesystem::path(path).extension() == ".bin"; }

void run_extrapolate(const ExtrapolateArgs& x) {
    if (!(x.eta_a > 0.0) || !(x.eta_b > 0.0) || x.eta_a == x.eta_b) {
        throw ConfigError("extrapolation needs two distinct positive etas");
    }
    if (x.out.empty()) throw ConfigError("--out is required");
    if (is_snapshot(x.a) != is_snapshot(x.b)) throw ConfigError("inputs must both be snapshots or both be CSV series");
    if (is_snapshot(x.a)) {
        const Snapshot sa = read_snapshot(x.a), sb = read_snapshot(x.b);
        if (sa.fields.r != sb.fields.r || sa.fields.n_theta != sb.fields.n_theta) {
            throw ConfigError("snapshots are on different grids");
        }
        Snapshot out = sa;
        out.fields.u = richardson(sa.fields.u, x.eta_a, sb.fields.u, x.eta_b);
        out.fields.v = richardson(sa.fields.v, x.eta_a, sb.fields.v, x.eta_b);
        out.fields.P = richardson(sa.fields.P, x.eta_a, sb.fields.P, x.eta_b);
        out.fields.omega = richardson(sa.fields.omega, x.eta_a, sb.fields.omega, x.eta_b);
        write_snapshot(x.out, out);
        return;
    }
    const CsvTable ta = read_csv(x.a), tb = read_csv(x.b);
    if (ta.columns != tb.columns || ta.rows.size() != tb.rows.size()) {
        throw ConfigError("series have different columns or lengths");
    }
    KeyValues kv;
    kv.set("a", x.a);
    kv.set("b", x.b);
    kv.set("eta_a", fmt(x.eta_a));
    kv.set("eta_b", fmt(x.eta_b));
    std::string csv = comment_header("extrapolate", kv.canonical());
    for (std::size_t c = 0; c < ta.columns.size(); ++c) csv += (c ? "," : "") + ta.columns[c];
    csv += "\n";
    std::vector<std::vector<double>> cols;
    for (std::size_t c = 0; c < ta.columns.size(); ++c) {
        const auto ya = ta.numbers(c), yb = tb.numbers(c);
        if (ta.columns[c] == "t") {
            for (std::size_t i = 0; i < ya.size(); ++i) {
                if (std::abs(ya[i] - yb[i]) > 1e-9 * std::max(1.0, std::abs(ya[i]))) {
                    throw ConfigError("series sample different times");
                }
            }
            cols.push_back(ya);
        } else {
            cols.push_back(richardson(ya, x.eta_a, yb, x.eta_b));
        }
    }
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) csv += (c ? "," : "") + fmt(cols[c][i]);
        csv += "\n";
    }
    write_output(x.out, csv);
}

// ---- classify, slope

void run_classify(double Re, double eta) {
    const PenaltyParams p = classify_regime(Re, eta);
    print_json({{"Re", p.Re}, {"eta", p.eta}, {"eps", p.eps}, {"regime", to_string(p.regime)}});
}

struct SlopeArgs {
    std::string in, x, y;
    bool no_exclusion = false;
};

void run_slope(const SlopeArgs& a) {
    const CsvTable t = a.in.empty() || a.in == "-" ? parse_csv(std::string(std::istreambuf_iterator<char>(std::cin), {}))
                                                   : read_csv(a.in);
    if (t.columns.size() < 2 && (a.x.empty() || a.y.empty())) throw ConfigError("slope needs two columns");
    const std::size_t cx = a.x.empty() ? 0 : t.column(a.x);
    const std::size_t cy = a.y.empty() ? 1 : t.column(a.y);
    const SlopeFit f = fit_slope(t.numbers(cx), t.numbers(cy), !a.no_exclusion);
    json j = fit_json(f);
    j["x"] = t.columns[cx];
    j["y"] = t.columns[cy];
    print_json(j);
}

// ---- repro

struct ReproArgs {
    std::string id, out_dir = ".", exec = "parallel";
};

int run_repro_cmd(const ReproArgs& a, int jobs) {
    ReproOptions opts;
    opts.jobs = jobs;
    opts.exec = parse_exec(a.exec);
    opts.log = [](const std::string& s) { std::cerr << s << "\n"; };
    const ReproOutput r = run_repro(a.id, opts);
    ensure_dir(a.out_dir);
    for (const auto& [name, content] : r.files) write_file_atomic(join_dir(a.out_dir, name), content);
    json checks = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name}, {"applicable", c.applicable}};
        if (c.applicable) {
            j["value"] = c.value;
            j["lo"] = c.lo;
            j["hi"] = std::isfinite(c.hi) ? json(c.hi) : json("inf");
            j["pass"] = c.pass;
        }
        checks.push_back(j);
    }
    json summary{{"version", kVersion}, {"repro", r.id}, {"passed", r.passed()}, {"checks", checks}};
    write_file_atomic(join_dir(a.out_dir, "summary_" + r.id + ".json"), summary.dump(2) + "\n");
    print_json(summary);
    std::cerr << r.id << " finished in " << r.wall_seconds << " s\n";
    return r.passed() ? kOk : kBand;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volume penalization calibration and verification toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    int jobs = omp_get_num_procs();
    app.add_option("-j,--jobs", jobs, "parallel jobs for sweeps and per-mode solves")->check(CLI::PositiveNumber);

    CalibrateArgs cal;
    auto* c_cal = app.add_subcommand("calibrate", "zero-shift smoothing delta* per profile");
    c_cal->add_option("--profile", cal.profiles, "tanh, erf, compact_tanh[,c=C], compact_erf[,c=C]; default: all four");
    c_cal->add_option("--out", cal.out, "CSV output (profile, delta, optimal_shift, residual)");
    c_cal->add_option("--json", cal.json_out, "JSON output; default stdout");

    SweepArgs pois;
    std::vector<std::string> pois_masks;
    std::string pois_eps;
    auto* c_pois = app.add_subcommand("poiseuille", "penalized channel flow sweep over eps");
    c_pois->add_option("--config", pois.config, "key = value config (eps, masks, n, x_min)");
    c_pois->add_option("--set", pois.sets, "override a config key: key=value");
    c_pois->add_option("--eps", pois_eps, "comma separated eps list");
    c_pois->add_option("--mask", pois_masks, "mask recipe [label:]profile[,c=C][,shift=X[eps]][,delta=X[eps]]");
    c_pois->add_option("--out", pois.out, "CSV output; default stdout");

    SweepArgs stag;
    std::vector<std::string> stag_masks;
    std::string stag_re, stag_eta;
    auto* c_stag = app.add_subcommand("stagnation", "stagnation-point flow sweep over Re and eta");
    c_stag->add_option("--config", stag.config, "key = value config (Re, eta, masks, n, x_max)");
    c_stag->add_option("--set", stag.sets, "override a config key: key=value");
    c_stag->add_option("--re", stag_re, "comma separated Re list");
    c_stag->add_option("--eta", stag_eta, "comma separated eta list");
    c_stag->add_option("--mask", stag_masks, "mask recipe, repeatable");
    c_stag->add_option("--out", stag.out, "CSV output; default stdout");

    CylinderArgs cyl;
    auto* c_cyl = app.add_subcommand("cylinder", "rotating cylinder, penalized and/or reference");
    c_cyl->add_option("--config", cyl.config, "key = value config with CylinderConfig fields");
    c_cyl->add_option("--set", cyl.sets, "override a config key: key=value");
    c_cyl->add_option("--mode", cyl.mode, "penalized, reference or both")->check(CLI::IsMember({"penalized", "reference", "both"}));
    c_cyl->add_option("--out-dir", cyl.out_dir, "output directory");
    c_cyl->add_option("--exec", cyl.exec, "serial or parallel mode solves")->check(CLI::IsMember({"serial", "parallel"}));
    c_cyl->add_option("--snapshot", cyl.snapshot_times, "extra snapshot times");
    c_cyl->add_flag("--print-config", cyl.print_config, "print the canonical config and exit");

    ExtrapolateArgs ext;
    auto* c_ext = app.add_subcommand("extrapolate", "Richardson extrapolation of two runs in eta");
    c_ext->add_option("--a", ext.a, "first run: forces CSV or snapshot .bin")->required();
    c_ext->add_option("--eta-a", ext.eta_a, "eta of the first run")->required();
    c_ext->add_option("--b", ext.b, "second run")->required();
    c_ext->add_option("--eta-b", ext.eta_b, "eta of the second run")->required();
    c_ext->add_option("--out", ext.out, "output path")->required();

    double cls_re = 0.0, cls_eta = 0.0;
    auto* c_cls = app.add_subcommand("classify", "damping regime of (Re, eta)");
    c_cls->add_option("--re", cls_re, "Reynolds number")->required();
    c_cls->add_option("--eta", cls_eta, "damping time scale")->required();

    SlopeArgs slp;
    auto* c_slp = app.add_subcommand("slope", "log-log slope of a CSV column pair");
    c_slp->add_option("--in", slp.in, "CSV input; default stdin");
    c_slp->add_option("--x", slp.x, "x column; default first");
    c_slp->add_option("--y", slp.y, "y column; default second");
    c_slp->add_flag("--no-exclusion", slp.no_exclusion, "keep the largest-x point unconditionally");

    ReproArgs rep;
    auto* c_rep = app.add_subcommand("repro", "pinned desk-scale recipes with acceptance bands");
    c_rep->add_option("id", rep.id, "table1, fig4, fig5, fig6-desk, cylinder-desk")->required()->check(CLI::IsMember(repro_ids()));
    c_rep->add_option("--out-dir", rep.out_dir, "output directory");
    c_rep->add_option("--exec", rep.exec, "serial or parallel mode solves")->check(CLI::IsMember({"serial", "parallel"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(kUsage, "usage", e.what());
        return kUsage;
    }

    omp_set_num_threads(jobs);
    pois.jobs = jobs;
    stag.jobs = jobs;
    try {
        if (*c_cal) run_calibrate(cal);
        if (*c_pois) run_poiseuille(pois, pois_masks, pois_eps);
        if (*c_stag) run_stagnation(stag, stag_masks, stag_re, stag_eta);
        if (*c_cyl) run_cylinder(cyl);
        if (*c_ext) run_extrapolate(ext);
        if (*c_cls) run_classify(cls_re, cls_eta);
        if (*c_slp) run_slope(slp);
        if (*c_rep) return run_repro_cmd(rep, jobs);
        return kOk;
    } catch (const ConfigError& e) {
        emit_error(kConfig, "config", e.what());
        return kConfig;
    } catch (const StepError& e) {
        emit_error(kSolver, "solver", e.what(), {{"t", e.time()}});
        return kSolver;
    } catch (const NumericalError& e) {
        emit_error(kSolver, "solver", e.what());
        return kSolver;
    } catch (const std::exception& e) {
        emit_error(kUsage, "io", e.what());
        return kUsage;
    }
}
