#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "vpm/cylinder/cylinder.hpp"
#include "vpm/error.hpp"
#include "vpm/numerics/spline.hpp"

namespace vpm {

namespace {

constexpr double kDivergenceTol = 1e-8;

std::size_t steps_for(double span, double dt) {
    const double n = std::round(span / dt);
    if (std::abs(n * dt - span) > 1e-9 * std::max(1.0, span)) {
        throw ConfigError("t_end and output_interval must be whole multiples of dt");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

CaseResult run_case(const CylinderConfig& cfg_in, CylinderMode mode, const RunOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    const CylinderConfig cfg = mode == CylinderMode::reference ? reference_config(cfg_in) : cfg_in;
    cfg.validate(mode);

    CaseResult res;
    res.config = cfg;
    res.mode = mode;
    CylinderSolver solver(cfg, discretize(cfg, mode), opts.exec);
    res.disc = solver.discretization();
    res.series.method = mode == CylinderMode::penalized ? "volume" : "surface";

    const double dt = solver.dt();
    const std::size_t nsteps = steps_for(cfg.t_end, dt);
    const std::size_t stride = std::max<std::size_t>(1, steps_for(cfg.output_interval, dt));
    std::vector<double> pending = opts.snapshot_times;
    std::sort(pending.begin(), pending.end());

    auto sample = [&]() {
        const auto& s = solver.state();
        const DivergenceCheck dc = divergence_check(s, res.disc.grid, cfg.n_theta);
        const double ratio = dc.max_ru > 0.0 ? dc.max_residual / dc.max_ru : dc.max_residual;
        res.max_divergence_ratio = std::max(res.max_divergence_ratio, ratio);
        if (ratio > kDivergenceTol) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "divergence constraint violated: residual/max|ru| = %.3e", ratio);
            throw StepError(buf, s.t);
        }
        res.series.samples.push_back(solver.forces());
        if (opts.progress) opts.progress(s.t);
    };
    auto snap_due = [&]() {
        const double t = solver.state().t;
        while (!pending.empty() && pending.front() <= t + 0.5 * dt) {
            if (std::abs(pending.front() - t) <= 0.5 * dt) {
                res.snapshots.push_back({t, to_physical(solver.state(), res.disc.grid, cfg.n_theta)});
            }
            pending.erase(pending.begin());
        }
    };

    try {
        sample();
        snap_due();
        for (std::size_t n = 1; n <= nsteps; ++n) {
            solver.step();
            if (n % stride == 0 || n == nsteps) sample();
            snap_due();
        }
    } catch (const NumericalError&) {
        if (!opts.checkpoint_path.empty()) {
            write_snapshot(opts.checkpoint_path,
                           {solver.state().t, to_physical(solver.state(), res.disc.grid, cfg.n_theta)});
        }
        throw;
    }
    res.steps = solver.steps_taken();
    res.final_state = solver.state();
    if (res.snapshots.empty() || res.snapshots.back().t != res.final_state.t) {
        res.snapshots.push_back({res.final_state.t, to_physical(res.final_state, res.disc.grid, cfg.n_theta)});
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

namespace {

struct Resampled {
    std::vector<double> r;      // reference radii in the annulus
    std::vector<std::size_t> j;  // their reference row indices
    std::vector<double> u, v, P, omega;  // penalized values there, [row][k]
};

bool exact_match(const std::vector<double>& pr, double x, std::size_t& idx) {
    auto it = std::lower_bound(pr.begin(), pr.end(), x - 1e-13 * std::max(1.0, std::abs(x)));
    if (it != pr.end() && std::abs(*it - x) <= 1e-13 * std::max(1.0, std::abs(x))) {
        idx = static_cast<std::size_t>(it - pr.begin());
        return true;
    }
    return false;
}

Resampled resample(const PhysicalFields& pen, const PhysicalFields& ref, double r_lo, double r_hi, bool interpolate) {
    if (pen.n_theta != ref.n_theta) throw ConfigError("field comparison needs equal n_theta");
    if (!(r_hi > r_lo)) throw ConfigError("field comparison needs r_lo < r_hi");
    Resampled out;
    for (std::size_t j = 0; j < ref.r.size(); ++j) {
        if (ref.r[j] > r_lo && ref.r[j] < r_hi) {
            out.r.push_back(ref.r[j]);
            out.j.push_back(j);
        }
    }
    if (out.r.empty()) throw ConfigError("no reference nodes inside the comparison annulus");
    if (out.r.front() < pen.r.front() || out.r.back() > pen.r.back()) {
        throw ConfigError("comparison annulus extends past the penalized grid");
    }
    const std::size_t nt = ref.n_theta, nrows = out.r.size();
    std::vector<std::size_t> direct(nrows);
    bool all_direct = true;
    for (std::size_t i = 0; i < nrows; ++i) all_direct = exact_match(pen.r, out.r[i], direct[i]) && all_direct;
    if (!all_direct && !interpolate) throw ConfigError("grids differ and interpolation is disabled");

    auto take = [&](const std::vector<double>& f, std::vector<double>& dst) {
        dst.assign(nrows * nt, 0.0);
        if (all_direct) {
            for (std::size_t i = 0; i < nrows; ++i)
                for (std::size_t k = 0; k < nt; ++k) dst[i * nt + k] = f[direct[i] * nt + k];
            return;
        }
        // Spline over penalized nodes from the last one at or below r_lo.
        auto it = std::upper_bound(pen.r.begin(), pen.r.end(), r_lo);
        std::size_t j0 = it == pen.r.begin() ? 0 : static_cast<std::size_t>(it - pen.r.begin()) - 1;
        const std::vector<double> xr(pen.r.begin() + static_cast<std::ptrdiff_t>(j0), pen.r.end());
        std::vector<double> col(xr.size());
        for (std::size_t k = 0; k < nt; ++k) {
            for (std::size_t j = 0; j < xr.size(); ++j) col[j] = f[(j0 + j) * nt + k];
            const CubicSpline sp(xr, col);
            for (std::size_t i = 0; i < nrows; ++i) dst[i * nt + k] = sp(out.r[i]);
        }
    };
    take(pen.u, out.u);
    take(pen.v, out.v);
    take(pen.P, out.P);
    take(pen.omega, out.omega);
    return out;
}

const std::vector<double>& pick(const PhysicalFields& f, FieldVariable var) {
    switch (var) {
        case FieldVariable::u: return f.u;
        case FieldVariable::v: return f.v;
        case FieldVariable::P: return f.P;
        case FieldVariable::omega: return f.omega;
    }
    return f.u;
}

const std::vector<double>& pick(const Resampled& f, FieldVariable var) {
    switch (var) {
        case FieldVariable::u: return f.u;
        case FieldVariable::v: return f.v;
        case FieldVariable::P: return f.P;
        case FieldVariable::omega: return f.omega;
    }
    return f.u;
}

}  // namespace

FieldErrorReport field_errors(const PhysicalFields& pen, const PhysicalFields& ref, double r_lo, double r_hi,
                              bool interpolate) {
    const Resampled rs = resample(pen, ref, r_lo, r_hi, interpolate);
    const std::size_t nt = ref.n_theta, nrows = rs.r.size();
    // Area weights r dr dtheta with trapezoid widths over the annulus nodes.
    std::vector<double> w(nrows * nt);
    for (std::size_t i = 0; i < nrows; ++i) {
        const double left = i == 0 ? rs.r[0] : 0.5 * (rs.r[i] + rs.r[i - 1]);
        const double right = i + 1 == nrows ? rs.r[i] : 0.5 * (rs.r[i] + rs.r[i + 1]);
        const double wi = std::max(right - left, 0.0) * rs.r[i];
        for (std::size_t k = 0; k < nt; ++k) w[i * nt + k] = nrows == 1 ? 1.0 : wi;
    }
    auto norms = [&](FieldVariable var) {
        const auto& pf = pick(rs, var);
        const auto& rf = pick(ref, var);
        std::vector<double> rv(nrows * nt);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t k = 0; k < nt; ++k) rv[i * nt + k] = rf[rs.j[i] * nt + k];
        return error_norms(pf, rv, w);
    };
    FieldErrorReport rep;
    rep.u = norms(FieldVariable::u);
    rep.v = norms(FieldVariable::v);
    rep.P = norms(FieldVariable::P);
    rep.omega = norms(FieldVariable::omega);
    rep.r_lo = r_lo;
    rep.r_hi = r_hi;
    return rep;
}

std::vector<double> error_field(const PhysicalFields& pen, const PhysicalFields& ref, FieldVariable var, double r_lo,
                                double r_hi) {
    const Resampled rs = resample(pen, ref, r_lo, r_hi, true);
    const std::size_t nt = ref.n_theta;
    const auto& pf = pick(rs, var);
    const auto& rf = pick(ref, var);
    std::vector<double> e(pf.size());
    for (std::size_t i = 0; i < rs.r.size(); ++i)
        for (std::size_t k = 0; k < nt; ++k) e[i * nt + k] = pf[i * nt + k] - rf[rs.j[i] * nt + k];
    return e;
}

double shape_mismatch(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ConfigError("shape_mismatch: size mismatch");
    double ma = 0.0, mb = 0.0;
    for (double x : a) ma = std::max(ma, std::abs(x));
    for (double x : b) mb = std::max(mb, std::abs(x));
    if (ma == 0.0 || mb == 0.0) return ma == mb ? 0.0 : 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] / ma - b[i] / mb));
    return worst;
}

ForceErrors force_errors(const ForceTorqueSeries& pen, const ForceTorqueSeries& ref) {
    ForceErrors e;
    std::size_t k = 0;
    for (const auto& s : pen.samples) {
        const double tol = 1e-9 * std::max(1.0, std::abs(s.t));
        while (k < ref.samples.size() && ref.samples[k].t < s.t - tol) ++k;
        if (k == ref.samples.size() || std::abs(ref.samples[k].t - s.t) > tol) {
            throw ConfigError("force series have no common sample at t = " + std::to_string(s.t));
        }
        const auto& r = ref.samples[k];
        e.t.push_back(s.t);
        e.dFx.push_back(s.Fx - r.Fx);
        e.dFy.push_back(s.Fy - r.Fy);
        e.dT.push_back(s.T - r.T);
        if (&s == &pen.samples.front()) continue;
        e.max_abs_dFx = std::max(e.max_abs_dFx, std::abs(e.dFx.back()));
        e.max_abs_dFy = std::max(e.max_abs_dFy, std::abs(e.dFy.back()));
        e.max_abs_dT = std::max(e.max_abs_dT, std::abs(e.dT.back()));
    }
    return e;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    const auto& f = snap.fields;
    const std::size_t nr = f.r.size(), nt = f.n_theta;
    if (f.u.size() != nr * nt || f.v.size() != nr * nt || f.P.size() != nr * nt || f.omega.size() != nr * nt) {
        throw ConfigError("snapshot fields do not match their grid");
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp + " for writing");
        auto put = [&](const double* p, std::size_t n) {
            os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
        };
        const double header[4] = {static_cast<double>(nr), static_cast<double>(nt), 4.0, snap.t};
        put(header, 4);
        put(f.r.data(), nr);
        put(f.u.data(), nr * nt);
        put(f.v.data(), nr * nt);
        put(f.P.data(), nr * nt);
        put(f.omega.data(), nr * nt);
        if (!os) throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename " + tmp + " to " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    auto get = [&](double* p, std::size_t n) {
        is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
        if (!is) throw Error("truncated snapshot: " + path);
    };
    double header[4];
    get(header, 4);
    if (header[2] != 4.0 || !(header[0] >= 1.0) || !(header[1] >= 1.0)) throw Error("not a snapshot file: " + path);
    Snapshot s;
    const auto nr = static_cast<std::size_t>(header[0]);
    const auto nt = static_cast<std::size_t>(header[1]);
    s.t = header[3];
    s.fields.n_theta = nt;
    s.fields.r.resize(nr);
    get(s.fields.r.data(), nr);
    for (auto* f : {&s.fields.u, &s.fields.v, &s.fields.P, &s.fields.omega}) {
        f->resize(nr * nt);
        get(f->data(), nr * nt);
    }
    return s;
}

}  // namespace vpm
