#include "vpm/calibration/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vpm/error.hpp"
#include "vpm/numerics/banded.hpp"
#include "vpm/numerics/ivp.hpp"
#include "vpm/numerics/roots.hpp"
#include "vpm/numerics/special.hpp"

namespace vpm {

double riccati_optimal_shift(const MaskProfile& profile, double delta, double c_eff, const SolveOptions& opts) {
    if (!profile.smooth()) throw ConfigError("riccati_optimal_shift: profile must be smooth");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("riccati_optimal_shift: delta must be positive");
    if (!(c_eff > 0.0)) throw ConfigError("riccati_optimal_shift: c_eff must be positive");
    const double d2 = delta * delta;
    auto rhs = [&](double z, double r) { return d2 * eval_normalized(profile, z) - r * r; };
    // R stays O(delta) when delta is small; scale the absolute tolerance with it.
    SolveOptions o = opts;
    o.abs_tol = opts.abs_tol * std::min(1.0, delta);
    double r = 0.0;
    try {
        r = integrate_ivp(rhs, delta, -c_eff, c_eff, o);
    } catch (const IntegrationError& e) {
        throw CalibrationError(std::string("Riccati integration failed: ") + e.what());
    }
    if (!(r > 0.0) || !std::isfinite(r)) throw CalibrationError("Riccati solution left (0, inf); invalid profile");
    return (1.0 / r - c_eff) * delta;
}

double riccati_optimal_shift(const MaskProfile& profile, double delta) {
    return riccati_optimal_shift(profile, delta, effective_cutoff(profile));
}

CalibrationResult zero_shift_smoothing(const MaskProfile& profile, const SolveOptions& opts) {
    if (!profile.smooth()) throw ConfigError("zero_shift_smoothing: profile must be smooth");
    const double c = effective_cutoff(profile);
    auto f = [&](double d) { return riccati_optimal_shift(profile, d, c); };
    RootResult root;
    try {
        root = find_root_bracketed(f, 0.5, 6.0, opts);
    } catch (const NumericalError& e) {
        throw CalibrationError(std::string("zero_shift_smoothing: ") + e.what());
    }
    return {profile, root.root, f(root.root), root.residual};
}

double tabulated_zero_shift_smoothing(const MaskProfile& p) {
    switch (p.family) {
        case MaskFamily::erf: return 3.113467865158625;
        case MaskFamily::tanh: return 2.648228280104068;
        case MaskFamily::compact_erf: return p.c == 1.0 ? 3.801719284432660 : 0.0;
        case MaskFamily::compact_tanh: return p.c == 1.0 ? 3.544030484658485 : 0.0;
        case MaskFamily::discontinuous: return 0.0;
    }
    return 0.0;
}

double tanh_offset_analytic(double n) {
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("tanh_offset_analytic: n must be positive");
    return 0.5 / n + digamma(n) + std::numbers::egamma;
}

double tanh_offset_root() {
    return find_root_bracketed(tanh_offset_analytic, 0.5, 1.0, {1e-14, 1e-15, 200}).root;
}

Interval inner_domain(const MaskSpec& spec, double margin) {
    const double w = spec.transition_halfwidth();
    return {spec.shift - w - margin, spec.shift + w + margin};
}

InnerSolution solve_inner_bvp(const MaskSpec& spec, double xi_min, double xi_max, std::size_t n) {
    spec.validate();
    if (n < 200) throw ConfigError("solve_inner_bvp: need N >= 200");
    if (!(xi_max > xi_min)) throw ConfigError("solve_inner_bvp: need xi_max > xi_min");
    if (std::abs(eval_mask(spec, xi_min) - 1.0) >= 1e-12 || std::abs(eval_mask(spec, xi_max)) >= 1e-12) {
        throw ConfigError("solve_inner_bvp: mask not saturated at the domain ends");
    }
    const double l = spec.shift;
    const double w = spec.transition_halfwidth();
    GradingSpec gs;
    gs.anchors = {xi_min, xi_max};
    if (l > xi_min && l < xi_max) gs.anchors.push_back(l);
    if (spec.profile.compact() && w > 0.0) {
        if (l - w > xi_min) gs.anchors.push_back(l - w);
        if (l + w < xi_max) gs.anchors.push_back(l + w);
    }
    const double core = spec.delta > 0.0 ? std::min(w, 4.0 * spec.delta) : 0.0;
    gs.focus = {{l - core, l + core}};
    gs.width = 0.05;
    gs.background = 0.5;
    gs.nodes = n;
    Grid1D grid = graded_grid(gs);

    // Dual cells [m_{i-1}, m_i] around node i, with m at cell midpoints.
    const auto x = grid.nodes();
    BandedMatrix a(n, 1, 1);
    std::vector<double> rhs(n, 0.0);
    auto gamma_int = [&](double lo, double hi) { return hi > lo ? cell_average(spec, lo, hi) * (hi - lo) : 0.0; };
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? x[0] : 0.5 * (x[i - 1] + x[i]);
        const double hi = i + 1 == n ? x[n - 1] : 0.5 * (x[i] + x[i + 1]);
        double diag = gamma_int(lo, x[i]) + gamma_int(x[i], hi);
        if (i > 0) {
            const double g = 1.0 / (x[i] - x[i - 1]);
            a.at(i, i - 1) = -g;
            diag += g;
        }
        if (i + 1 < n) {
            const double g = 1.0 / (x[i + 1] - x[i]);
            a.at(i, i + 1) = -g;
            diag += g;
        }
        a.at(i, i) = diag;
    }
    // Half-cell closures: outward flux U'(xi_min) = U there, U'(xi_max) = 1.
    BoundaryClosure bc;
    bc.first.coeffs = {{0, a.get(0, 0) + 1.0}, {1, a.get(0, 1)}};
    bc.first.value = 0.0;
    bc.last.coeffs = {{n - 2, a.get(n - 1, n - 2)}, {n - 1, a.get(n - 1, n - 1)}};
    bc.last.value = 1.0;
    BvpSolution sol = solve_banded_bvp(std::move(a), std::move(rhs), bc);

    InnerSolution out;
    out.U = std::move(sol.values);
    // Two-point linear fit over the last 10% of the domain.
    const double x_fit = x[n - 1] - 0.1 * (x[n - 1] - x[0]);
    std::size_t k = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), x_fit) - x.begin());
    k = std::min(k, n - 2);
    const double slope = (out.U[n - 1] - out.U[k]) / (x[n - 1] - x[k]);
    out.displacement = x[n - 1] - out.U[n - 1] / slope;
    out.grid = std::move(grid);
    return out;
}

}  // namespace vpm
