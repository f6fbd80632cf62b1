#include "vpm/poiseuille/poiseuille.hpp"

#include <algorithm>
#include <cmath>

#include "vpm/error.hpp"
#include "vpm/numerics/banded.hpp"

namespace vpm {

void PoiseuilleProblem::validate() const {
    spec.validate();
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("poiseuille: need 0 < eps < 0.5");
    if (!(x_min <= -10.0 * epsilon)) throw ConfigError("poiseuille: need x_min <= -10 eps");
    if (n < 400) throw ConfigError("poiseuille: need N >= 400");
    const double w = spec.transition_halfwidth();
    if (spec.shift + w >= 1.0 || spec.shift - w <= x_min) {
        throw ConfigError("poiseuille: mask transition must lie inside (x_min, 1)");
    }
}

double poiseuille_exact(double x) { return x * (1.0 - x); }

Solution1D poiseuille_reference(std::size_t n) {
    Grid1D g = uniform_grid(0.0, 1.0, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = poiseuille_exact(g[i]);
    return {std::move(g), std::move(v)};
}

Solution1D poiseuille_penalized(const PoiseuilleProblem& pb) {
    pb.validate();
    const MaskSpec& spec = pb.spec;
    const double eps = pb.epsilon;
    const double l = spec.shift;
    const double w = spec.transition_halfwidth();
    const double d = std::max(spec.delta, 0.0);

    GradingSpec gs;
    gs.anchors = {pb.x_min, 0.0, 1.0, l};
    if (spec.profile.compact() && w > 0.0) {
        gs.anchors.push_back(l - w);
        gs.anchors.push_back(l + w);
    }
    gs.focus = {{l - 3.0 * d, l + 3.0 * d}, {0.0, 0.0}};
    gs.width = 0.05 * eps;
    gs.background = 0.2;
    gs.nodes = pb.n;
    Grid1D grid = graded_grid(gs);
    const auto x = grid.nodes();
    const std::size_t n = grid.size();

    const double inv_e2 = 1.0 / (eps * eps);
    BandedMatrix a(n, 1, 1);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? x[0] : 0.5 * (x[i - 1] + x[i]);
        const double hi = i + 1 == n ? x[n - 1] : 0.5 * (x[i] + x[i + 1]);
        double damp = 0.0;
        if (x[i] > lo) damp += cell_average(spec, lo, x[i]) * (x[i] - lo);
        if (hi > x[i]) damp += cell_average(spec, x[i], hi) * (hi - x[i]);
        double diag = damp * inv_e2;
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
        rhs[i] = 2.0 * (hi - lo);
    }
    BoundaryClosure bc;
    // Zero flux at x_min is the natural finite-volume row; v(1) = 0 is imposed.
    bc.first.coeffs = {{0, a.get(0, 0)}, {1, a.get(0, 1)}};
    bc.first.value = rhs[0];
    bc.last.coeffs = {{n - 1, 1.0}};
    bc.last.value = 0.0;
    BvpSolution sol = solve_banded_bvp(std::move(a), std::move(rhs), bc);
    return {std::move(grid), std::move(sol.values)};
}

ErrorNorms poiseuille_fluid_errors(const Solution1D& s) {
    const auto x = s.grid.nodes();
    const std::size_t k0 = s.grid.find_node(0.0);
    if (k0 >= x.size()) throw ConfigError("poiseuille_fluid_errors: x = 0 is not a grid node");
    std::vector<double> f(s.values.begin() + static_cast<std::ptrdiff_t>(k0), s.values.end());
    std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(k0), x.end());
    std::vector<double> ref(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ref[i] = poiseuille_exact(xs[i]);
    Grid1D fluid(xs);
    return error_norms(f, ref, fluid.weights());
}

PoiseuilleSweep poiseuille_sweep(const std::vector<double>& eps_list, const std::vector<MaskRecipe>& masks,
                                 std::size_t n, double x_min, int jobs) {
    if (eps_list.size() < 4) throw ConfigError("poiseuille_sweep: need at least four eps values");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
        if (!(eps_list[i] > eps_list[i + 1])) throw ConfigError("poiseuille_sweep: eps list must be decreasing");
    }
    PoiseuilleSweep out;
    const std::size_t ne = eps_list.size();
    out.rows.resize(masks.size() * ne);
    const auto total = static_cast<long>(out.rows.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1)) if (jobs > 1)
    for (long k = 0; k < total; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const MaskRecipe& m = masks[uk / ne];
        PoiseuilleRow row;
        row.epsilon = eps_list[uk % ne];
        row.mask = m.label;
        try {
            PoiseuilleProblem pb{row.epsilon, m.at(row.epsilon), x_min, n};
            Solution1D s = poiseuille_penalized(pb);
            const ErrorNorms e = poiseuille_fluid_errors(s);
            row.e1 = e.e1;
            row.einf = e.einf;
            row.plateau = s.values.front();
        } catch (const Error& e) {
            row.failure = e.what();
        }
        out.rows[uk] = std::move(row);
    }
    for (std::size_t mi = 0; mi < masks.size(); ++mi) {
        out.masks.push_back(masks[mi].label);
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < ne; ++j) {
            const auto& r = out.rows[mi * ne + j];
            if (!r.failure && r.e1 > 0.0) {
                xs.push_back(r.epsilon);
                ys.push_back(r.e1);
            }
        }
        out.fits.push_back(xs.size() >= 3 ? fit_slope(xs, ys) : SlopeFit{});
    }
    return out;
}

}  // namespace vpm
