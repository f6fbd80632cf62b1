#include "vpm/stagnation/stagnation.hpp"

#include <algorithm>
#include <cmath>

#include "vpm/error.hpp"

namespace vpm {

double StagnationProblem::eps() const { return std::sqrt(eta / Re); }

void StagnationProblem::validate() const {
    spec.validate();
    if (!(Re > 0.0)) throw ConfigError("stagnation: Re must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("stagnation: need 0 < eta < 1");
    if (!(eps() < 0.3)) throw ConfigError("stagnation: need eps = sqrt(eta/Re) < 0.3");
    if (!(x_max >= 10.0)) throw ConfigError("stagnation: need x_max >= 10");
    if (n < 800) throw ConfigError("stagnation: need N >= 800");
    const double w = spec.transition_halfwidth();
    if (spec.shift - w <= -1.0 || spec.shift + w >= x_max) {
        throw ConfigError("stagnation: mask transition must lie inside (-1, x_max)");
    }
}

StagnationSystem::StagnationSystem(Grid1D grid, double Re, std::vector<double> damping)
    : grid_(std::move(grid)), Re_(Re), damping_(std::move(damping)) {
    if (!damping_.empty() && damping_.size() + 1 != grid_.size()) {
        throw ConfigError("StagnationSystem: one damping value per interval expected");
    }
}

void StagnationSystem::residual(std::span<const double> y, std::span<double> f) const {
    const std::size_t n = grid_.size();
    const double inv_re = 1.0 / Re_;
    f[0] = y[0];
    f[1] = y[1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid_.spacing(i);
        const double* a = &y[3 * i];
        const double* b = &y[3 * i + 3];
        const double um = 0.5 * (a[0] + b[0]);
        const double fm = 0.5 * (a[1] + b[1]);
        const double gm = 0.5 * (a[2] + b[2]);
        const double damp = damping_.empty() ? 0.0 : damping_[i];
        double* r = &f[2 + 3 * i];
        r[0] = b[0] - a[0] - h * fm;
        r[1] = b[1] - a[1] - h * gm;
        r[2] = (b[2] - a[2]) * inv_re - h * (fm * fm - um * gm + damp * fm - 1.0);
    }
    f[3 * n - 1] = y[3 * n - 2] - 1.0;
}

void StagnationSystem::jacobian(std::span<const double> y, BandedMatrix& jac) const {
    const std::size_t n = grid_.size();
    const double inv_re = 1.0 / Re_;
    jac.at(0, 0) = 1.0;
    jac.at(1, 1) = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid_.spacing(i);
        const std::size_t c = 3 * i;
        const std::size_t r = 2 + 3 * i;
        const double um = 0.5 * (y[c] + y[c + 3]);
        const double fm = 0.5 * (y[c + 1] + y[c + 4]);
        const double gm = 0.5 * (y[c + 2] + y[c + 5]);
        const double damp = damping_.empty() ? 0.0 : damping_[i];

        jac.at(r, c) = -1.0;
        jac.at(r, c + 3) = 1.0;
        jac.at(r, c + 1) = -0.5 * h;
        jac.at(r, c + 4) = -0.5 * h;

        jac.at(r + 1, c + 1) = -1.0;
        jac.at(r + 1, c + 4) = 1.0;
        jac.at(r + 1, c + 2) = -0.5 * h;
        jac.at(r + 1, c + 5) = -0.5 * h;

        const double du = 0.5 * h * gm;
        const double df = -h * (fm + 0.5 * damp);
        jac.at(r + 2, c) = du;
        jac.at(r + 2, c + 3) = du;
        jac.at(r + 2, c + 1) = df;
        jac.at(r + 2, c + 4) = df;
        jac.at(r + 2, c + 2) = -inv_re + 0.5 * h * um;
        jac.at(r + 2, c + 5) = inv_re + 0.5 * h * um;
    }
    jac.at(3 * n - 1, 3 * n - 2) = 1.0;
}

namespace {

StagnationSolution unpack(const Grid1D& grid, const NewtonResult& nr) {
    StagnationSolution s;
    const std::size_t n = grid.size();
    s.u.resize(n);
    s.du.resize(n);
    s.d2u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.u[i] = nr.x[3 * i];
        s.du[i] = nr.x[3 * i + 1];
        s.d2u[i] = nr.x[3 * i + 2];
    }
    s.grid = grid;
    s.newton_iterations = nr.iterations;
    s.residual_norm = nr.residual_norm;
    return s;
}

NewtonResult solve_system(const StagnationSystem& sys, std::vector<double> guess, const SolveOptions& opts) {
    auto res = [&sys](std::span<const double> y, std::span<double> f) { sys.residual(y, f); };
    auto jac = [&sys](std::span<const double> y, BandedMatrix& j) { sys.jacobian(y, j); };
    return newton_solve(res, jac, std::move(guess), StagnationSystem::band, opts);
}

double linear_interp(std::span<const double> x, std::span<const double> v, double t) {
    if (t <= x.front()) return v.front();
    if (t >= x.back()) return v.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
    const double w = (t - x[k - 1]) / (x[k] - x[k - 1]);
    return (1.0 - w) * v[k - 1] + w * v[k];
}

}  // namespace

StagnationSolution stagnation_reference(double Re, const Grid1D& grid, const SolveOptions& opts) {
    if (!(Re > 0.0)) throw ConfigError("stagnation_reference: Re must be positive");
    if (grid.front() != 0.0) throw ConfigError("stagnation_reference: grid must start at 0");
    const std::size_t n = grid.size();
    const double k = 1.2 * std::sqrt(Re);
    std::vector<double> y(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid[i];
        const double e = std::exp(-k * x);
        y[3 * i] = x - (1.0 - e) / k;
        y[3 * i + 1] = 1.0 - e;
        y[3 * i + 2] = k * e;
    }
    StagnationSystem sys(grid, Re, {});
    return unpack(grid, solve_system(sys, std::move(y), opts));
}

StagnationSolution stagnation_reference(double Re, double x_max, std::size_t n) {
    if (n < 800) throw ConfigError("stagnation_reference: need N >= 800");
    if (!(x_max >= 10.0)) throw ConfigError("stagnation_reference: need x_max >= 10");
    const double bl = std::min(1.0, 1.0 / std::sqrt(Re));
    GradingSpec gs{{0.0, x_max}, {{0.0, 0.0}}, 0.05 * bl, 0.2, n};
    return stagnation_reference(Re, graded_grid(gs));
}

Grid1D stagnation_grid(const StagnationProblem& pb) {
    const MaskSpec& spec = pb.spec;
    const double eps = pb.eps();
    const double l = spec.shift;
    const double w = spec.transition_halfwidth();
    const double d = spec.delta;
    GradingSpec gs;
    gs.anchors = {-1.0, 0.0, pb.x_max, l};
    if (spec.profile.compact() && w > 0.0) {
        gs.anchors.push_back(l - w);
        gs.anchors.push_back(l + w);
    }
    gs.focus = {{l - 3.0 * d, l + 3.0 * d}, {0.0, 0.0}};
    gs.width = 0.05 * std::min(eps, 1.0 / std::sqrt(pb.Re));
    gs.background = 0.2;
    gs.nodes = pb.n;
    return graded_grid(gs);
}

StagnationSolution stagnation_penalized(const StagnationProblem& pb, const std::vector<double>* guess,
                                        const SolveOptions& opts) {
    pb.validate();
    Grid1D grid = stagnation_grid(pb);
    const std::size_t n = grid.size();
    std::vector<double> damping(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) damping[i] = cell_average(pb.spec, grid[i], grid[i + 1]) / pb.eta;

    std::vector<double> y;
    if (guess) {
        if (guess->size() != 3 * n) throw ConfigError("stagnation_penalized: guess size mismatch");
        y = *guess;
    } else {
        const std::size_t k0 = grid.find_node(0.0);
        std::vector<double> fluid(grid.nodes().begin() + static_cast<std::ptrdiff_t>(k0), grid.nodes().end());
        StagnationSolution ref = stagnation_reference(pb.Re, Grid1D(fluid), opts);
        y.assign(3 * n, 0.0);
        for (std::size_t i = k0; i < n; ++i) {
            y[3 * i] = ref.u[i - k0];
            y[3 * i + 1] = ref.du[i - k0];
            y[3 * i + 2] = ref.d2u[i - k0];
        }
    }
    StagnationSystem sys(grid, pb.Re, std::move(damping));
    return unpack(grid, solve_system(sys, std::move(y), opts));
}

StagnationSolution stagnation_reference_on(const StagnationSolution& pen, double Re) {
    const std::size_t k0 = pen.grid.find_node(0.0);
    if (k0 >= pen.grid.size()) throw ConfigError("stagnation_reference_on: x = 0 is not a node");
    std::vector<double> fluid(pen.grid.nodes().begin() + static_cast<std::ptrdiff_t>(k0), pen.grid.nodes().end());
    return stagnation_reference(Re, Grid1D(std::move(fluid)));
}

ErrorNorms stagnation_fluid_errors(const StagnationSolution& pen, const StagnationSolution& ref) {
    const std::size_t k0 = pen.grid.find_node(0.0);
    if (k0 >= pen.grid.size() || pen.grid.size() - k0 != ref.grid.size()) {
        throw ConfigError("stagnation_fluid_errors: grids do not share the fluid nodes");
    }
    std::vector<double> f(pen.u.begin() + static_cast<std::ptrdiff_t>(k0), pen.u.end());
    return error_norms(f, ref.u, ref.grid.weights());
}

SegmentFit fit_segments(double Re, const std::string& mask, std::span<const double> eta, std::span<const double> e1) {
    SegmentFit out;
    out.Re = Re;
    out.mask = mask;
    out.points = eta.size();
    if (eta.size() < 3) return out;
    out.single = fit_slope(eta, e1, false);

    std::vector<std::size_t> order(eta.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eta[a] < eta[b]; });

    std::vector<double> hx, hy, lx, ly;
    for (std::size_t i : order) {
        if (eta[i] >= 10.0 / Re) {
            hx.push_back(eta[i]);
            hy.push_back(e1[i]);
        }
        if (eta[i] <= 0.1 / Re) {
            lx.push_back(eta[i]);
            ly.push_back(e1[i]);
        }
    }
    auto two_point_or_more = [](const std::vector<double>& x, const std::vector<double>& y) -> std::optional<double> {
        if (x.size() < 2) return std::nullopt;
        if (x.size() == 2) return std::log(y[1] / y[0]) / std::log(x[1] / x[0]);
        return fit_slope(x, y, false).slope;
    };
    out.slope_high = two_point_or_more(hx, hy);
    out.slope_low = two_point_or_more(lx, ly);

    // Scan from large to small eta for the first crossing of the 0.75 local slope.
    double prev_mid = 0.0, prev_slope = 0.0;
    bool have_prev = false;
    for (std::size_t k = order.size() - 1; k >= 1; --k) {
        const std::size_t i = order[k], j = order[k - 1];
        const double slope = std::log(e1[i] / e1[j]) / std::log(eta[i] / eta[j]);
        const double mid = 0.5 * (std::log(eta[i]) + std::log(eta[j]));
        if (have_prev && (prev_slope - 0.75) * (slope - 0.75) <= 0.0 && prev_slope != slope) {
            const double t = (0.75 - prev_slope) / (slope - prev_slope);
            out.break_eta = std::exp(prev_mid + t * (mid - prev_mid));
            break;
        }
        prev_mid = mid;
        prev_slope = slope;
        have_prev = true;
    }
    return out;
}

StagnationSweep stagnation_regime_sweep(const std::vector<double>& re_list, const std::vector<double>& eta_list,
                                        const std::vector<MaskRecipe>& masks, double x_max, std::size_t n, int jobs) {
    if (re_list.empty() || eta_list.empty() || masks.empty()) throw ConfigError("stagnation sweep: empty list");
    std::vector<double> etas = eta_list;
    std::sort(etas.begin(), etas.end(), std::greater<>());
    const std::size_t chains = re_list.size() * masks.size();
    std::vector<std::vector<StagnationRow>> chain_rows(chains);

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1)) if (jobs > 1)
    for (long c = 0; c < static_cast<long>(chains); ++c) {
        const auto uc = static_cast<std::size_t>(c);
        const double Re = re_list[uc / masks.size()];
        const MaskRecipe& m = masks[uc % masks.size()];
        std::vector<double> prev_y;
        Grid1D prev_grid;
        for (double eta : etas) {
            StagnationRow row;
            row.Re = Re;
            row.eta = eta;
            row.eps = std::sqrt(eta / Re);
            row.mask = m.label;
            if (!(row.eps < 0.3)) continue;
            try {
                StagnationProblem pb{Re, eta, m.at(row.eps), x_max, n};
                std::vector<double> guess;
                const std::vector<double>* gp = nullptr;
                if (!prev_y.empty()) {
                    // Continuation: interpolate the previous solution onto the new grid.
                    const Grid1D grid = stagnation_grid(pb);
                    guess.resize(3 * grid.size());
                    std::vector<double> comp(prev_grid.size());
                    for (int k = 0; k < 3; ++k) {
                        for (std::size_t i = 0; i < prev_grid.size(); ++i) comp[i] = prev_y[3 * i + k];
                        for (std::size_t i = 0; i < grid.size(); ++i)
                            guess[3 * i + k] = linear_interp(prev_grid.nodes(), comp, grid[i]);
                    }
                    gp = &guess;
                }
                StagnationSolution s;
                try {
                    s = stagnation_penalized(pb, gp);
                } catch (const NewtonError&) {
                    if (!gp) throw;
                    s = stagnation_penalized(pb);
                }
                const StagnationSolution ref = stagnation_reference_on(s, Re);
                const ErrorNorms e = stagnation_fluid_errors(s, ref);
                row.e1 = e.e1;
                row.einf = e.einf;
                row.u_at_wall = s.u[s.grid.find_node(0.0)];
                prev_grid = s.grid;
                prev_y.assign(3 * s.grid.size(), 0.0);
                for (std::size_t i = 0; i < s.grid.size(); ++i) {
                    prev_y[3 * i] = s.u[i];
                    prev_y[3 * i + 1] = s.du[i];
                    prev_y[3 * i + 2] = s.d2u[i];
                }
            } catch (const Error& e) {
                row.failure = e.what();
            }
            chain_rows[uc].push_back(std::move(row));
        }
    }

    StagnationSweep out;
    for (std::size_t c = 0; c < chains; ++c) {
        std::vector<double> xs, ys;
        for (const auto& r : chain_rows[c]) {
            if (!r.failure && r.e1 > 0.0) {
                xs.push_back(r.eta);
                ys.push_back(r.e1);
            }
        }
        out.fits.push_back(fit_segments(re_list[c / masks.size()], masks[c % masks.size()].label, xs, ys));
        for (auto& r : chain_rows[c]) out.rows.push_back(std::move(r));
    }
    return out;
}

}  // namespace vpm
