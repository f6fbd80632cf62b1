#include "vpm/numerics/newton.hpp"

#include <algorithm>
#include <cmath>

#include "vpm/error.hpp"

namespace vpm {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> x,
                          BandShape band, const SolveOptions& opts) {
    opts.validate();
    const std::size_t n = x.size();
    std::vector<double> f(n), step(n), trial(n), f_trial(n);
    NewtonResult out;

    residual(x, f);
    double norm = inf_norm(f);
    out.history.push_back(norm);
    int it = 0;
    while (!(norm < opts.abs_tol)) {
        if (it >= opts.max_iter) {
            throw NewtonError("newton_solve: no convergence in " + std::to_string(opts.max_iter) + " iterations",
                              norm, x, out.history);
        }
        BandedMatrix jac(n, band.kl, band.ku);
        jacobian(x, jac);
        for (std::size_t i = 0; i < n; ++i) step[i] = -f[i];
        try {
            BandedLU(jac).solve_in_place(step);
        } catch (const SingularMatrixError& e) {
            throw NewtonError(std::string("newton_solve: ") + e.what(), norm, x, out.history);
        }

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + lambda * step[i];
            residual(trial, f_trial);
            const double tn = inf_norm(f_trial);
            if (tn < norm) {
                x.swap(trial);
                f.swap(f_trial);
                norm = tn;
                accepted = true;
                break;
            }
        }
        ++it;
        out.history.push_back(norm);
        if (!accepted) throw NewtonError("newton_solve: line search failed to reduce the residual", norm, x, out.history);
    }
    out.x = std::move(x);
    out.iterations = it;
    out.residual_norm = norm;
    return out;
}

BandedMatrix fd_jacobian(const ResidualFn& residual, std::span<const double> x0, BandShape band, double rel_step) {
    const std::size_t n = x0.size();
    const std::size_t colours = band.kl + band.ku + 1;
    BandedMatrix jac(n, band.kl, band.ku);
    std::vector<double> xp(x0.begin(), x0.end()), xm(x0.begin(), x0.end()), fp(n), fm(n), h(n);
    for (std::size_t j = 0; j < n; ++j) h[j] = rel_step * std::max(1.0, std::abs(x0[j]));
    for (std::size_t c = 0; c < colours && c < n; ++c) {
        for (std::size_t j = c; j < n; j += colours) {
            xp[j] = x0[j] + h[j];
            xm[j] = x0[j] - h[j];
        }
        residual(xp, fp);
        residual(xm, fm);
        for (std::size_t j = c; j < n; j += colours) {
            xp[j] = x0[j];
            xm[j] = x0[j];
            const std::size_t i0 = j >= band.ku ? j - band.ku : 0;
            const std::size_t i1 = std::min(n - 1, j + band.kl);
            for (std::size_t i = i0; i <= i1; ++i) jac.at(i, j) = (fp[i] - fm[i]) / (2.0 * h[j]);
        }
    }
    return jac;
}

double jacobian_mismatch(const ResidualFn& residual, const JacobianFn& jacobian, std::span<const double> x,
                         BandShape band, double rel_step) {
    const std::size_t n = x.size();
    BandedMatrix exact(n, band.kl, band.ku);
    jacobian(x, exact);
    const BandedMatrix fd = fd_jacobian(residual, x, band, rel_step);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= band.kl ? i - band.kl : 0;
        const std::size_t j1 = std::min(n - 1, i + band.ku);
        for (std::size_t j = j0; j <= j1; ++j) {
            diff = std::max(diff, std::abs(fd.get(i, j) - exact.get(i, j)));
            scale = std::max(scale, std::abs(exact.get(i, j)));
        }
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace vpm
