#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vpm/numerics/banded.hpp"
#include "vpm/numerics/options.hpp"

namespace vpm {

using ResidualFn = std::function<void(std::span<const double> x, std::span<double> f)>;
/// Fills a zeroed BandedMatrix of the declared bandwidth.
using JacobianFn = std::function<void(std::span<const double> x, BandedMatrix& jac)>;

struct BandShape {
    std::size_t kl = 0;
    std::size_t ku = 0;
};

struct NewtonResult {
    std::vector<double> x;
    int iterations = 0;
    double residual_norm = 0.0;
    std::vector<double> history;  // |F|inf before each iteration and at exit
};

/// Damped Newton: full step, then up to 30 halvings until |F|inf decreases.
/// Converged when |F|inf < opts.abs_tol. Throws NewtonError otherwise.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, std::vector<double> guess,
                          BandShape band, const SolveOptions& opts);

/// Central-difference jacobian using banded column colouring.
BandedMatrix fd_jacobian(const ResidualFn& residual, std::span<const double> x, BandShape band,
                         double rel_step = 1e-6);

/// max|J_fd - J| / max|J| over the band.
double jacobian_mismatch(const ResidualFn& residual, const JacobianFn& jacobian, std::span<const double> x,
                         BandShape band, double rel_step = 1e-6);

}  // namespace vpm
