#pragma once

#include <functional>

#include "vpm/numerics/options.hpp"

namespace vpm {

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Brent's method on [a, b]. Throws BracketError without a sign change and
/// NumericalError if the bracket collapses with |f| >= opts.abs_tol.
RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                               const SolveOptions& opts = {1e-12, 1e-14, 200});

}  // namespace vpm
