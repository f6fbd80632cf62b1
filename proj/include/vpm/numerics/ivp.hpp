#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "vpm/numerics/options.hpp"

namespace vpm {

using ScalarRhs = std::function<double(double z, double y)>;
using SystemRhs = std::function<void(double z, std::span<const double> y, std::span<double> dydz)>;

struct IvpStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

struct IvpOptions {
    SolveOptions tol{1e-12, 1e-12, 1};
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) with error-per-unit-step control.
/// Throws IntegrationError with the last accepted z on step-size underflow
/// or when the solution leaves the finite range.
double integrate_ivp(const ScalarRhs& rhs, double y0, double z0, double z1, const SolveOptions& opts,
                     IvpStats* stats = nullptr);

std::vector<double> integrate_ivp_system(const SystemRhs& rhs, std::vector<double> y0, double z0, double z1,
                                         const IvpOptions& opts, IvpStats* stats = nullptr);

}  // namespace vpm
