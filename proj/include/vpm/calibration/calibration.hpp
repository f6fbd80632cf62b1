#pragma once

#include <cstddef>
#include <vector>

#include "vpm/masks/mask.hpp"
#include "vpm/numerics/grid.hpp"
#include "vpm/numerics/options.hpp"

namespace vpm {

/// ODE tolerances used for the Riccati integration.
inline constexpr SolveOptions kRiccatiTolerance{1e-14, 1e-14, 1};

/// l*(delta): integrates R' = delta^2 G(z) - R^2 from R(-c) = delta to z = c and
/// returns (1/R(c) - c) delta. This is the corrective shift, the negated displacement.
double riccati_optimal_shift(const MaskProfile& profile, double delta, double c_eff,
                             const SolveOptions& opts = kRiccatiTolerance);
double riccati_optimal_shift(const MaskProfile& profile, double delta);

struct CalibrationResult {
    MaskProfile profile;
    double delta = 0.0;
    double optimal_shift = 0.0;
    double residual = 0.0;
};

/// delta* with l*(delta*) = 0, Brent on [0.5, 6].
CalibrationResult zero_shift_smoothing(const MaskProfile& profile, const SolveOptions& opts = {1e-12, 1e-15, 200});

/// Tabulated zero-shift smoothings for the four smooth families (tanh, erf, and c = 1
/// compact versions); 0 when the profile has no tabulated value.
double tabulated_zero_shift_smoothing(const MaskProfile& profile);

/// sigma(n) = 1/(2n) + psi(n) + gamma, the constant offset of the tanh inner solution.
double tanh_offset_analytic(double n);
/// Root of sigma on [0.5, 1].
double tanh_offset_root();

struct InnerSolution {
    Grid1D grid;
    std::vector<double> U;
    double displacement = 0.0;  // U ~ xi - d far into the fluid
};

/// (Gamma - d^2/dxi^2) U = 0 with U'(xi_min) = U(xi_min) and U'(xi_max) = 1,
/// finite volumes with cell-averaged Gamma on a graded grid anchored at the mask transition.
InnerSolution solve_inner_bvp(const MaskSpec& spec, double xi_min, double xi_max, std::size_t n);

/// Domain whose ends lie `margin` beyond the transition region of the mask.
Interval inner_domain(const MaskSpec& spec, double margin = 30.0);

}  // namespace vpm
