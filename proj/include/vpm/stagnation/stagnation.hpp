#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vpm/analysis/analysis.hpp"
#include "vpm/masks/mask.hpp"
#include "vpm/numerics/grid.hpp"
#include "vpm/numerics/newton.hpp"

namespace vpm {

/// Wall-normal similarity velocity u(x) of planar stagnation flow toward a wall at x = 0,
/// with the wall replaced by damping on [-1, 0):
///   u'^2 - u u'' - u'''/Re + (Gamma/eta) u' = 1,  u(-1) = u'(-1) = 0,  u'(x_max) = 1.
/// u is positive in the fluid (flow toward the wall is -u).
struct StagnationProblem {
    double Re = 1.0;
    double eta = 1e-2;
    MaskSpec spec;
    double x_max = 10.0;
    std::size_t n = 4001;

    double eps() const;
    void validate() const;
};

struct StagnationSolution {
    Grid1D grid;
    std::vector<double> u, du, d2u;
    int newton_iterations = 0;
    double residual_norm = 0.0;
};

/// Box-scheme unknowns interleaved as (u_i, u'_i, u''_i); bandwidth (4, 3).
class StagnationSystem {
public:
    /// gamma_over_eta: cell averages of Gamma/eta per interval (empty for the reference).
    StagnationSystem(Grid1D grid, double Re, std::vector<double> damping);

    std::size_t unknowns() const { return 3 * grid_.size(); }
    static constexpr BandShape band{4, 3};
    void residual(std::span<const double> y, std::span<double> f) const;
    void jacobian(std::span<const double> y, BandedMatrix& jac) const;
    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    double Re_;
    std::vector<double> damping_;
};

/// Solution on [0, x_max] with u(0) = u'(0) = 0 imposed.
StagnationSolution stagnation_reference(double Re, const Grid1D& grid, const SolveOptions& opts = {1e-10, 1e-10, 60});
StagnationSolution stagnation_reference(double Re, double x_max = 10.0, std::size_t n = 4001);

/// Grid on [-1, x_max] graded toward the mask transition and x = 0; 0 is always a node.
Grid1D stagnation_grid(const StagnationProblem& problem);

/// guess: optional initial iterate on the problem grid (interleaved); otherwise the
/// reference solution extended by zero into the solid is used.
StagnationSolution stagnation_penalized(const StagnationProblem& problem, const std::vector<double>* guess = nullptr,
                                        const SolveOptions& opts = {1e-10, 1e-10, 60});

/// Reference solved on the fluid part of the penalized grid, so both share nodes.
StagnationSolution stagnation_reference_on(const StagnationSolution& penalized, double Re);

ErrorNorms stagnation_fluid_errors(const StagnationSolution& penalized, const StagnationSolution& reference);

struct StagnationRow {
    double Re = 0.0;
    double eta = 0.0;
    double eps = 0.0;
    std::string mask;
    double e1 = 0.0;
    double einf = 0.0;
    double u_at_wall = 0.0;
    std::optional<std::string> failure;
};

/// Log-log slopes of E1 against eta, split around eta = 1/Re.
///   high segment: eta >= 10/Re; low segment: eta <= 0.1/Re (each needs two points);
///   break: eta where the local slope between neighbours crosses 0.75, the midpoint
///   between the intermediate (1) and strong (0.5) rates.
struct SegmentFit {
    double Re = 0.0;
    std::string mask;
    SlopeFit single;  // one line through every point
    std::optional<double> slope_high;
    std::optional<double> slope_low;
    std::optional<double> break_eta;
    std::size_t points = 0;
};

struct StagnationSweep {
    std::vector<StagnationRow> rows;
    std::vector<SegmentFit> fits;
};

/// Rows with eps >= 0.3 are skipped. Each (Re, mask) chain runs as one job with
/// continuation from large to small eta; chains run under OpenMP when jobs > 1.
StagnationSweep stagnation_regime_sweep(const std::vector<double>& re_list, const std::vector<double>& eta_list,
                                        const std::vector<MaskRecipe>& masks, double x_max = 10.0,
                                        std::size_t n = 4001, int jobs = 1);

SegmentFit fit_segments(double Re, const std::string& mask, std::span<const double> eta, std::span<const double> e1);

}  // namespace vpm
