#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vpm/analysis/analysis.hpp"
#include "vpm/masks/mask.hpp"
#include "vpm/numerics/grid.hpp"

namespace vpm {

/// v'' - Gamma v / eps^2 = -2 on [x_min, 1], v'(x_min) = 0, v(1) = 0.
struct PoiseuilleProblem {
    double epsilon = 0.1;
    MaskSpec spec;
    double x_min = -1.0;
    std::size_t n = 4001;

    void validate() const;
};

/// x (1 - x) sampled on a uniform grid over [0, 1].
Solution1D poiseuille_reference(std::size_t n = 1001);
double poiseuille_exact(double x);

/// Finite volumes with cell-averaged mask on a grid graded toward the transition and x = 0.
Solution1D poiseuille_penalized(const PoiseuilleProblem& problem);

/// E1 and Einf against x(1 - x) over the fluid region [0, 1].
ErrorNorms poiseuille_fluid_errors(const Solution1D& penalized);

struct PoiseuilleRow {
    double epsilon = 0.0;
    std::string mask;
    double e1 = 0.0;
    double einf = 0.0;
    double plateau = 0.0;  // v(x_min)
    std::optional<std::string> failure;
};

struct PoiseuilleSweep {
    std::vector<PoiseuilleRow> rows;  // ordered by mask, then epsilon as given
    std::vector<std::string> masks;
    std::vector<SlopeFit> fits;  // per mask, E1 vs epsilon
};

/// Rows are independent and run under OpenMP when jobs > 1.
PoiseuilleSweep poiseuille_sweep(const std::vector<double>& eps_list, const std::vector<MaskRecipe>& masks,
                                 std::size_t n = 4001, double x_min = -1.0, int jobs = 1);

}  // namespace vpm
