#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vpm/numerics/options.hpp"

namespace vpm {

/// Square band matrix with kl sub- and ku super-diagonals, row-major band storage.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return kl_; }
    std::size_t upper() const noexcept { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + kl_ >= i && j <= i + ku_;
    }
    double get(std::size_t i, std::size_t j) const;
    /// Throws std::out_of_range outside the band.
    double& at(std::size_t i, std::size_t j);
    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    void clear_row(std::size_t i);
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    friend class BandedLU;
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
};

/// LU factorization with partial pivoting, kept for repeated solves.
class BandedLU {
public:
    BandedLU() = default;
    /// Throws SingularMatrixError naming the zero pivot column.
    explicit BandedLU(const BandedMatrix& a);

    std::size_t size() const noexcept { return n_; }
    void solve_in_place(std::span<double> b) const;
    /// Real factors applied to the real and imaginary parts together.
    void solve_in_place(std::span<std::complex<double>> b) const;
    std::vector<double> solve(std::span<const double> b) const;

private:
    template <class T>
    void substitute(std::span<T> b) const;

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t uw_ = 0;  // ku + kl after pivot fill-in
    std::size_t width_ = 0;
    std::vector<double> data_;
    std::vector<std::size_t> pivot_;
};

/// ||A x - b||_inf
double residual_inf(const BandedMatrix& a, std::span<const double> x, std::span<const double> b);

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b);

/// Sparse row replacing an equation of the operator (boundary closure).
struct ClosureRow {
    std::vector<std::pair<std::size_t, double>> coeffs;
    double value = 0.0;
};

struct BoundaryClosure {
    ClosureRow first;
    ClosureRow last;
};

struct BvpSolution {
    std::vector<double> values;
    double relative_residual = 0.0;
};

/// Scales each row to unit max-norm. A zero row throws SingularMatrixError.
void equilibrate_rows(BandedMatrix& a, std::span<double> rhs);

/// Replaces the first and last rows with the closure, equilibrates rows, solves,
/// and checks ||A x - b||_inf / ||b||_inf < opts.rel_tol on the equilibrated
/// system (up to opts.max_iter refinement passes).
BvpSolution solve_banded_bvp(BandedMatrix op, std::vector<double> rhs, const BoundaryClosure& bc,
                             const SolveOptions& opts = {1e-10, 1e-10, 3});

}  // namespace vpm
