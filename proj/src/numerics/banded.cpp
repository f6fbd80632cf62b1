#include "vpm/numerics/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vpm/error.hpp"

namespace vpm {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(kl + ku + 1), data_(n * (kl + ku + 1), 0.0) {}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return 0.0;
    return data_[i * width_ + (j + kl_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j)) throw std::out_of_range("BandedMatrix: entry outside band");
    return data_[i * width_ + (j + kl_ - i)];
}

void BandedMatrix::clear_row(std::size_t i) {
    std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(i * width_), width_, 0.0);
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += data_[i * width_ + (j + kl_ - i)] * x[j];
        y[i] = s;
    }
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n_), kl_(a.kl_), uw_(a.ku_ + a.kl_), width_(2 * a.kl_ + a.ku_ + 1), data_(a.n_ * width_, 0.0),
      pivot_(a.n_) {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < a.width_; ++k) data_[i * width_ + k] = a.data_[i * a.width_ + k];
    }
    auto idx = [this](std::size_t r, std::size_t c) { return r * width_ + (c + kl_ - r); };
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + uw_);
        std::size_t p = k;
        double best = std::abs(data_[idx(k, k)]);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            const double v = std::abs(data_[idx(r, k)]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) throw SingularMatrixError(k);
        pivot_[k] = p;
        if (p != k) {
            for (std::size_t c = k; c <= last_col; ++c) std::swap(data_[idx(k, c)], data_[idx(p, c)]);
        }
        const double inv = 1.0 / data_[idx(k, k)];
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            const double l = data_[idx(r, k)] * inv;
            data_[idx(r, k)] = l;
            if (l == 0.0) continue;
            for (std::size_t c = k + 1; c <= last_col; ++c) data_[idx(r, c)] -= l * data_[idx(k, c)];
        }
    }
}

template <class T>
void BandedLU::substitute(std::span<T> b) const {
    auto idx = [this](std::size_t r, std::size_t c) { return r * width_ + (c + kl_ - r); };
    for (std::size_t k = 0; k < n_; ++k) {
        if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const T bk = b[k];
        for (std::size_t r = k + 1; r <= last_row; ++r) b[r] -= data_[idx(r, k)] * bk;
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, k + uw_);
        T s = b[k];
        for (std::size_t c = k + 1; c <= last_col; ++c) s -= data_[idx(k, c)] * b[c];
        b[k] = s / data_[idx(k, k)];
    }
}

void BandedLU::solve_in_place(std::span<double> b) const { substitute(b); }

void BandedLU::solve_in_place(std::span<std::complex<double>> b) const { substitute(b); }

std::vector<double> BandedLU::solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

double residual_inf(const BandedMatrix& a, std::span<const double> x, std::span<const double> b) {
    std::vector<double> ax(a.size());
    a.multiply(x, ax);
    double r = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
    return r;
}

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b) {
    return BandedLU(a).solve(b);
}

namespace {

void apply_closure(BandedMatrix& a, std::vector<double>& rhs, std::size_t row, const ClosureRow& c) {
    a.clear_row(row);
    for (const auto& [col, v] : c.coeffs) a.add(row, col, v);
    rhs[row] = c.value;
}

}  // namespace

void equilibrate_rows(BandedMatrix& a, std::span<double> rhs) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= a.lower() ? i - a.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + a.upper());
        double m = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) m = std::max(m, std::abs(a.get(i, j)));
        if (m == 0.0) throw SingularMatrixError(i);
        const double s = 1.0 / m;
        for (std::size_t j = j0; j <= j1; ++j) a.at(i, j) *= s;
        rhs[i] *= s;
    }
}

BvpSolution solve_banded_bvp(BandedMatrix op, std::vector<double> rhs, const BoundaryClosure& bc,
                             const SolveOptions& opts) {
    const std::size_t n = op.size();
    if (n < 2 || rhs.size() != n) throw ConfigError("solve_banded_bvp: size mismatch");
    apply_closure(op, rhs, 0, bc.first);
    apply_closure(op, rhs, n - 1, bc.last);
    equilibrate_rows(op, rhs);

    BandedLU lu(op);
    BvpSolution sol;
    sol.values = lu.solve(rhs);
    double bnorm = 0.0;
    for (double v : rhs) bnorm = std::max(bnorm, std::abs(v));
    if (bnorm == 0.0) bnorm = 1.0;

    std::vector<double> r(n);
    op.multiply(sol.values, r);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = rhs[i] - r[i];
        res = std::max(res, std::abs(r[i]));
    }
    for (int pass = 0; pass < opts.max_iter && res / bnorm >= opts.rel_tol; ++pass) {
        lu.solve_in_place(r);
        for (std::size_t i = 0; i < n; ++i) sol.values[i] += r[i];
        op.multiply(sol.values, r);
        res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = rhs[i] - r[i];
            res = std::max(res, std::abs(r[i]));
        }
    }
    sol.relative_residual = res / bnorm;
    if (!(sol.relative_residual < opts.rel_tol)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", sol.relative_residual);
        throw NumericalError(std::string("solve_banded_bvp: relative residual ") + buf +
                             " above tolerance");
    }
    return sol;
}

}  // namespace vpm
