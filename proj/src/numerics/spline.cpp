#include "vpm/numerics/spline.hpp"

#include <algorithm>

#include "vpm/error.hpp"
#include "vpm/numerics/banded.hpp"

namespace vpm {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n < 4 || y_.size() != n) throw ConfigError("CubicSpline needs at least four matching points");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i + 1] > x_[i])) throw ConfigError("CubicSpline abscissae must be strictly increasing");
    }
    BandedMatrix a(n, 2, 2);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        a.at(i, i - 1) = h0;
        a.at(i, i) = 2.0 * (h0 + h1);
        a.at(i, i + 1) = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Third-derivative continuity across the second and penultimate knots.
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    a.at(0, 0) = h1;
    a.at(0, 1) = -(h0 + h1);
    a.at(0, 2) = h0;
    const double g0 = x_[n - 2] - x_[n - 3], g1 = x_[n - 1] - x_[n - 2];
    a.at(n - 1, n - 3) = g1;
    a.at(n - 1, n - 2) = -(g0 + g1);
    a.at(n - 1, n - 1) = g0;
    m_ = solve_banded(a, rhs);
}

double CubicSpline::operator()(double t) const {
    const std::size_t n = x_.size();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, n - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

std::vector<double> CubicSpline::operator()(std::span<const double> t) const {
    std::vector<double> out(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) out[k] = (*this)(t[k]);
    return out;
}

}  // namespace vpm
