#pragma once

#include <span>
#include <vector>

namespace vpm {

/// Not-a-knot cubic spline through (x_i, y_i); x strictly increasing, >= 4 points.
class CubicSpline {
public:
    CubicSpline(std::span<const double> x, std::span<const double> y);

    /// Evaluates the spline; outside [x_0, x_n] the end cubics are extended.
    double operator()(double t) const;
    std::vector<double> operator()(std::span<const double> t) const;

private:
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace vpm
