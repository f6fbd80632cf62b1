#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vpm {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes ascending.
GaussRule gauss_legendre(std::size_t n);

/// Integral of f over [a, b] with a fixed Gauss-Legendre rule.
double integrate_gauss(const std::function<double(double)>& f, double a, double b, const GaussRule& rule);

/// Composite trapezoid rule over sample points.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace vpm
