#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vpm {

/// Ordered 1D nodes with matching trapezoid quadrature weights.
class Grid1D {
public:
    Grid1D() = default;
    /// Throws ConfigError unless nodes are strictly increasing (at least two).
    explicit Grid1D(std::vector<double> nodes);

    std::size_t size() const noexcept { return nodes_.size(); }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    double length() const { return nodes_.back() - nodes_.front(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Index of a node equal to x, or size() when none matches exactly.
    std::size_t find_node(double x) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Node density w -> 1/(width + dist(x, focus)) + background.
///
/// Equidistributing this density gives spacing ~width inside the focus
/// intervals, growing linearly with distance away from them.
class GradingDensity {
public:
    GradingDensity(std::vector<Interval> focus, double width, double background = 0.0);

    double operator()(double x) const;
    /// Integral of the density over [a, b], closed form.
    double mass(double a, double b) const;
    /// n+1 nodes on [a, b] (endpoints exact) at equal density mass.
    std::vector<double> distribute(double a, double b, std::size_t cells) const;

private:
    double distance(double x) const;
    std::vector<Interval> focus_;
    std::vector<double> breaks_;
    double width_;
    double background_;
};

struct GradingSpec {
    std::vector<double> anchors;  // must include both domain ends; every anchor becomes a node
    std::vector<Interval> focus;
    double width = 1.0;
    double background = 0.0;
    std::size_t nodes = 0;
};

/// Graded grid whose cells are split between anchor segments by density mass.
Grid1D graded_grid(const GradingSpec& spec);

Grid1D uniform_grid(double a, double b, std::size_t nodes);

struct Solution1D {
    Grid1D grid;
    std::vector<double> values;
};

}  // namespace vpm
