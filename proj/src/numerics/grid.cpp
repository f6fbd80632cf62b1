#include "vpm/numerics/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vpm/error.hpp"

namespace vpm {

Grid1D::Grid1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw ConfigError("Grid1D needs at least two nodes");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] > nodes_[i])) throw ConfigError("Grid1D nodes must be strictly increasing");
    }
    const std::size_t n = nodes_.size();
    weights_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = nodes_[i + 1] - nodes_[i];
        weights_[i] += 0.5 * h;
        weights_[i + 1] += 0.5 * h;
    }
}

std::size_t Grid1D::find_node(double x) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    if (it != nodes_.end() && *it == x) return static_cast<std::size_t>(it - nodes_.begin());
    return nodes_.size();
}

GradingDensity::GradingDensity(std::vector<Interval> focus, double width, double background)
    : width_(width), background_(background) {
    if (!(width > 0.0)) throw ConfigError("grading width must be positive");
    if (background < 0.0) throw ConfigError("grading background must be non-negative");
    std::sort(focus.begin(), focus.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& f : focus) {
        if (f.hi < f.lo) throw ConfigError("focus interval has hi < lo");
        if (!focus_.empty() && f.lo <= focus_.back().hi) {
            focus_.back().hi = std::max(focus_.back().hi, f.hi);
        } else {
            focus_.push_back(f);
        }
    }
    for (std::size_t k = 0; k < focus_.size(); ++k) {
        breaks_.push_back(focus_[k].lo);
        breaks_.push_back(focus_[k].hi);
        if (k + 1 < focus_.size()) breaks_.push_back(0.5 * (focus_[k].hi + focus_[k + 1].lo));
    }
    std::sort(breaks_.begin(), breaks_.end());
}

double GradingDensity::distance(double x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : focus_) {
        const double dk = x < f.lo ? f.lo - x : (x > f.hi ? x - f.hi : 0.0);
        d = std::min(d, dk);
    }
    return d;
}

double GradingDensity::operator()(double x) const {
    if (focus_.empty()) return 1.0 / width_ + background_;
    return 1.0 / (width_ + distance(x)) + background_;
}

double GradingDensity::mass(double a, double b) const {
    if (b <= a) return 0.0;
    if (focus_.empty()) return (b - a) * (1.0 / width_ + background_);
    double total = background_ * (b - a);
    std::vector<double> pts{a};
    for (double x : breaks_) {
        if (x > a && x < b) pts.push_back(x);
    }
    pts.push_back(b);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double x0 = pts[k];
        const double x1 = pts[k + 1];
        const double xm = 0.5 * (x0 + x1);
        // Identify the nearest focus feature on this piece.
        double best = std::numeric_limits<double>::infinity();
        double edge = 0.0;
        int side = 0;  // 0 inside, +1 right of edge, -1 left of edge
        for (const auto& f : focus_) {
            if (xm >= f.lo && xm <= f.hi) {
                best = 0.0;
                side = 0;
                break;
            }
            if (xm < f.lo && f.lo - xm < best) {
                best = f.lo - xm;
                edge = f.lo;
                side = -1;
            } else if (xm > f.hi && xm - f.hi < best) {
                best = xm - f.hi;
                edge = f.hi;
                side = +1;
            }
        }
        if (side == 0) {
            total += (x1 - x0) / width_;
        } else if (side > 0) {
            total += std::log((width_ + x1 - edge) / (width_ + x0 - edge));
        } else {
            total += std::log((width_ + edge - x0) / (width_ + edge - x1));
        }
    }
    return total;
}

std::vector<double> GradingDensity::distribute(double a, double b, std::size_t cells) const {
    if (cells == 0) throw ConfigError("distribute needs at least one cell");
    std::vector<double> x(cells + 1);
    x.front() = a;
    x.back() = b;
    const double total = mass(a, b);
    double lo = a;
    for (std::size_t j = 1; j < cells; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(cells);
        double l = lo;
        double r = b;
        for (int it = 0; it < 200 && r - l > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(l), std::abs(r)); ++it) {
            const double m = 0.5 * (l + r);
            if (mass(a, m) < target) {
                l = m;
            } else {
                r = m;
            }
        }
        x[j] = 0.5 * (l + r);
        lo = x[j];
    }
    for (std::size_t j = 0; j < cells; ++j) {
        if (!(x[j + 1] > x[j])) throw ConfigError("grading produced coincident nodes; increase width or reduce node count");
    }
    return x;
}

Grid1D graded_grid(const GradingSpec& spec) {
    std::vector<double> anchors = spec.anchors;
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    if (anchors.size() < 2) throw ConfigError("graded_grid needs at least two anchors");
    const std::size_t segments = anchors.size() - 1;
    if (spec.nodes < 2 * segments + 1) throw ConfigError("graded_grid: too few nodes for the anchor segments");

    GradingDensity density(spec.focus, spec.width, spec.background);
    std::vector<double> mass(segments);
    for (std::size_t k = 0; k < segments; ++k) mass[k] = density.mass(anchors[k], anchors[k + 1]);
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);

    // Largest-remainder allocation with at least two cells per segment.
    const std::size_t cells = spec.nodes - 1;
    const std::size_t spare = cells - 2 * segments;
    std::vector<std::size_t> count(segments, 2);
    std::vector<double> remainder(segments);
    std::size_t used = 0;
    for (std::size_t k = 0; k < segments; ++k) {
        const double share = spare * mass[k] / total;
        const auto whole = static_cast<std::size_t>(std::floor(share));
        count[k] += whole;
        used += whole;
        remainder[k] = share - static_cast<double>(whole);
    }
    std::vector<std::size_t> order(segments);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return remainder[i] > remainder[j]; });
    for (std::size_t k = 0; used < spare; ++k, ++used) count[order[k % segments]] += 1;

    std::vector<double> nodes{anchors.front()};
    for (std::size_t k = 0; k < segments; ++k) {
        auto seg = density.distribute(anchors[k], anchors[k + 1], count[k]);
        nodes.insert(nodes.end(), seg.begin() + 1, seg.end());
    }
    return Grid1D(std::move(nodes));
}

Grid1D uniform_grid(double a, double b, std::size_t nodes) {
    if (nodes < 2) throw ConfigError("uniform_grid needs at least two nodes");
    std::vector<double> x(nodes);
    const double h = (b - a) / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return Grid1D(std::move(x));
}

}  // namespace vpm
