#include "vpm/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vpm/error.hpp"

namespace vpm {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::invalid_time: return "invalid_time";
        case Regime::invalid_length: return "invalid_length";
        case Regime::intermediate: return "intermediate";
        case Regime::strong: return "strong";
    }
    return "?";
}

PenaltyParams classify_regime(double Re, double eta) {
    if (!(Re > 0.0) || !(eta > 0.0) || !std::isfinite(Re) || !std::isfinite(eta)) {
        throw ConfigError("classify_regime: Re and eta must be positive");
    }
    PenaltyParams p{Re, eta, std::sqrt(eta / Re), Regime::strong};
    if (eta >= 1.0) {
        p.regime = Regime::invalid_time;
    } else if (p.eps >= 1.0) {
        p.regime = Regime::invalid_length;
    } else if (eta > p.eps) {
        p.regime = Regime::intermediate;
    }
    return p;
}

ErrorNorms error_norms(std::span<const double> f, std::span<const double> g, std::span<const double> w) {
    if (f.size() != g.size() || f.size() != w.size()) throw ConfigError("error_norms: size mismatch");
    if (f.empty()) throw ConfigError("error_norms: empty region");
    double num = 0.0, den = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = std::abs(f[i] - g[i]);
        num += w[i] * d;
        den += w[i];
        mx = std::max(mx, d);
    }
    if (!(den > 0.0)) throw ConfigError("error_norms: region has zero measure");
    return {std::min(num / den, mx), mx};
}

double richardson(double x_i, double eta_i, double x_j, double eta_j) {
    if (!(eta_i > 0.0) || !(eta_j > 0.0)) throw ConfigError("richardson: eta must be positive");
    if (eta_i == eta_j) throw ConfigError("richardson: eta values must differ");
    return (x_i / eta_i - x_j / eta_j) / (1.0 / eta_i - 1.0 / eta_j);
}

std::vector<double> richardson(std::span<const double> x_i, double eta_i, std::span<const double> x_j, double eta_j) {
    if (x_i.size() != x_j.size()) throw ConfigError("richardson: size mismatch");
    std::vector<double> out(x_i.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = richardson(x_i[k], eta_i, x_j[k], eta_j);
    return out;
}

double CostRegime::cost(double Re, double alpha) const {
    const double eta = std::pow(Re, -alpha);
    return std::pow(eta, eta_exponent) * std::pow(Re, re_exponent);
}

CostRegime cost_regime(double Re, double alpha) {
    if (!(Re > 1.0)) throw ConfigError("cost_regime: Re must exceed 1");
    if (!(alpha > 0.0)) throw ConfigError("cost_regime: alpha must be positive");
    if (alpha <= 0.5) return {1, "C ~ Re^3", 0.0, 3.0};
    if (alpha <= 0.75) return {2, "C ~ eta^-3/2 Re^3/4", -1.5, 0.75};
    if (alpha <= 1.0) return {3, "C ~ eta^-5/2 Re^3/2", -2.5, 1.5};
    // eta < eps < Kolmogorov scale: resolution still set by eps and eta.
    return {4, "C ~ eta^-5/2 Re^3/2 (strong damping)", -2.5, 1.5};
}

double effort_to_halve(int dimensions, double alpha) {
    if (dimensions < 1 || dimensions > 3) throw ConfigError("effort_to_halve: D must be 1, 2 or 3");
    if (!(alpha > 0.0)) throw ConfigError("effort_to_halve: alpha must be positive");
    return std::exp2(static_cast<double>(dimensions + 2) / alpha);
}

namespace {

SlopeFit least_squares(const std::vector<double>& lx, const std::vector<double>& ly) {
    const auto n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw ConfigError("fit_slope: x values must not all coincide");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.used = lx.size();
    return fit;
}

}  // namespace

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y, bool allow_exclusion) {
    if (x.size() != y.size()) throw ConfigError("fit_slope: size mismatch");
    if (x.size() < 3) throw ConfigError("fit_slope: need at least three points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("fit_slope: values must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    SlopeFit fit = least_squares(lx, ly);
    if (!allow_exclusion || x.size() < 4) return fit;
    const auto top = static_cast<std::size_t>(std::max_element(lx.begin(), lx.end()) - lx.begin());
    double mean = 0.0;
    std::vector<double> res(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        res[i] = std::abs(ly[i] - (fit.intercept + fit.slope * lx[i]));
        mean += res[i];
    }
    mean /= static_cast<double>(lx.size());
    if (mean > 0.0 && res[top] > 2.0 * mean) {
        const double xt = x[top];
        lx.erase(lx.begin() + static_cast<std::ptrdiff_t>(top));
        ly.erase(ly.begin() + static_cast<std::ptrdiff_t>(top));
        fit = least_squares(lx, ly);
        fit.excluded = true;
        fit.excluded_x = xt;
    }
    return fit;
}

}  // namespace vpm
