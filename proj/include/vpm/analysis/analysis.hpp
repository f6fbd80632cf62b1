#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vpm {

enum class Regime { invalid_time, invalid_length, intermediate, strong };

std::string to_string(Regime r);

struct PenaltyParams {
    double Re = 0.0;
    double eta = 0.0;
    double eps = 0.0;  // sqrt(eta / Re)
    Regime regime = Regime::strong;
};

/// Ties (eta = eps, equivalently eps = 1/Re) go to strong. For Re <= 1 every
/// valid pair has eta <= eps and is labelled strong.
PenaltyParams classify_regime(double Re, double eta);

struct ErrorNorms {
    double e1 = 0.0;    // weighted mean of |f - g|
    double einf = 0.0;  // max |f - g|
};

/// weights are quadrature weights over the region; E1 is normalized by their sum.
ErrorNorms error_norms(std::span<const double> field, std::span<const double> reference,
                       std::span<const double> weights);

/// (X_i/eta_i - X_j/eta_j) / (1/eta_i - 1/eta_j)
double richardson(double x_i, double eta_i, double x_j, double eta_j);
std::vector<double> richardson(std::span<const double> x_i, double eta_i, std::span<const double> x_j, double eta_j);

/// Cost scaling C ~ eta^a Re^b for eta = Re^-alpha in 3D turbulence.
struct CostRegime {
    int branch = 0;  // 1..4
    std::string label;
    double eta_exponent = 0.0;
    double re_exponent = 0.0;
    double cost(double Re, double alpha) const;
};

/// Boundary alpha values belong to the smaller-alpha branch.
CostRegime cost_regime(double Re, double alpha);

/// 2^((D + 2) / alpha)
double effort_to_halve(int dimensions, double alpha);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of log-residuals over the points used
    std::size_t used = 0;
    bool excluded = false;
    double excluded_x = 0.0;
};

/// Least-squares slope of log y against log x. With four or more points the
/// largest-x point is dropped when its |residual| exceeds twice the mean.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y, bool allow_exclusion = true);

}  // namespace vpm
