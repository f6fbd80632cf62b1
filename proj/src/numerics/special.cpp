#include "vpm/numerics/special.hpp"

#include <cmath>

#include "vpm/error.hpp"

namespace vpm {

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("digamma: argument must be positive and finite");
    double shift = 0.0;
    while (x < 12.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k) up to x^-14.
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
    return shift + std::log(x) - 0.5 / x - series;
}

}  // namespace vpm
