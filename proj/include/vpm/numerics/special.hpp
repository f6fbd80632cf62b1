#pragma once

namespace vpm {

/// psi(x) for x > 0: upward recurrence to x >= 12, then the asymptotic series.
double digamma(double x);

}  // namespace vpm
