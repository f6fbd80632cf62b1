#include "vpm/numerics/roots.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "vpm/error.hpp"

namespace vpm {

RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b, const SolveOptions& opts) {
    opts.validate();
    double fa = f(a);
    double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) throw BracketError("find_root_bracketed: non-finite endpoint value");
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw BracketError("find_root_bracketed: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa, d = b - a, e = d;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * opts.rel_tol * std::abs(b);
        const double m = 0.5 * (c - b);
        if (fb == 0.0 || std::abs(m) <= tol) break;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (!std::isfinite(fb)) throw NumericalError("find_root_bracketed: non-finite function value");
    }
    if (!(std::abs(fb) < opts.abs_tol)) {
        throw NumericalError("find_root_bracketed: |f(root)| = " + std::to_string(std::abs(fb)) + " above abs_tol");
    }
    return {b, std::abs(fb), it};
}

}  // namespace vpm
