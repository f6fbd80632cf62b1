#pragma once

// Closed forms and brute-force integrators used as references in the tests.
// Nothing here calls into the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// psi(x) + gamma as sum_k [1/(k+1) - 1/(k+x)], tail by Euler-Maclaurin.
inline double digamma_plus_gamma(double x) {
    constexpr int K = 2000;
    double s = 0.0;
    for (int k = K - 1; k >= 0; --k) s += 1.0 / (k + 1.0) - 1.0 / (k + x);
    const double k = K;
    const double f = 1.0 / (k + 1.0) - 1.0 / (k + x);
    const double df = -1.0 / ((k + 1.0) * (k + 1.0)) + 1.0 / ((k + x) * (k + x));
    return s + std::log((k + x) / (k + 1.0)) + 0.5 * f - df / 12.0;
}

inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    double fa = f(a);
    for (int i = 0; i < iters && b - a > 0.0; ++i) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Root of 1/(2n) + psi(n) + gamma on [0.5, 1].
inline double tanh_offset_root() {
    return bisect([](double n) { return 0.5 / n + digamma_plus_gamma(n); }, 0.5, 1.0);
}

inline double tanh_profile(double x) { return 0.5 * (1.0 - std::tanh(2.0 * x)); }
inline double erf_profile(double x) { return 0.5 * (1.0 - std::erf(std::sqrt(std::numbers::pi) * x)); }

inline double compact(double (*base)(double), double x, double c) {
    if (x <= -c) return 1.0;
    if (x >= c) return 0.0;
    return base(x / std::sqrt(1.0 - x * x / (c * c)));
}

/// Corrective shift of a centred profile at smoothing delta, by shooting
/// U'' = G(xi / delta) U from deep in the solid (U ~ e^xi) with classical RK4.
/// `half` is where the profile is 0 or 1 to rounding, in units of delta.
inline double shooting_shift(const std::function<double(double)>& profile, double delta, double half,
                             int steps_per_delta = 4000) {
    const double a = -half * delta, b = half * delta;
    const int n = static_cast<int>(std::ceil(2.0 * half * steps_per_delta));
    const double h = (b - a) / n;
    double u = 1.0, du = 1.0;
    auto g = [&](double xi) { return profile(xi / delta); };
    for (int i = 0; i < n; ++i) {
        const double x = a + i * h;
        const double k1u = du, k1v = g(x) * u;
        const double k2u = du + 0.5 * h * k1v, k2v = g(x + 0.5 * h) * (u + 0.5 * h * k1u);
        const double k3u = du + 0.5 * h * k2v, k3v = g(x + 0.5 * h) * (u + 0.5 * h * k2u);
        const double k4u = du + h * k3v, k4v = g(x + h) * (u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    // U = U'(b) (xi - d) beyond b, and the shift is -d.
    return u / du - b;
}

/// Exact penalized Poiseuille profile for a discontinuous mask with the solid on x < s:
/// v'' - v / eps^2 = -2 there, v'' = -2 in the fluid, v'(x_min) = 0, v(1) = 0.
struct PoiseuilleStep {
    double eps, s, x_min;
    double A = 0.0, B = 0.0;

    PoiseuilleStep(double eps_, double s_, double x_min_) : eps(eps_), s(s_), x_min(x_min_) {
        const double z = (s - x_min) / eps;
        const double coth = std::cosh(z) / std::sinh(z);
        B = (1.0 - s * s - 2.0 * eps * eps + 2.0 * s * eps * coth) / (eps * coth - (s - 1.0));
        A = eps * (B - 2.0 * s) / std::sinh(z);
    }

    double operator()(double x) const {
        if (x < s) return 2.0 * eps * eps + A * std::cosh((x - x_min) / eps);
        return -x * x + B * x + 1.0 - B;
    }
};

/// f''(0) of f'^2 - f f'' - f''' = 1, f(0) = f'(0) = 0, f'(x_max) = 1, by RK4 shooting.
/// At other Re, u(x) = f(sqrt(Re) x) / sqrt(Re), so u''(0) = sqrt(Re) f''(0).
inline double hiemenz_wall_curvature(double x_max = 10.0, int n = 20000) {
    auto end_slope = [&](double s) {
        double y[3] = {0.0, 0.0, s};
        const double h = x_max / n;
        auto rhs = [](const double* a, double* d) {
            d[0] = a[1];
            d[1] = a[2];
            d[2] = a[1] * a[1] - a[0] * a[2] - 1.0;
        };
        for (int i = 0; i < n; ++i) {
            double k1[3], k2[3], k3[3], k4[3], t[3];
            rhs(y, k1);
            for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5 * h * k1[j];
            rhs(t, k2);
            for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5 * h * k2[j];
            rhs(t, k3);
            for (int j = 0; j < 3; ++j) t[j] = y[j] + h * k3[j];
            rhs(t, k4);
            for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (std::abs(y[1]) > 10.0) break;
        }
        return y[1] - 1.0;
    };
    // Far from the root the end slope diverges with either sign; this bracket is clean.
    return bisect(end_slope, 1.2, 1.25, 80);
}

}  // namespace oracle
