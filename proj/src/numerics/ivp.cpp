#include "vpm/numerics/ivp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vpm/error.hpp"

namespace vpm {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Workspace {
    std::array<std::vector<double>, 7> k;
    std::vector<double> tmp, y_new, err;
    explicit Workspace(std::size_t n) : tmp(n), y_new(n), err(n) {
        for (auto& v : k) v.assign(n, 0.0);
    }
};

}  // namespace

std::vector<double> integrate_ivp_system(const SystemRhs& rhs, std::vector<double> y, double z0, double z1,
                                         const IvpOptions& opts, IvpStats* stats) {
    opts.tol.validate();
    if (!(z1 > z0)) throw ConfigError("integrate_ivp: need z1 > z0");
    const std::size_t n = y.size();
    Workspace w(n);
    IvpStats st;

    auto eval = [&](double z, const std::vector<double>& yy, std::vector<double>& out) {
        rhs(z, yy, out);
        ++st.evaluations;
    };

    double z = z0;
    const double span = z1 - z0;
    double h = std::min({span, opts.h_max, 1e-3 * span});
    eval(z, y, w.k[0]);

    while (z < z1) {
        if (st.accepted + st.rejected >= opts.max_steps) throw IntegrationError("integrate_ivp: step limit reached", z);
        bool last = false;
        if (z + h >= z1) {
            h = z1 - z;
            last = true;
        }
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) {
            throw IntegrationError("integrate_ivp: step size underflow", z);
        }
        auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (const auto& [j, a] : terms) s += a * w.k[static_cast<std::size_t>(j)][i];
                w.tmp[i] = y[i] + h * s;
            }
        };
        stage({{0, a21}});
        eval(z + c2 * h, w.tmp, w.k[1]);
        stage({{0, a31}, {1, a32}});
        eval(z + c3 * h, w.tmp, w.k[2]);
        stage({{0, a41}, {1, a42}, {2, a43}});
        eval(z + c4 * h, w.tmp, w.k[3]);
        stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
        eval(z + c5 * h, w.tmp, w.k[4]);
        stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
        eval(z + h, w.tmp, w.k[5]);
        for (std::size_t i = 0; i < n; ++i) {
            w.y_new[i] = y[i] + h * (b1 * w.k[0][i] + b3 * w.k[2][i] + b4 * w.k[3][i] + b5 * w.k[4][i] +
                                     b6 * w.k[5][i]);
        }
        const double z_new = last ? z1 : z + h;
        eval(z_new, w.y_new, w.k[6]);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * w.k[0][i] + e3 * w.k[2][i] + e4 * w.k[3][i] + e5 * w.k[4][i] +
                                  e6 * w.k[5][i] + e7 * w.k[6][i]);
            const double sc = opts.tol.abs_tol + opts.tol.rel_tol * std::max(std::abs(y[i]), std::abs(w.y_new[i]));
            // Error per unit step: the global error then scales linearly with the tolerance.
            err = std::max(err, std::abs(e) / (sc * std::min(1.0, h)));
            finite = finite && std::isfinite(w.y_new[i]) && std::isfinite(w.k[6][i]);
        }
        if (!finite || !std::isfinite(err)) {
            ++st.rejected;
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            ++st.accepted;
            z = z_new;
            y.swap(w.y_new);
            std::swap(w.k[0], w.k[6]);
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.25), 0.2, 5.0);
            if (!last) h = std::min(h * fac, opts.h_max);
        } else {
            ++st.rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.9);
        }
    }
    if (stats) *stats = st;
    return y;
}

double integrate_ivp(const ScalarRhs& rhs, double y0, double z0, double z1, const SolveOptions& opts,
                     IvpStats* stats) {
    IvpOptions o;
    o.tol = opts;
    auto sys = [&rhs](double z, std::span<const double> y, std::span<double> dy) { dy[0] = rhs(z, y[0]); };
    return integrate_ivp_system(sys, {y0}, z0, z1, o, stats)[0];
}

}  // namespace vpm
