#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vpm/analysis/analysis.hpp"
#include "vpm/error.hpp"

using namespace vpm;

TEST_CASE("classification examples") {
    const PenaltyParams p = classify_regime(200.0, 1e-3);
    CHECK(p.regime == Regime::strong);
    CHECK(p.eps == doctest::Approx(2.236e-3).epsilon(1e-3));
    CHECK(classify_regime(1e4, 1e-2).regime == Regime::intermediate);
    CHECK(classify_regime(10.0, 2.0).regime == Regime::invalid_time);
    CHECK(classify_regime(1e-3, 0.5).regime == Regime::invalid_length);
    CHECK(classify_regime(1.0, 1e-3).regime == Regime::strong);
    // Tie eta = eps, here eps = 1/Re = 1e-2.
    CHECK(classify_regime(100.0, 1e-2).regime == Regime::strong);
    CHECK_THROWS_AS(classify_regime(0.0, 1e-3), ConfigError);
}

TEST_CASE("classification invariants on a log grid") {
    for (double lre = -1.0; lre <= 5.0; lre += 0.25) {
        for (double leta = -8.0; leta <= 0.5; leta += 0.25) {
            const double Re = std::pow(10.0, lre), eta = std::pow(10.0, leta);
            const PenaltyParams p = classify_regime(Re, eta);
            CHECK(std::abs(p.eps * p.eps * Re - eta) <= 1e-14 * eta);
            // Grid points on the diagonal are ties up to rounding.
            const double tol = 1e-12;
            if (p.regime == Regime::intermediate) {
                CHECK(eta < 1.0);
                CHECK(eta > p.eps);
                CHECK(p.eps >= (1.0 - tol) / Re);
            }
            if (p.regime == Regime::strong) {
                CHECK(eta <= p.eps);
                CHECK(p.eps < 1.0);
            }
        }
    }
}

TEST_CASE("Richardson is exact on affine data") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0), l(-6.0, -1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        const double ei = std::pow(10.0, l(rng)), ej = std::pow(10.0, l(rng));
        if (ei == ej) continue;
        const double r = richardson(a + b * ei, ei, a + b * ej, ej);
        CHECK(std::abs(r - a) <= 1e-12 * (std::abs(a) + std::abs(b)));
    }
    const std::vector<double> xi{1.1, 2.1}, xj{1.01, 2.01};
    const auto v = richardson(xi, 0.1, xj, 0.01);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(richardson(1.0, 0.1, 1.0, 0.1), ConfigError);
}

TEST_CASE("error norms") {
    const std::vector<double> f{1.0, 2.0, 4.0}, g{1.0, 2.5, 3.0}, w{0.5, 1.0, 0.5};
    const ErrorNorms n = error_norms(f, g, w);
    CHECK(n.einf == 1.0);
    CHECK(n.e1 == doctest::Approx((0.5 + 0.5) / 2.0));
    CHECK(n.e1 <= n.einf);
    const ErrorNorms z = error_norms(f, f, w);
    CHECK(z.e1 == 0.0);
    CHECK(z.einf == 0.0);
}

TEST_CASE("cost regimes and effort to halve") {
    CHECK(cost_regime(1e4, 0.5).branch == 1);
    CHECK(cost_regime(1e4, 0.6).branch == 2);
    CHECK(cost_regime(1e4, 1.0).branch == 3);
    CHECK(cost_regime(1e4, 1.5).branch == 4);
    for (int d : {1, 2, 3}) {
        for (double a : {0.5, 0.75, 1.0}) {
            CHECK(std::log2(effort_to_halve(d, 2.0 * a)) == doctest::Approx(0.5 * std::log2(effort_to_halve(d, a))));
        }
    }
    CHECK(effort_to_halve(3, 0.5) == 1024.0);
}

TEST_CASE("slope fits") {
    std::vector<double> x, y2, c;
    for (double v = 0.1; v < 10.0; v *= 1.7) {
        x.push_back(v);
        y2.push_back(v * v);
        c.push_back(3.0);
    }
    CHECK(fit_slope(x, y2).slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(fit_slope(x, c).slope) < 1e-14);
    CHECK_THROWS_AS(fit_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}), ConfigError);
}

TEST_CASE("slope fit drops a bad largest point") {
    std::vector<double> x, y;
    for (int k = 8; k >= 2; --k) {
        x.push_back(std::pow(10.0, -0.5 * k));
        y.push_back(x.back());
    }
    y.back() *= 30.0;
    const SlopeFit f = fit_slope(x, y);
    CHECK(f.excluded);
    CHECK(f.excluded_x == x.back());
    CHECK(f.used == x.size() - 1);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!fit_slope(x, y, false).excluded);
}
