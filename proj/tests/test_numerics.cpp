#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vpm/error.hpp"
#include "vpm/numerics/banded.hpp"
#include "vpm/numerics/grid.hpp"
#include "vpm/numerics/ivp.hpp"
#include "vpm/numerics/newton.hpp"
#include "vpm/numerics/quadrature.hpp"
#include "vpm/numerics/roots.hpp"
#include "vpm/numerics/special.hpp"
#include "vpm/numerics/spline.hpp"
#include "vpm/stagnation/stagnation.hpp"

using namespace vpm;

TEST_CASE("Brent finds simple roots") {
    CHECK(find_root_bracketed([](double x) { return x * x - 2.0; }, 1.0, 2.0).root ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(find_root_bracketed([](double x) { return x; }, -1.0, 1.0).root) < 1e-12);
    CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
}

TEST_CASE("digamma matches the series oracle") {
    constexpr double euler_gamma = 0.57721566490153286061;
    for (double x : {0.1, 0.5, 0.662, 1.0, 2.5, 7.0, 13.0, 40.0}) {
        CAPTURE(x);
        CHECK(digamma(x) + euler_gamma == doctest::Approx(oracle::digamma_plus_gamma(x)).epsilon(1e-12));
    }
    CHECK(std::abs(digamma(1.0) + euler_gamma) < 1e-14);
}

TEST_CASE("tanh offset root") {
    const double euler_gamma = 0.57721566490153286061;
    const auto r = find_root_bracketed([&](double n) { return 0.5 / n + digamma(n) + euler_gamma; }, 0.5, 1.0);
    CHECK(std::abs(r.root - 0.662057) < 1e-5);
}

TEST_CASE("Grid1D weights") {
    const Grid1D g({0.0, 0.1, 0.4, 1.0, 2.5});
    double sum = 0.0;
    for (double w : g.weights()) {
        CHECK(w > 0.0);
        sum += w;
    }
    CHECK(std::abs(sum - g.length()) <= 1e-12 * g.length());
    CHECK(g.find_node(0.4) == 2);
    CHECK(g.find_node(0.5) == g.size());
    CHECK_THROWS_AS(Grid1D({0.0, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(Grid1D({0.0}), ConfigError);
}

TEST_CASE("graded grid keeps anchors and refines the focus") {
    GradingSpec spec;
    spec.anchors = {-1.0, -0.05, 0.0, 1.0};
    spec.focus = {{-0.05, 0.0}};
    spec.width = 1e-3;
    spec.nodes = 401;
    const Grid1D g = graded_grid(spec);
    CHECK(g.size() == 401);
    for (double a : spec.anchors) CHECK(g.find_node(a) < g.size());
    const std::size_t i0 = g.find_node(0.0);
    CHECK(g.spacing(i0 - 1) < 0.01 * g.spacing(g.size() - 2));
}

TEST_CASE("Dormand-Prince on the exponential") {
    const auto f = [](double, double y) { return y; };
    double prev = 0.0;
    for (double tol : {1e-6, 5e-7, 2.5e-7}) {
        const double err = std::abs(integrate_ivp(f, 1.0, 0.0, 1.0, {tol, tol, 1}) - std::numbers::e);
        if (prev > 0.0) CHECK(err * 2.0 <= prev);
        prev = err;
    }
    CHECK(std::abs(integrate_ivp(f, 1.0, 0.0, 1.0, {1e-13, 1e-13, 1}) - std::numbers::e) < 1e-11);
}

TEST_CASE("Dormand-Prince reports blow-up with the last valid z") {
    try {
        integrate_ivp([](double, double y) { return y * y; }, 1.0, 0.0, 2.0, {1e-10, 1e-10, 1});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.last_z() <= 1.0);
        CHECK(e.last_z() > 0.9);
    }
}

TEST_CASE("system integrator agrees with the harmonic oscillator") {
    const auto rhs = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    const auto y = integrate_ivp_system(rhs, {1.0, 0.0}, 0.0, std::numbers::pi, {});
    CHECK(std::abs(y[0] + 1.0) < 1e-10);
    CHECK(std::abs(y[1]) < 1e-10);
}

namespace {

BandedMatrix random_band(std::size_t n, std::size_t kl, std::size_t ku, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    BandedMatrix a(n, kl, ku);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) a.at(i, j) = d(rng);
    }
    return a;
}

}  // namespace

TEST_CASE("banded LU against the multiply") {
    std::mt19937_64 rng(7);
    for (auto [kl, ku] : {std::pair<std::size_t, std::size_t>{1, 1}, {4, 3}, {2, 5}}) {
        const BandedMatrix a = random_band(60, kl, ku, rng);
        std::vector<double> x(60), b(60);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.3 * static_cast<double>(i));
        a.multiply(x, b);
        const auto y = solve_banded(a, b);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-9);
        CHECK(residual_inf(a, y, b) < 1e-12);
    }
}

TEST_CASE("banded LU names the zero pivot") {
    BandedMatrix a(3, 1, 1);
    a.at(0, 0) = 1.0;
    a.at(1, 1) = 0.0;
    a.at(2, 2) = 1.0;
    try {
        BandedLU lu(a);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.pivot_index() == 1);
    }
    CHECK_THROWS_AS(a.at(0, 2), std::out_of_range);
}

TEST_CASE("banded BVP is second order and passes its residual check") {
    // -u'' = pi^2 sin(pi x), u(0) = u(1) = 0.
    double prev = 0.0;
    for (std::size_t n : {101, 201, 401}) {
        const Grid1D g = uniform_grid(0.0, 1.0, n);
        const double h = g.spacing(0);
        BandedMatrix a(n, 1, 1);
        std::vector<double> rhs(n);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            a.at(i, i - 1) = -1.0 / (h * h);
            a.at(i, i) = 2.0 / (h * h);
            a.at(i, i + 1) = -1.0 / (h * h);
            rhs[i] = std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * g[i]);
        }
        const BoundaryClosure bc{{{{0, 1.0}}, 0.0}, {{{n - 1, 1.0}}, 0.0}};
        const BvpSolution s = solve_banded_bvp(a, rhs, bc);
        CHECK(s.relative_residual < 1e-10);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(s.values[i] - std::sin(std::numbers::pi * g[i])));
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
        prev = err;
    }
}

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
    const GaussRule rule = gauss_legendre(6);
    const double v = integrate_gauss([](double x) { return std::pow(x, 11) + 3.0 * std::pow(x, 10) - x; }, -1.0, 2.0, rule);
    const double exact = (std::pow(2.0, 12) - 1.0) / 12.0 + 3.0 * (std::pow(2.0, 11) + 1.0) / 11.0 - 1.5;
    CHECK(v == doctest::Approx(exact).epsilon(1e-13));
    const std::vector<double> x{0.0, 0.5, 2.0}, y{1.0, 1.0, 1.0};
    CHECK(trapezoid(x, y) == doctest::Approx(2.0));
}

TEST_CASE("not-a-knot spline reproduces cubics") {
    std::vector<double> x, y;
    const auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t * t; };
    for (double t = 0.0; t <= 3.0; t += 0.37) {
        x.push_back(t * t * 0.5 + t);
        y.push_back(f(x.back()));
    }
    const CubicSpline s(x, y);
    for (double t : {0.05, 1.3, 2.2, 4.0, 7.1}) CHECK(s(t) == doctest::Approx(f(t)).epsilon(1e-11));
}

TEST_CASE("stagnation jacobian matches finite differences at random iterates") {
    StagnationProblem p;
    p.Re = 100.0;
    p.eta = 1e-3;
    p.spec = MaskSpec{MaskProfile::erf(), 0.0, 3.0 * p.eps()};
    p.n = 401;
    const Grid1D g = stagnation_grid(p);
    std::vector<double> damping(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) damping[i] = cell_average(p.spec, g[i], g[i + 1]) / p.eta;
    const StagnationSystem sys(g, p.Re, damping);
    const ResidualFn res = [&](std::span<const double> y, std::span<double> f) { sys.residual(y, f); };
    const JacobianFn jac = [&](std::span<const double> y, BandedMatrix& j) { sys.jacobian(y, j); };
    std::mt19937_64 rng(11);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> y(sys.unknowns());
        for (double& v : y) v = d(rng);
        CHECK(jacobian_mismatch(res, jac, y, StagnationSystem::band) < 1e-5);
    }
}

TEST_CASE("newton_solve converges on a banded nonlinear system and reports failure") {
    // u_i^3 + 2 u_i - u_{i-1} - u_{i+1} = 1
    const std::size_t n = 50;
    const ResidualFn res = [&](std::span<const double> x, std::span<double> f) {
        for (std::size_t i = 0; i < n; ++i) {
            const double l = i ? x[i - 1] : 0.0, r = i + 1 < n ? x[i + 1] : 0.0;
            f[i] = x[i] * x[i] * x[i] + 2.0 * x[i] - l - r - 1.0;
        }
    };
    const JacobianFn jac = [&](std::span<const double> x, BandedMatrix& j) {
        for (std::size_t i = 0; i < n; ++i) {
            j.at(i, i) = 3.0 * x[i] * x[i] + 2.0;
            if (i) j.at(i, i - 1) = -1.0;
            if (i + 1 < n) j.at(i, i + 1) = -1.0;
        }
    };
    const auto r = newton_solve(res, jac, std::vector<double>(n, 5.0), {1, 1}, {1e-12, 1e-12, 50});
    CHECK(r.residual_norm < 1e-12);
    CHECK(r.history.front() > r.history.back());
    CHECK_THROWS_AS(newton_solve(res, jac, std::vector<double>(n, 5.0), {1, 1}, {1e-12, 1e-12, 1}), NewtonError);
}
