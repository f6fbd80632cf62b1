#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vpm/calibration/calibration.hpp"
#include "vpm/error.hpp"
#include "vpm/poiseuille/poiseuille.hpp"

using namespace vpm;

namespace {

PoiseuilleProblem problem(double eps, MaskSpec spec, std::size_t n = 4001) {
    PoiseuilleProblem p;
    p.epsilon = eps;
    p.spec = spec;
    p.n = n;
    return p;
}

double e1(double eps, const MaskSpec& spec, std::size_t n = 4001) {
    return poiseuille_fluid_errors(poiseuille_penalized(problem(eps, spec, n))).e1;
}

const MaskSpec kStandard{MaskProfile::discontinuous(), 0.0, 0.0};

}  // namespace

TEST_CASE("reference profile") {
    const Solution1D r = poiseuille_reference(11);
    for (std::size_t i = 0; i < r.grid.size(); ++i) CHECK(r.values[i] == doctest::Approx(r.grid[i] * (1.0 - r.grid[i])));
    CHECK(poiseuille_exact(0.5) == 0.25);
}

TEST_CASE("penalized solution matches the exact step-mask profile") {
    for (double eps : {0.03, 0.01, 0.003}) {
        for (double shift : {0.0, eps}) {
            CAPTURE(eps);
            CAPTURE(shift);
            const Solution1D s = poiseuille_penalized(problem(eps, {MaskProfile::discontinuous(), shift, 0.0}));
            const oracle::PoiseuilleStep exact(eps, shift, -1.0);
            double err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < s.grid.size(); ++i) {
                err = std::max(err, std::abs(s.values[i] - exact(s.grid[i])));
                scale = std::max(scale, std::abs(exact(s.grid[i])));
            }
            CHECK(err < 1e-5 * scale);
        }
    }
}

TEST_CASE("solid plateau and decay") {
    for (double eps : {0.0316, 0.01, 0.001}) {
        const Solution1D s = poiseuille_penalized(problem(eps, kStandard));
        double vmax = 0.0;
        for (double v : s.values) vmax = std::max(vmax, std::abs(v));
        CHECK(s.values.front() / (2.0 * eps * eps) == doctest::Approx(1.0).epsilon(0.1));
        CHECK(std::abs(s.values.front()) - 2.0 * eps * eps < 1e-6 * vmax);
    }
}

TEST_CASE("standard mask error is first order in eps") {
    const double r = e1(0.02, kStandard) / e1(0.01, kStandard);
    CHECK(r == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("optimized masks have second-order error") {
    const double dstar = zero_shift_smoothing(MaskProfile::erf()).delta;
    for (double eps : {0.0316, 0.01, 0.00316}) {
        CAPTURE(eps);
        const double rs = e1(eps, {MaskProfile::discontinuous(), eps, 0.0}) /
                          e1(eps / 2, {MaskProfile::discontinuous(), eps / 2, 0.0});
        CHECK(rs >= 3.4);
        CHECK(rs <= 4.6);
        const double rm = e1(eps, {MaskProfile::erf(), 0.0, dstar * eps}) / e1(eps / 2, {MaskProfile::erf(), 0.0, dstar * eps / 2});
        CHECK(rm >= 3.4);
        CHECK(rm <= 4.6);
    }
}

TEST_CASE("grid independence") {
    const double dstar = zero_shift_smoothing(MaskProfile::erf()).delta;
    for (double eps : {0.0316, 0.01, 0.00316, 0.001}) {
        for (const MaskSpec& spec : {kStandard, MaskSpec{MaskProfile::discontinuous(), eps, 0.0},
                                     MaskSpec{MaskProfile::erf(), 0.0, dstar * eps}}) {
            const double a = e1(eps, spec, 4001), b = e1(eps, spec, 8001);
            CHECK(std::abs(a - b) < 0.01 * b);
        }
    }
}

TEST_CASE("norms are ordered") {
    const auto n = poiseuille_fluid_errors(poiseuille_penalized(problem(0.01, kStandard)));
    CHECK(n.e1 <= n.einf);
    CHECK(n.e1 > 0.0);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(poiseuille_penalized(problem(0.6, kStandard)), ConfigError);
    CHECK_THROWS_AS(poiseuille_penalized(problem(0.0, kStandard)), ConfigError);
    CHECK_THROWS_AS(poiseuille_penalized(problem(0.01, kStandard, 100)), ConfigError);
    PoiseuilleProblem p = problem(0.2, kStandard);
    p.x_min = -1.0;
    CHECK_THROWS_AS(poiseuille_penalized(p), ConfigError);
}

TEST_CASE("sweep rows, fits and thread independence") {
    const std::vector<double> eps{0.0316, 0.01, 0.00316, 0.001};
    const std::vector<MaskRecipe> masks{{"standard", MaskProfile::discontinuous(), 0.0, false, 0.0, false},
                                        {"shifted", MaskProfile::discontinuous(), 1.0, true, 0.0, false}};
    const PoiseuilleSweep a = poiseuille_sweep(eps, masks, 4001, -1.0, 1);
    const PoiseuilleSweep b = poiseuille_sweep(eps, masks, 4001, -1.0, 4);
    REQUIRE(a.rows.size() == 8);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].e1 == b.rows[i].e1);
        CHECK(a.rows[i].mask == b.rows[i].mask);
        CHECK(!a.rows[i].failure);
    }
    CHECK(a.rows[0].mask == "standard");
    CHECK(a.rows[4].mask == "shifted");
    CHECK(a.fits[0].slope == doctest::Approx(1.0).epsilon(0.1));
    CHECK(a.fits[1].slope == doctest::Approx(2.0).epsilon(0.075));
}
