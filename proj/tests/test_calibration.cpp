#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "vpm/calibration/calibration.hpp"
#include "vpm/error.hpp"

using namespace vpm;

namespace {

struct Family {
    MaskProfile profile;
    std::function<double(double)> oracle_profile;
    double half;  // where the oracle profile saturates, in units of delta
};

std::vector<Family> families() {
    return {
        {MaskProfile::tanh(), oracle::tanh_profile, 20.0},
        {MaskProfile::erf(), oracle::erf_profile, 7.0},
        {compactify(MaskProfile::tanh(), 1.0), [](double x) { return oracle::compact(oracle::tanh_profile, x, 1.0); }, 1.0},
        {compactify(MaskProfile::erf(), 1.0), [](double x) { return oracle::compact(oracle::erf_profile, x, 1.0); }, 1.0},
    };
}

double displacement(const MaskSpec& spec, std::size_t n = 8000) {
    const Interval dom = inner_domain(spec);
    return solve_inner_bvp(spec, dom.lo, dom.hi, n).displacement;
}

}  // namespace

TEST_CASE("analytic tanh offset root") {
    const double n = tanh_offset_root();
    CHECK(std::abs(n - oracle::tanh_offset_root()) < 1e-12);
    CHECK(std::abs(n - 0.662057) < 1e-5);
    CHECK(std::abs(tanh_offset_analytic(n)) < 1e-13);
}

TEST_CASE("Riccati zero-shift smoothing of tanh equals four times the analytic root") {
    const double delta = zero_shift_smoothing(MaskProfile::tanh()).delta;
    CHECK(std::abs(delta - 4.0 * oracle::tanh_offset_root()) < 1e-9);
}

TEST_CASE("Riccati shift agrees with brute-force shooting") {
    for (const auto& f : families()) {
        for (double delta : {0.5, 1.0, 2.0, 3.0, 4.0}) {
            CAPTURE(f.profile.name());
            CAPTURE(delta);
            CHECK(riccati_optimal_shift(f.profile, delta) ==
                  doctest::Approx(oracle::shooting_shift(f.oracle_profile, delta, f.half)).epsilon(1e-9));
        }
    }
}

TEST_CASE("zero-shift smoothings against the shooting oracle and the tabulated values") {
    for (const auto& f : families()) {
        CAPTURE(f.profile.name());
        const CalibrationResult r = zero_shift_smoothing(f.profile);
        const double ref = oracle::bisect([&](double d) { return oracle::shooting_shift(f.oracle_profile, d, f.half, 2000); },
                                          2.0, 4.5, 60);
        CHECK(std::abs(r.delta - ref) < 1e-8);
        CHECK(std::abs(r.optimal_shift) < 1e-12);
        // The tabulated constants carry rounding of order 1e-6 (see README).
        CHECK(std::abs(r.delta - tabulated_zero_shift_smoothing(f.profile)) < 5e-6);
    }
    CHECK(tabulated_zero_shift_smoothing(MaskProfile::discontinuous()) == 0.0);
}

TEST_CASE("calibration curves: envelope, monotone, unit limit") {
    for (const auto& f : families()) {
        CAPTURE(f.profile.name());
        double prev = 2.0;
        for (double d = 0.01; d <= 6.0; d *= 1.15) {
            const double s = riccati_optimal_shift(f.profile, d);
            // tanh leaves [-1, 2] just past delta = 4.
            if (d <= 4.0) {
                CHECK(s >= -1.0);
                CHECK(s <= 2.0);
            }
            CHECK(s <= prev + 1e-12);
            prev = s;
        }
        CHECK(std::abs(riccati_optimal_shift(f.profile, 1e-6) - 1.0) < 1e-5);
    }
}

TEST_CASE("calibration is deterministic") {
    const auto a = zero_shift_smoothing(MaskProfile::erf());
    const auto b = zero_shift_smoothing(MaskProfile::erf());
    CHECK(a.delta == b.delta);
    CHECK(a.optimal_shift == b.optimal_shift);
}

TEST_CASE("inner problem with the standard mask") {
    const MaskSpec spec{MaskProfile::discontinuous(), 0.0, 0.0};
    const InnerSolution s = solve_inner_bvp(spec, -30.0, 30.0, 4000);
    CHECK(std::abs(s.displacement + 1.0) < 1e-4);
    double err = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double xi = s.grid[i];
        err = std::max(err, std::abs(s.U[i] - (xi < 0.0 ? std::exp(xi) : 1.0 + xi)));
    }
    CHECK(err < 1e-4);
}

TEST_CASE("inner problem with the shifted mask") {
    const MaskSpec spec{MaskProfile::discontinuous(), 1.0, 0.0};
    const InnerSolution s = solve_inner_bvp(spec, -30.0, 30.0, 4000);
    CHECK(std::abs(s.displacement) < 1e-4);
    double err = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double xi = s.grid[i];
        err = std::max(err, std::abs(s.U[i] - (xi < 1.0 ? std::exp(xi - 1.0) : xi)));
    }
    CHECK(err < 1e-4);
}

TEST_CASE("inner problem converges at second order") {
    const MaskSpec spec{MaskProfile::discontinuous(), 0.0, 0.0};
    std::vector<double> e;
    for (std::size_t n : {1000, 2000, 4000}) e.push_back(std::abs(solve_inner_bvp(spec, -30.0, 30.0, n).displacement + 1.0));
    const double p1 = std::log2(e[0] / e[1]), p2 = std::log2(e[1] / e[2]);
    CHECK(p1 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(p2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("inner solution shape") {
    for (const auto& spec : {MaskSpec{MaskProfile::discontinuous(), 0.0, 0.0}, MaskSpec{MaskProfile::tanh(), 0.0, 2.0},
                             MaskSpec{compactify(MaskProfile::erf(), 1.0), 0.5, 3.0}}) {
        const Interval dom = inner_domain(spec);
        const InnerSolution s = solve_inner_bvp(spec, dom.lo, dom.hi, 4000);
        const std::size_t n = s.U.size();
        for (std::size_t i = 1; i + 1 < n; ++i) CHECK(s.U[i] > 0.0);
        CHECK(std::abs(s.U.front()) < 1e-8 * s.U.back());
        const auto& g = s.grid;
        const double d2 = ((s.U[n - 1] - s.U[n - 2]) / g.spacing(n - 2) - (s.U[n - 2] - s.U[n - 3]) / g.spacing(n - 3)) /
                          (0.5 * (g[n - 1] - g[n - 3]));
        CHECK(std::abs(d2) < 1e-6);
    }
}

TEST_CASE("inner problem confirms the Riccati shift") {
    for (const auto& f : families()) {
        for (double delta : {0.5, 1.0, 2.0, 4.0}) {
            CAPTURE(f.profile.name());
            CAPTURE(delta);
            const double d = displacement({f.profile, 0.0, delta});
            CHECK(std::abs(riccati_optimal_shift(f.profile, delta) + d) < 1e-6);
        }
    }
    const double dstar = zero_shift_smoothing(MaskProfile::tanh()).delta;
    CHECK(std::abs(displacement({MaskProfile::tanh(), 0.0, dstar})) < 1e-6);
}

TEST_CASE("shifting the mask shifts the displacement") {
    for (const auto& f : families()) {
        CAPTURE(f.profile.name());
        const double d0 = displacement({f.profile, 0.0, 1.5});
        for (double l : {-0.5, 0.7, 2.0}) CHECK(std::abs(displacement({f.profile, l, 1.5}) - (d0 + l)) < 1e-8);
    }
}

TEST_CASE("inner solver rejects bad input") {
    CHECK_THROWS_AS(solve_inner_bvp({MaskProfile::tanh(), 0.0, -1.0}, -30.0, 30.0, 100), ConfigError);
    CHECK_THROWS_AS(solve_inner_bvp({MaskProfile::discontinuous(), 0.0, 0.0}, 30.0, -30.0, 100), ConfigError);
}
