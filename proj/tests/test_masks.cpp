#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vpm/error.hpp"
#include "vpm/masks/mask.hpp"

using namespace vpm;

namespace {

const std::vector<MaskProfile> kSmooth{MaskProfile::tanh(), MaskProfile::erf(), compactify(MaskProfile::tanh(), 1.0),
                                       compactify(MaskProfile::erf(), 1.0), compactify(MaskProfile::erf(), 2.5)};

double slope_at_zero(const MaskProfile& p) {
    const double h = 1e-5;
    return (eval_normalized(p, h) - eval_normalized(p, -h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("profiles match their closed forms") {
    for (double x = -3.0; x <= 3.0; x += 0.173) {
        CHECK(eval_normalized(MaskProfile::tanh(), x) == doctest::Approx(oracle::tanh_profile(x)).epsilon(1e-15));
        CHECK(eval_normalized(MaskProfile::erf(), x) == doctest::Approx(oracle::erf_profile(x)).epsilon(1e-15));
        CHECK(eval_normalized(compactify(MaskProfile::erf(), 1.0), x) ==
              doctest::Approx(oracle::compact(oracle::erf_profile, x, 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("profile examples") {
    CHECK(eval_normalized(MaskProfile::tanh(), 0.0) == 0.5);
    CHECK(std::abs(eval_normalized(MaskProfile::erf(), 1.5) + eval_normalized(MaskProfile::erf(), -1.5) - 1.0) < 1e-14);
    CHECK(eval_normalized(compactify(MaskProfile::tanh(), 1.0), 0.0) == 0.5);
    CHECK(eval_normalized(compactify(MaskProfile::erf(), 1.0), 0.999999) < 1e-12);
    CHECK(eval_normalized(MaskProfile::discontinuous(), -0.1) == 1.0);
    CHECK(eval_normalized(MaskProfile::discontinuous(), 0.0) == 0.0);
}

TEST_CASE("smooth profiles have unit slope at the origin") {
    for (const auto& p : kSmooth) {
        CAPTURE(p.name());
        CHECK(std::abs(slope_at_zero(p) + 1.0) < 1e-8);
    }
}

TEST_CASE("smooth profiles: bounded, antisymmetric about 1/2, nonincreasing") {
    for (const auto& p : kSmooth) {
        CAPTURE(p.name());
        double prev = 1.0;
        for (double x = -10.0; x <= 10.0; x += 0.01) {
            const double v = eval_normalized(p, x);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev);
            CHECK(std::abs(v + eval_normalized(p, -x) - 1.0) < 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("compact profiles are exactly 0 and 1 outside the support and continuous at its ends") {
    for (double c : {0.5, 1.0, 3.0}) {
        for (auto base : {MaskProfile::tanh(), MaskProfile::erf()}) {
            const MaskProfile p = compactify(base, c);
            CHECK(eval_normalized(p, -c) == 1.0);
            CHECK(eval_normalized(p, -c - 1.0) == 1.0);
            CHECK(eval_normalized(p, c) == 0.0);
            CHECK(eval_normalized(p, c + 1.0) == 0.0);
            CHECK(eval_normalized(p, std::nextafter(c, 0.0)) < 1e-12);
            CHECK(eval_normalized(p, std::nextafter(-c, 0.0)) > 1.0 - 1e-12);
        }
    }
    CHECK_THROWS_AS(compactify(MaskProfile::tanh(), 0.0), ConfigError);
    CHECK_THROWS_AS(compactify(MaskProfile::discontinuous(), 1.0), ConfigError);
}

TEST_CASE("eval_mask examples") {
    CHECK(eval_mask({MaskProfile::discontinuous(), 0.0, 0.0}, -0.1) == 1.0);
    CHECK(eval_mask({MaskProfile::discontinuous(), 0.0, 0.0}, 0.1) == 0.0);
    CHECK(eval_mask({MaskProfile::discontinuous(), 0.3, 0.0}, 0.3) == 0.0);
    CHECK(eval_mask({MaskProfile::tanh(), 2.0, 1.0}, 2.0) == 0.5);
    CHECK(eval_mask({MaskProfile::erf(), 0.0, 2.0}, 1.0) == eval_normalized(MaskProfile::erf(), 0.5));
}

TEST_CASE("translation and scale equivariance") {
    const MaskProfile profiles[] = {MaskProfile::tanh(), compactify(MaskProfile::erf(), 1.0)};
    for (const auto& p : profiles) {
        for (double x = -2.0; x <= 2.0; x += 0.125) {
            const MaskSpec s{p, 0.25, 0.5};
            for (double a : {-1.0, 0.5, 2.0}) {
                MaskSpec t = s;
                t.shift += a;
                CHECK(eval_mask(s, x) == eval_mask(t, x + a));
            }
            MaskSpec k = s;
            k.delta = 2.0 * s.delta;
            CHECK(eval_mask(k, s.shift + 2.0 * x) == eval_mask(s, s.shift + x));
        }
    }
    const MaskSpec d{MaskProfile::discontinuous(), 0.0, 0.0};
    for (double x : {-0.5, 0.0, 0.5}) CHECK(eval_mask(d, x) == eval_mask({d.profile, 1.5, 0.0}, x + 1.5));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((MaskSpec{MaskProfile::tanh(), 0.0, -1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((MaskSpec{MaskProfile::discontinuous(), 0.0, 0.1}.validate()), ConfigError);
    CHECK_THROWS_AS((MaskProfile{MaskFamily::compact_erf, 0.0}.validate()), ConfigError);
    CHECK_NOTHROW((MaskSpec{MaskProfile::discontinuous(), 0.2, 0.0}.validate()));
}

TEST_CASE("cell averages") {
    const MaskSpec d{MaskProfile::discontinuous(), 0.1, 0.0};
    CHECK(cell_average(d, -1.0, 0.0) == 1.0);
    CHECK(cell_average(d, 0.0, 0.4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cell_average(d, 0.2, 0.4) == 0.0);
    // Antisymmetry makes the average over a centred interval exactly 1/2.
    const MaskSpec e{MaskProfile::erf(), 0.0, 0.3};
    CHECK(cell_average(e, -0.4, 0.4) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("mask fields on a circle signed distance") {
    std::vector<double> r, sdf;
    for (double x = 0.5; x <= 1.5; x += 0.01) {
        r.push_back(x);
        sdf.push_back(x - 1.0);
    }
    const auto ind = build_mask_field(sdf, {MaskProfile::discontinuous(), 0.0, 0.0});
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(ind[i] == (sdf[i] < 0.0 ? 1.0 : 0.0));
    const std::vector<double> at_wall{0.0};
    CHECK(build_mask_field(at_wall, {MaskProfile::erf(), 0.0, 0.01})[0] == 0.5);
    const auto smooth = build_mask_field(sdf, {MaskProfile::tanh(), 0.0, 0.05});
    for (std::size_t i = 1; i < smooth.size(); ++i) CHECK(smooth[i] <= smooth[i - 1]);
}

TEST_CASE("effective cutoff") {
    for (auto p : {MaskProfile::tanh(), MaskProfile::erf()}) {
        const double c = effective_cutoff(p);
        CHECK(eval_normalized(p, c) < 1e-16);
        CHECK(eval_normalized(p, 0.999 * c) >= 1e-16);
    }
    CHECK(effective_cutoff(compactify(MaskProfile::tanh(), 1.5)) == 1.5);
}

TEST_CASE("recipes scale with the damping length") {
    const MaskRecipe r{"s", MaskProfile::erf(), 1.0, true, 3.0, true};
    const MaskSpec s = r.at(0.01);
    CHECK(s.shift == doctest::Approx(0.01));
    CHECK(s.delta == doctest::Approx(0.03));
    const MaskRecipe fixed{"f", MaskProfile::erf(), 0.2, false, 0.1, false};
    CHECK(fixed.at(0.01).shift == 0.2);
}
