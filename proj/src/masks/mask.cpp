#include "vpm/masks/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vpm/error.hpp"
#include "vpm/numerics/quadrature.hpp"

namespace vpm {

namespace {

double base_tanh(double x) {
    // 0.5 (1 - tanh 2x) without cancellation in the tail
    return 1.0 / (1.0 + std::exp(4.0 * x));
}

double base_erf(double x) { return 0.5 * std::erfc(std::sqrt(std::numbers::pi) * x); }

double compact_map(double base(double), double x, double c) {
    if (x <= -c) return 1.0;
    if (x >= c) return 0.0;
    const double s = x / c;
    return base(x / std::sqrt((1.0 - s) * (1.0 + s)));
}

}  // namespace

void MaskProfile::validate() const {
    if (compact()) {
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("compact mask needs c > 0");
    }
}

std::string MaskProfile::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (family) {
        case MaskFamily::tanh: return "tanh";
        case MaskFamily::erf: return "erf";
        case MaskFamily::discontinuous: return "discontinuous";
        case MaskFamily::compact_tanh: os << "tanh;c=" << c; return os.str();
        case MaskFamily::compact_erf: os << "erf;c=" << c; return os.str();
    }
    return "?";
}

double eval_normalized(const MaskProfile& p, double x) {
    switch (p.family) {
        case MaskFamily::tanh: return base_tanh(x);
        case MaskFamily::erf: return base_erf(x);
        case MaskFamily::compact_tanh: return compact_map(base_tanh, x, p.c);
        case MaskFamily::compact_erf: return compact_map(base_erf, x, p.c);
        case MaskFamily::discontinuous: return x < 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

MaskProfile compactify(const MaskProfile& base, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("compactify: c must be positive");
    switch (base.family) {
        case MaskFamily::tanh: return {MaskFamily::compact_tanh, c};
        case MaskFamily::erf: return {MaskFamily::compact_erf, c};
        default: throw ConfigError("compactify: base profile must be smooth and noncompact");
    }
}

void MaskSpec::validate() const {
    profile.validate();
    if (!std::isfinite(shift)) throw ConfigError("mask shift must be finite");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("mask delta must be >= 0");
    if (profile.family == MaskFamily::discontinuous && delta != 0.0) {
        throw ConfigError("discontinuous mask requires delta = 0");
    }
}

double MaskSpec::transition_halfwidth() const {
    if (!profile.smooth() || delta == 0.0) return 0.0;
    return effective_cutoff(profile) * delta;
}

double eval_mask(const MaskSpec& spec, double x) {
    if (spec.delta == 0.0 || !spec.profile.smooth()) return x < spec.shift ? 1.0 : 0.0;
    return eval_normalized(spec.profile, (x - spec.shift) / spec.delta);
}

double cell_average(const MaskSpec& spec, double a, double b) {
    if (!(b > a)) throw ConfigError("cell_average: need b > a");
    const double l = spec.shift;
    if (spec.delta == 0.0 || !spec.profile.smooth()) {
        if (b <= l) return 1.0;
        if (a >= l) return 0.0;
        return (l - a) / (b - a);
    }
    static const GaussRule rule = gauss_legendre(12);
    const double d = spec.delta;
    std::vector<double> cuts{a};
    std::vector<double> marks{-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0};
    if (spec.profile.compact()) {
        marks.push_back(-spec.profile.c);
        marks.push_back(spec.profile.c);
        for (double f : {0.5, 0.9, 0.99}) {
            marks.push_back(-f * spec.profile.c);
            marks.push_back(f * spec.profile.c);
        }
    }
    std::sort(marks.begin(), marks.end());
    for (double m : marks) {
        const double x = l + m * d;
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    auto f = [&](double x) { return eval_mask(spec, x); };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] > cuts[k]) s += integrate_gauss(f, cuts[k], cuts[k + 1], rule);
    }
    return std::clamp(s / (b - a), 0.0, 1.0);
}

std::vector<double> build_mask_field(std::span<const double> sdf, const MaskSpec& spec) {
    std::vector<double> g(sdf.size());
    std::transform(sdf.begin(), sdf.end(), g.begin(), [&](double s) { return eval_mask(spec, s); });
    return g;
}

MaskSpec MaskRecipe::at(double eps) const {
    MaskSpec s{profile, shift_in_eps ? shift * eps : shift, delta_in_eps ? delta * eps : delta};
    s.validate();
    return s;
}

double effective_cutoff(const MaskProfile& profile) {
    if (profile.compact()) return profile.c;
    if (!profile.smooth()) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (!(eval_normalized(profile, hi) < 1e-16)) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double m = 0.5 * (lo + hi);
        if (eval_normalized(profile, m) < 1e-16) {
            hi = m;
        } else {
            lo = m;
        }
    }
    return hi;
}

}  // namespace vpm
