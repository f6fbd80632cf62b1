#pragma once

#include <span>
#include <string>
#include <vector>

namespace vpm {

enum class MaskFamily { tanh, erf, compact_tanh, compact_erf, discontinuous };

/// Normalized profile: 1 deep in the solid (x -> -inf), 0 in the fluid, slope -1 at 0.
struct MaskProfile {
    MaskFamily family = MaskFamily::discontinuous;
    double c = 0.0;  // half-width, compact families only

    static MaskProfile tanh() { return {MaskFamily::tanh, 0.0}; }
    static MaskProfile erf() { return {MaskFamily::erf, 0.0}; }
    static MaskProfile discontinuous() { return {MaskFamily::discontinuous, 0.0}; }

    bool smooth() const noexcept { return family != MaskFamily::discontinuous; }
    bool compact() const noexcept { return family == MaskFamily::compact_tanh || family == MaskFamily::compact_erf; }
    void validate() const;
    /// tanh, erf, tanh;c=1, erf;c=1, discontinuous
    std::string name() const;

    bool operator==(const MaskProfile&) const = default;
};

double eval_normalized(const MaskProfile& profile, double x);

/// Compactified copy of a smooth noncompact profile on [-c, c].
MaskProfile compactify(const MaskProfile& base, double c);

/// Gamma_{l,delta}(x) = profile((x - shift) / delta); delta = 0 is the discontinuous limit.
struct MaskSpec {
    MaskProfile profile;
    double shift = 0.0;
    double delta = 0.0;

    void validate() const;
    /// Half-width of the transition region in x: c*delta for compact profiles,
    /// the 1e-16 cutoff times delta otherwise, 0 when discontinuous.
    double transition_halfwidth() const;

    bool operator==(const MaskSpec&) const = default;
};

double eval_mask(const MaskSpec& spec, double x);

/// Mean of the mask over [a, b] (exact for discontinuous masks, Gauss-Legendre otherwise).
double cell_average(const MaskSpec& spec, double a, double b);

/// Gamma(sigma) at each node of a signed-distance field (sigma > 0 in the fluid).
std::vector<double> build_mask_field(std::span<const double> sdf, const MaskSpec& spec);

/// Mask whose shift and smoothing may be given in units of the damping length.
struct MaskRecipe {
    std::string label;
    MaskProfile profile;
    double shift = 0.0;
    bool shift_in_eps = false;
    double delta = 0.0;
    bool delta_in_eps = false;

    MaskSpec at(double eps) const;
};

/// Smallest c with profile(c) < 1e-16 (bisection); c itself for compact profiles.
double effective_cutoff(const MaskProfile& profile);

}  // namespace vpm
