#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpm/cylinder/cylinder.hpp"
#include "vpm/masks/mask.hpp"

namespace vpm {

/// Artifact version embedded in every output file.
inline constexpr const char* kVersion = "1.0.0";

/// Flat `key = value` text. '#' starts a comment; blank lines are ignored.
/// Keys are unique; values keep their text until a typed getter parses them.
class KeyValues {
public:
    static KeyValues parse(std::string_view text);
    static KeyValues load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const noexcept { return map_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

    /// Throws ConfigError naming the first key outside `known`.
    void require_known(std::span<const std::string> known) const;

    /// Sorted `key = value` lines.
    std::string canonical() const;

private:
    std::map<std::string, std::string> map_;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);
/// Strict decimal parse of the whole string.
double parse_double(std::string_view s);
std::string format_doubles(std::span<const double> xs);
std::vector<double> parse_doubles(std::string_view s);

/// Profile names: tanh, erf, compact_tanh, compact_erf, discontinuous.
/// Compact names take c from the recipe text.
MaskFamily parse_mask_family(std::string_view s);
std::string family_name(MaskFamily f);
/// family[,c=C], the form profile options take in configs and flags.
std::string format_profile(const MaskProfile& p);

/// Recipe text: [label:]profile[,c=C][,shift=X][,delta=X], where X may end in
/// `eps` to scale with the damping length. Lists are separated by ';'.
MaskRecipe parse_mask_recipe(std::string_view s);
std::string format_mask_recipe(const MaskRecipe& r);
std::vector<MaskRecipe> parse_mask_recipes(std::string_view s);
std::string format_mask_recipes(std::span<const MaskRecipe> rs);

/// Cylinder run record: every CylinderConfig field plus the mask recipe the spec
/// is resolved from.
struct CylinderRunConfig {
    CylinderConfig cfg;
    MaskRecipe mask;

    /// cfg with spec resolved at cfg.eps().
    CylinderConfig resolved() const;
};

CylinderRunConfig cylinder_run_config(const KeyValues& kv);
KeyValues to_key_values(const CylinderRunConfig& rc);

}  // namespace vpm
