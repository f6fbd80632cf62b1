#include "vpm/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vpm/error.hpp"

namespace vpm {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

bool ends_with_eps(std::string_view& v) {
    if (v.size() > 3 && v.substr(v.size() - 3) == "eps") {
        v = trim(v.substr(0, v.size() - 3));
        return true;
    }
    return false;
}

std::string format_scaled(double x, bool in_eps) { return format_double(x) + (in_eps ? "eps" : ""); }

const char* scheme_name(TimeScheme s) { return s == TimeScheme::bdf2 ? "bdf2" : "imex1"; }

TimeScheme parse_scheme(std::string_view s) {
    if (s == "bdf2") return TimeScheme::bdf2;
    if (s == "imex1") return TimeScheme::imex1;
    throw ConfigError("scheme must be imex1 or bdf2");
}

std::string format_segments(const std::vector<RadialSegment>& segs) {
    std::string out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i) out += "; ";
        out += format_double(segs[i].lo) + ":" + format_double(segs[i].hi) + ":" + std::to_string(segs[i].points);
    }
    return out;
}

std::vector<RadialSegment> parse_segments(std::string_view s) {
    std::vector<RadialSegment> segs;
    if (trim(s).empty()) return segs;
    for (auto item : split(s, ';')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3) throw ConfigError("radial segment '" + std::string(item) + "' is not lo:hi:points");
        const double n = parse_double(parts[2]);
        if (!(n >= 2.0) || n != std::floor(n)) throw ConfigError("radial segment point count must be an integer >= 2");
        segs.push_back({parse_double(parts[0]), parse_double(parts[1]), static_cast<std::size_t>(n)});
    }
    return segs;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
    KeyValues kv;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (kv.has(key)) throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        kv.set(key, std::string(trim(line.substr(eq + 1))));
    }
    return kv;
}

KeyValues KeyValues::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

void KeyValues::set(const std::string& key, const std::string& value) { map_[key] = value; }

bool KeyValues::has(const std::string& key) const { return map_.count(key) != 0; }

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    try {
        return parse_double(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

std::size_t KeyValues::get_size(const std::string& key, std::size_t fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    std::size_t v = 0;
    const auto& s = it->second;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": '" + s + "' is not a count");
    return v;
}

std::vector<double> KeyValues::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    try {
        return parse_doubles(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

void KeyValues::require_known(std::span<const std::string> known) const {
    for (const auto& [k, v] : map_) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
    }
}

std::string KeyValues::canonical() const {
    std::string out;
    for (const auto& [k, v] : map_) out += k + " = " + v + "\n";
    return out;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) throw ConfigError("cannot serialize a non-finite number");
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw ConfigError("number formatting failed");
    return std::string(buf, p);
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("'" + std::string(s) + "' is not a finite decimal number");
    }
    return v;
}

std::string format_doubles(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out;
}

std::vector<double> parse_doubles(std::string_view s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (auto item : split(s, ',')) out.push_back(parse_double(item));
    return out;
}

MaskFamily parse_mask_family(std::string_view s) {
    if (s == "tanh") return MaskFamily::tanh;
    if (s == "erf") return MaskFamily::erf;
    if (s == "compact_tanh") return MaskFamily::compact_tanh;
    if (s == "compact_erf") return MaskFamily::compact_erf;
    if (s == "discontinuous") return MaskFamily::discontinuous;
    throw ConfigError("unknown mask profile '" + std::string(s) + "'");
}

std::string family_name(MaskFamily f) {
    switch (f) {
        case MaskFamily::tanh: return "tanh";
        case MaskFamily::erf: return "erf";
        case MaskFamily::compact_tanh: return "compact_tanh";
        case MaskFamily::compact_erf: return "compact_erf";
        case MaskFamily::discontinuous: return "discontinuous";
    }
    return "?";
}

std::string format_profile(const MaskProfile& p) {
    std::string out = family_name(p.family);
    if (p.compact()) out += ",c=" + format_double(p.c);
    return out;
}

MaskRecipe parse_mask_recipe(std::string_view s) {
    s = trim(s);
    MaskRecipe r;
    if (const auto colon = s.find(':'); colon != std::string_view::npos) {
        r.label = std::string(trim(s.substr(0, colon)));
        s = trim(s.substr(colon + 1));
    }
    const auto parts = split(s, ',');
    r.profile.family = parse_mask_family(parts.front());
    bool have_c = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string_view::npos) throw ConfigError("mask option '" + std::string(parts[i]) + "' needs '='");
        const auto key = trim(parts[i].substr(0, eq));
        auto val = trim(parts[i].substr(eq + 1));
        if (key == "c") {
            r.profile.c = parse_double(val);
            have_c = true;
        } else if (key == "shift") {
            r.shift_in_eps = ends_with_eps(val);
            r.shift = parse_double(val);
        } else if (key == "delta") {
            r.delta_in_eps = ends_with_eps(val);
            r.delta = parse_double(val);
        } else {
            throw ConfigError("unknown mask option '" + std::string(key) + "'");
        }
    }
    if (r.profile.compact() != have_c) throw ConfigError("c is required for compact profiles and only for them");
    r.profile.validate();
    if (r.profile.family == MaskFamily::discontinuous && r.delta != 0.0) {
        throw ConfigError("discontinuous mask requires delta = 0");
    }
    if (r.profile.smooth() && !(r.delta > 0.0)) throw ConfigError("smooth mask needs delta > 0");
    if (r.label.empty()) r.label = format_mask_recipe(r);
    return r;
}

std::string format_mask_recipe(const MaskRecipe& r) {
    std::string out = format_profile(r.profile);
    if (r.shift != 0.0) out += ",shift=" + format_scaled(r.shift, r.shift_in_eps);
    if (r.delta != 0.0) out += ",delta=" + format_scaled(r.delta, r.delta_in_eps);
    if (!r.label.empty() && r.label != out) out = r.label + ":" + out;
    return out;
}

std::vector<MaskRecipe> parse_mask_recipes(std::string_view s) {
    std::vector<MaskRecipe> out;
    for (auto item : split(s, ';')) {
        if (!item.empty()) out.push_back(parse_mask_recipe(item));
    }
    if (out.empty()) throw ConfigError("empty mask list");
    return out;
}

std::string format_mask_recipes(std::span<const MaskRecipe> rs) {
    std::string out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) out += "; ";
        out += format_mask_recipe(rs[i]);
    }
    return out;
}

CylinderConfig CylinderRunConfig::resolved() const {
    CylinderConfig c = cfg;
    c.spec = mask.at(c.eps());
    return c;
}

CylinderRunConfig cylinder_run_config(const KeyValues& kv) {
    static const std::vector<std::string> known{
        "Re",        "eta",         "mask",       "R1",         "R2",
        "n_theta",   "radial_segments", "radial_points", "grid_focus", "grid_width",
        "grid_background", "dt",    "t_end",      "ramp_time",  "inflow",
        "omega_amplitude", "omega_frequency", "scheme", "output_interval"};
    kv.require_known(known);
    CylinderRunConfig rc;
    CylinderConfig& c = rc.cfg;
    c.Re = kv.get_double("Re", c.Re);
    c.eta = kv.get_double("eta", c.eta);
    rc.mask = kv.has("mask") ? parse_mask_recipe(kv.get_string("mask", "")) : MaskRecipe{"", MaskProfile::discontinuous()};
    c.R1 = kv.get_double("R1", c.R1);
    c.R2 = kv.get_double("R2", c.R2);
    c.n_theta = kv.get_size("n_theta", c.n_theta);
    c.radial_segments = parse_segments(kv.get_string("radial_segments", ""));
    c.radial_points = kv.get_size("radial_points", c.radial_points);
    c.grid_focus = kv.get_doubles("grid_focus", {});
    c.grid_width = kv.get_double("grid_width", c.grid_width);
    c.grid_background = kv.get_double("grid_background", c.grid_background);
    c.dt = kv.get_double("dt", c.dt);
    c.t_end = kv.get_double("t_end", c.t_end);
    c.ramp_time = kv.get_double("ramp_time", c.ramp_time);
    c.inflow = kv.get_double("inflow", c.inflow);
    c.omega_amplitude = kv.get_double("omega_amplitude", c.omega_amplitude);
    c.omega_frequency = kv.get_double("omega_frequency", c.omega_frequency);
    c.scheme = parse_scheme(kv.get_string("scheme", scheme_name(c.scheme)));
    c.output_interval = kv.get_double("output_interval", c.output_interval);
    if (rc.mask.label.empty()) rc.mask.label = format_mask_recipe(rc.mask);
    return rc;
}

KeyValues to_key_values(const CylinderRunConfig& rc) {
    const CylinderConfig& c = rc.cfg;
    KeyValues kv;
    kv.set("Re", format_double(c.Re));
    kv.set("eta", format_double(c.eta));
    kv.set("mask", format_mask_recipe(rc.mask));
    kv.set("R1", format_double(c.R1));
    kv.set("R2", format_double(c.R2));
    kv.set("n_theta", std::to_string(c.n_theta));
    kv.set("radial_segments", format_segments(c.radial_segments));
    kv.set("radial_points", std::to_string(c.radial_points));
    kv.set("grid_focus", format_doubles(c.grid_focus));
    kv.set("grid_width", format_double(c.grid_width));
    kv.set("grid_background", format_double(c.grid_background));
    kv.set("dt", format_double(c.dt));
    kv.set("t_end", format_double(c.t_end));
    kv.set("ramp_time", format_double(c.ramp_time));
    kv.set("inflow", format_double(c.inflow));
    kv.set("omega_amplitude", format_double(c.omega_amplitude));
    kv.set("omega_frequency", format_double(c.omega_frequency));
    kv.set("scheme", scheme_name(c.scheme));
    kv.set("output_interval", format_double(c.output_interval));
    return kv;
}

}  // namespace vpm
