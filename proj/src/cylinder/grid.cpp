#include <algorithm>
#include <cmath>
#include <limits>

#include "vpm/cylinder/cylinder.hpp"
#include "vpm/error.hpp"
#include "vpm/numerics/grid.hpp"

namespace vpm {

std::string to_string(TimeScheme s) { return s == TimeScheme::imex1 ? "imex1" : "bdf2"; }

std::string to_string(CylinderMode m) { return m == CylinderMode::penalized ? "penalized" : "reference"; }

double CylinderConfig::eps() const { return std::sqrt(eta / Re); }

double CylinderConfig::time_step() const { return dt > 0.0 ? dt : std::min(5e-4, 0.5 * eta); }

double CylinderConfig::resolved_grid_width() const {
    if (grid_width > 0.0) return grid_width;
    double s = eps();
    if (spec.delta > 0.0) s = std::min(s, spec.delta);
    if (spec.shift != 0.0) s = std::min(s, std::abs(spec.shift));
    return 4.0 * s;
}

namespace {

constexpr double kAnchorTol = 1e-12;

bool finite_positive(double x) { return x > 0.0 && std::isfinite(x); }

double mask_halfwidth(const MaskSpec& spec) {
    // Compact and discontinuous masks have exact support; a noncompact smooth
    // profile is cut where it drops below 1e-16.
    return spec.transition_halfwidth();
}

std::vector<double> mask_anchors(const CylinderConfig& cfg) {
    const double centre = 1.0 + cfg.spec.shift;
    const double hw = mask_halfwidth(cfg.spec);
    if (hw == 0.0) return {centre};
    return {centre - hw, centre + hw};
}

std::vector<double> focus_radii(const CylinderConfig& cfg) {
    if (!cfg.grid_focus.empty()) return cfg.grid_focus;
    // The no-slip inner wall inside the body carries its own layer of width eps.
    std::vector<double> f{cfg.R1, 1.0, 1.0 + cfg.spec.shift};
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

GradingDensity density_for(const CylinderConfig& cfg) {
    std::vector<Interval> focus;
    for (double r : focus_radii(cfg)) focus.push_back({r, r});
    return GradingDensity(focus, cfg.resolved_grid_width(), cfg.grid_background);
}

std::vector<double> penalized_anchors(const CylinderConfig& cfg) {
    std::vector<double> a{cfg.R1, 1.0, cfg.R2};
    for (double x : mask_anchors(cfg)) a.push_back(x);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end(), [](double x, double y) { return std::abs(x - y) <= kAnchorTol; }),
            a.end());
    return a;
}

std::vector<RadialSegment> segments_from_nodes(const std::vector<double>& nodes, const std::vector<double>& anchors) {
    std::vector<RadialSegment> segs;
    std::size_t start = 0;
    for (std::size_t k = 1; k < anchors.size(); ++k) {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), anchors[k] - kAnchorTol);
        const auto end = static_cast<std::size_t>(it - nodes.begin());
        segs.push_back({anchors[k - 1], anchors[k], end - start + 1});
        start = end;
    }
    return segs;
}

void check_segments(const std::vector<RadialSegment>& segs, double lo, double hi) {
    if (segs.empty()) throw ConfigError("radial segments: empty list");
    if (std::abs(segs.front().lo - lo) > kAnchorTol) throw ConfigError("radial segments must start at the inner radius");
    if (std::abs(segs.back().hi - hi) > kAnchorTol) throw ConfigError("radial segments must end at R2");
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (!(segs[k].hi > segs[k].lo)) throw ConfigError("radial segment with hi <= lo");
        if (segs[k].points < 2) throw ConfigError("radial segment needs at least two points");
        if (k > 0 && std::abs(segs[k].lo - segs[k - 1].hi) > kAnchorTol) {
            throw ConfigError("radial segments overlap or leave a gap");
        }
    }
}

bool is_segment_end(const std::vector<RadialSegment>& segs, double x) {
    for (const auto& s : segs) {
        if (std::abs(s.lo - x) <= kAnchorTol || std::abs(s.hi - x) <= kAnchorTol) return true;
    }
    return false;
}

}  // namespace

void CylinderConfig::validate(CylinderMode mode) const {
    if (!finite_positive(Re)) throw ConfigError("Re must be positive");
    if (!finite_positive(R1) || !(R2 > R1) || !std::isfinite(R2)) throw ConfigError("need 0 < R1 < R2");
    if (n_theta < 8 || n_theta % 2 != 0) throw ConfigError("n_theta must be even and at least 8");
    if (!finite_positive(t_end)) throw ConfigError("t_end must be positive");
    if (!finite_positive(ramp_time)) throw ConfigError("ramp_time must be positive");
    if (!finite_positive(output_interval)) throw ConfigError("output_interval must be positive");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be >= 0");
    if (!std::isfinite(inflow) || !std::isfinite(omega_amplitude) || !std::isfinite(omega_frequency)) {
        throw ConfigError("forcing parameters must be finite");
    }
    if (!(grid_width >= 0.0) || !(grid_background >= 0.0)) throw ConfigError("grid grading parameters must be >= 0");
    if (radial_segments.empty() && radial_points < 16) throw ConfigError("radial_points must be at least 16");
    const double ref_r1 = mode == CylinderMode::penalized ? R1 : 1.0;
    if (!(R2 > 1.0) || !(ref_r1 < R2)) throw ConfigError("R2 must lie outside the cylinder");
    if (mode == CylinderMode::penalized) {
        if (!finite_positive(eta)) throw ConfigError("eta must be positive");
        if (!(eta < 1.0)) throw ConfigError("eta must be below 1");
        spec.validate();
        const double reach = std::abs(spec.shift) + mask_halfwidth(spec);
        if (!(R1 < 1.0 - reach)) throw ConfigError("R1 must lie strictly inside the mask");
        if (!(R2 > 1.0 + reach)) throw ConfigError("R2 must lie outside the mask transition");
        if (time_step() > 0.5 * eta * (1.0 + 1e-12)) throw ConfigError("dt must not exceed eta / 2 with an explicit penalty");
        if (!radial_segments.empty()) {
            check_segments(radial_segments, R1, R2);
            for (double x : mask_anchors(*this)) {
                if (!is_segment_end(radial_segments, x)) {
                    throw ConfigError("radial segments must end at the mask transition radii");
                }
            }
            if (!is_segment_end(radial_segments, 1.0)) throw ConfigError("radial segments must end at r = 1");
        }
    } else if (!radial_segments.empty()) {
        check_segments(radial_segments, 1.0, R2);
    }
}

std::vector<RadialSegment> resolved_segments(const CylinderConfig& cfg, CylinderMode mode) {
    if (!cfg.radial_segments.empty()) return cfg.radial_segments;
    std::vector<double> anchors = penalized_anchors(cfg);
    if (mode == CylinderMode::reference) {
        anchors.erase(std::remove_if(anchors.begin(), anchors.end(), [](double x) { return x < 1.0 - kAnchorTol; }),
                      anchors.end());
    }
    GradingSpec gs;
    gs.anchors = anchors;
    for (double r : focus_radii(cfg)) gs.focus.push_back({r, r});
    gs.width = cfg.resolved_grid_width();
    gs.background = cfg.grid_background;
    gs.nodes = cfg.radial_points;
    const Grid1D g = graded_grid(gs);
    return segments_from_nodes({g.nodes().begin(), g.nodes().end()}, anchors);
}

CylinderConfig reference_config(const CylinderConfig& cfg) {
    CylinderConfig ref = cfg;
    const auto segs = resolved_segments(cfg, CylinderMode::penalized);
    ref.radial_segments.clear();
    for (const auto& s : segs) {
        if (s.lo >= 1.0 - kAnchorTol) ref.radial_segments.push_back(s);
    }
    if (ref.radial_segments.empty() || std::abs(ref.radial_segments.front().lo - 1.0) > kAnchorTol) {
        throw ConfigError("reference grid needs a segment starting at r = 1");
    }
    ref.radial_segments.front().lo = 1.0;
    ref.grid_focus = focus_radii(cfg);
    ref.grid_width = cfg.resolved_grid_width();
    ref.R1 = 1.0;
    return ref;
}

RadialGrid build_cylinder_grid(const CylinderConfig& cfg, CylinderMode mode) {
    cfg.validate(mode);
    const auto segs = resolved_segments(cfg, mode);
    check_segments(segs, mode == CylinderMode::penalized ? cfg.R1 : 1.0, cfg.R2);
    const GradingDensity density = density_for(cfg);

    RadialGrid g;
    g.r.push_back(segs.front().lo);
    for (const auto& s : segs) {
        auto x = density.distribute(s.lo, s.hi, s.points - 1);
        g.r.insert(g.r.end(), x.begin() + 1, x.end());
    }
    const std::size_t n = g.r.size();
    g.rc.resize(n + 1);
    g.rc[0] = g.r[0] - 0.5 * (g.r[1] - g.r[0]);
    for (std::size_t k = 1; k < n; ++k) g.rc[k] = 0.5 * (g.r[k - 1] + g.r[k]);
    g.rc[n] = g.r[n - 1] + 0.5 * (g.r[n - 1] - g.r[n - 2]);

    if (mode == CylinderMode::penalized) {
        const double d = std::max(cfg.spec.delta, cfg.eps());
        const double lo = 1.0 + cfg.spec.shift - 3.0 * d;
        const double hi = 1.0 + cfg.spec.shift + 3.0 * d;
        const auto count = std::count_if(g.r.begin(), g.r.end(), [&](double r) { return r >= lo && r <= hi; });
        if (count < 8) throw ConfigError("damping layer under-resolved: fewer than 8 radial points across it");
    }
    return g;
}

CylinderDiscretization discretize(const CylinderConfig& cfg, CylinderMode mode) {
    CylinderDiscretization d;
    d.grid = build_cylinder_grid(cfg, mode);
    d.n_theta = cfg.n_theta;
    d.penalized = mode == CylinderMode::penalized;
    const auto& r = d.grid.r;
    const std::size_t n = r.size();
    d.gamma_node.assign(n, 0.0);
    d.gamma_center.assign(n + 1, 0.0);
    if (d.penalized) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = j == 0 ? r[0] : d.grid.rc[j];
            const double b = j + 1 == n ? r[n - 1] : d.grid.rc[j + 1];
            d.gamma_node[j] = cell_average(cfg.spec, a - 1.0, b - 1.0);
        }
        for (std::size_t k = 1; k < n; ++k) d.gamma_center[k] = cell_average(cfg.spec, r[k - 1] - 1.0, r[k] - 1.0);
    }
    return d;
}

double ramp_function(double t, double ramp_time) {
    if (!(ramp_time > 0.0)) throw ConfigError("ramp_time must be positive");
    if (t <= 0.0) return 0.0;
    if (t >= ramp_time) return 1.0;
    return eval_normalized(compactify(MaskProfile::erf(), 1.0), 1.0 - 2.0 * t / ramp_time);
}

BoundaryDrive BoundaryDrive::from_config(const CylinderConfig& cfg) {
    BoundaryDrive d;
    const double u0 = cfg.inflow, ramp = cfg.ramp_time;
    const double a = cfg.omega_amplitude, w = cfg.omega_frequency;
    d.inflow = [u0, ramp](double t) { return u0 * ramp_function(t, ramp); };
    d.omega = [a, w](double t) { return a * std::sin(w * t); };
    d.omega_dot = [a, w](double t) { return a * w * std::cos(w * t); };
    d.outer_omega = [](double) { return 0.0; };
    return d;
}

void share_radial_grid(std::vector<CylinderConfig>& configs, std::size_t radial_points) {
    if (configs.empty()) return;
    std::vector<double> anchors, focus;
    double width = std::numeric_limits<double>::infinity();
    for (const auto& c : configs) {
        if (c.R1 != configs.front().R1 || c.R2 != configs.front().R2) throw ConfigError("shared grid needs equal R1, R2");
        if (c.grid_background != configs.front().grid_background) {
            throw ConfigError("shared grid needs one grading background");
        }
        for (double a : penalized_anchors(c)) anchors.push_back(a);
        for (double f : focus_radii(c)) focus.push_back(f);
        width = std::min(width, c.resolved_grid_width());
    }
    auto dedupe = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end(), [](double x, double y) { return std::abs(x - y) <= kAnchorTol; }),
                v.end());
    };
    dedupe(anchors);
    dedupe(focus);
    GradingSpec gs;
    gs.anchors = anchors;
    for (double r : focus) gs.focus.push_back({r, r});
    gs.width = width;
    gs.background = configs.front().grid_background;
    gs.nodes = radial_points;
    const Grid1D g = graded_grid(gs);
    const auto segs = segments_from_nodes({g.nodes().begin(), g.nodes().end()}, anchors);
    for (auto& c : configs) {
        c.radial_segments = segs;
        c.grid_focus = focus;
        c.grid_width = width;
        c.radial_points = radial_points;
    }
}

}  // namespace vpm
