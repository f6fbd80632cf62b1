#include "vpm/cylinder/desk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "vpm/analysis/analysis.hpp"
#include "vpm/calibration/calibration.hpp"
#include "vpm/error.hpp"

namespace vpm {

std::string to_string(DeskMask m) {
    switch (m) {
        case DeskMask::standard: return "standard";
        case DeskMask::shifted: return "shifted";
        case DeskMask::smoothed: return "smoothed";
    }
    return "?";
}

DeskMask parse_desk_mask(const std::string& s) {
    for (DeskMask m : {DeskMask::standard, DeskMask::shifted, DeskMask::smoothed}) {
        if (s == to_string(m)) return m;
    }
    throw ConfigError("unknown desk mask '" + s + "'");
}

bool is_optimized(DeskMask m) { return m != DeskMask::standard; }

MaskSpec desk_mask_spec(DeskMask m, double eps, double smoothing) {
    switch (m) {
        case DeskMask::standard: return {MaskProfile::discontinuous(), 0.0, 0.0};
        case DeskMask::shifted: return {MaskProfile::discontinuous(), eps, 0.0};
        case DeskMask::smoothed: return {compactify(MaskProfile::erf(), 1.0), 0.0, smoothing * eps};
    }
    throw ConfigError("unknown desk mask");
}

DeskStudyConfig::DeskStudyConfig() { base.scheme = TimeScheme::bdf2; }

const DeskRun& DeskStudy::run(DeskMask m, double eta) const {
    for (const auto& r : runs) {
        if (r.mask == m && r.eta == eta) return r;
    }
    throw ConfigError("desk study has no run for " + to_string(m));
}

DeskMaskSummary summarize_mask(DeskMask m, const DeskRun& coarse, const DeskRun& fine, const CaseResult& reference) {
    DeskMaskSummary s;
    s.mask = m;
    s.eta_coarse = coarse.eta;
    s.eta_fine = fine.eta;
    s.einf_u_ratio = coarse.fields.u.einf / fine.fields.u.einf;
    s.dFx_ratio = coarse.forces.max_abs_dFx / fine.forces.max_abs_dFx;
    s.shape_mismatch_u = shape_mismatch(coarse.u_error, fine.u_error);
    s.dFx_fine = fine.forces.max_abs_dFx;

    const auto& a = coarse.result.series.samples;
    const auto& b = fine.result.series.samples;
    if (a.size() != b.size()) throw ConfigError("desk runs have different sample counts");
    ForceTorqueSeries rich;
    rich.method = "richardson";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k].t - b[k].t) > 1e-9 * std::max(1.0, a[k].t)) {
            throw ConfigError("desk runs sample different times");
        }
        ForceSample x = b[k];
        x.Fx = richardson(a[k].Fx, coarse.eta, b[k].Fx, fine.eta);
        x.Fy = richardson(a[k].Fy, coarse.eta, b[k].Fy, fine.eta);
        x.T = richardson(a[k].T, coarse.eta, b[k].T, fine.eta);
        rich.samples.push_back(x);
    }
    s.dFx_richardson = force_errors(rich, reference.series).max_abs_dFx;
    s.richardson_gain = s.dFx_fine / s.dFx_richardson;
    return s;
}

DeskStudy run_desk_study(const DeskStudyConfig& cfg, ExecPolicy exec, const DeskProgress& progress) {
    if (cfg.etas.empty() || cfg.masks.empty()) throw ConfigError("desk study needs etas and masks");
    if (!(cfg.field_r_hi > 1.0)) throw ConfigError("field_r_hi must exceed 1");
    DeskStudy study;
    study.config = cfg;
    study.smoothing = zero_shift_smoothing(compactify(MaskProfile::erf(), 1.0)).delta;

    std::vector<CylinderConfig> configs;
    std::vector<std::pair<DeskMask, double>> keys;
    for (double eta : cfg.etas) {
        for (DeskMask m : cfg.masks) {
            CylinderConfig c = cfg.base;
            c.eta = eta;
            c.dt = 0.0;
            c.radial_segments.clear();
            c.grid_focus.clear();
            c.grid_width = 0.0;
            c.spec = desk_mask_spec(m, c.eps(), study.smoothing);
            configs.push_back(c);
            keys.emplace_back(m, eta);
        }
    }
    share_radial_grid(configs, cfg.radial_points);

    auto label = [](const std::string& what, double eta) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s eta=%g", what.c_str(), eta);
        return std::string(buf);
    };

    CylinderConfig ref_cfg = configs.front();
    ref_cfg.dt = cfg.reference_dt;
    RunOptions opts;
    opts.exec = exec;
    if (progress.started) progress.started("reference");
    study.reference = run_case(ref_cfg, CylinderMode::reference, opts);
    if (progress.finished) progress.finished("reference", study.reference.wall_seconds);
    const PhysicalFields& ref_fields = study.reference.snapshots.back().fields;

    for (std::size_t i = 0; i < configs.size(); ++i) {
        const std::string name = label(to_string(keys[i].first), keys[i].second);
        if (progress.started) progress.started(name);
        DeskRun run;
        run.mask = keys[i].first;
        run.eta = keys[i].second;
        run.result = run_case(configs[i], CylinderMode::penalized, opts);
        const PhysicalFields& pf = run.result.snapshots.back().fields;
        run.forces = force_errors(run.result.series, study.reference.series);
        run.fields = field_errors(pf, ref_fields, 1.0, cfg.field_r_hi);
        run.fields.t = run.result.final_state.t;
        run.u_error = error_field(pf, ref_fields, FieldVariable::u, 1.0, cfg.field_r_hi);
        study.penalized_wall_seconds += run.result.wall_seconds;
        if (progress.finished) progress.finished(name, run.result.wall_seconds);
        study.runs.push_back(std::move(run));
    }

    if (cfg.etas.size() >= 2) {
        std::vector<double> sorted = cfg.etas;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        for (DeskMask m : cfg.masks) {
            study.summaries.push_back(
                summarize_mask(m, study.run(m, sorted[0]), study.run(m, sorted[1]), study.reference));
        }
    }
    return study;
}

}  // namespace vpm
