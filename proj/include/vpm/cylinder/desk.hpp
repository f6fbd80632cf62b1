#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vpm/cylinder/cylinder.hpp"

namespace vpm {

/// Masks compared in the desk study.
enum class DeskMask {
    standard,  // discontinuous, no shift
    shifted,   // discontinuous, shift = eps
    smoothed,  // compact erf (c = 1), no shift, zero-shift smoothing
};

std::string to_string(DeskMask m);
DeskMask parse_desk_mask(const std::string& s);
bool is_optimized(DeskMask m);

/// Mask for one run; `smoothing` is delta* of the compact erf profile.
MaskSpec desk_mask_spec(DeskMask m, double eps, double smoothing);

struct DeskStudyConfig {
    CylinderConfig base;  // Re, n_theta, R1, R2, forcing; scheme defaults to bdf2 here
    std::vector<double> etas{1e-3, 1e-4};
    std::vector<DeskMask> masks{DeskMask::standard, DeskMask::shifted, DeskMask::smoothed};
    std::size_t radial_points = 288;
    double reference_dt = 5e-5;
    double field_r_hi = 10.0;  // fields are compared on 1 < r < field_r_hi

    DeskStudyConfig();
};

struct DeskRun {
    DeskMask mask = DeskMask::standard;
    double eta = 0.0;
    CaseResult result;
    ForceErrors forces;
    FieldErrorReport fields;
    std::vector<double> u_error;  // pointwise u error at t_end
};

/// Per-mask summary over the two largest etas (coarse first).
struct DeskMaskSummary {
    DeskMask mask = DeskMask::standard;
    double eta_coarse = 0.0, eta_fine = 0.0;
    double einf_u_ratio = 0.0;  // coarse / fine
    double dFx_ratio = 0.0;
    double shape_mismatch_u = 0.0;
    double dFx_fine = 0.0;
    double dFx_richardson = 0.0;  // max |X_rich - F0x_ref|
    double richardson_gain = 0.0;  // dFx_fine / dFx_richardson
};

struct DeskStudy {
    DeskStudyConfig config;
    double smoothing = 0.0;
    CaseResult reference;
    std::vector<DeskRun> runs;
    std::vector<DeskMaskSummary> summaries;
    double penalized_wall_seconds = 0.0;

    const DeskRun& run(DeskMask m, double eta) const;
};

struct DeskProgress {
    std::function<void(const std::string& label)> started;
    std::function<void(const std::string& label, double wall_seconds)> finished;
};

/// One reference run at reference_dt, then every (mask, eta) pair on a grid
/// shared by all penalized runs. Reference nodes coincide with the penalized
/// nodes in [1, R2].
DeskStudy run_desk_study(const DeskStudyConfig& cfg, ExecPolicy exec = ExecPolicy::parallel,
                         const DeskProgress& progress = {});

/// Summary for two runs of one mask against a reference.
DeskMaskSummary summarize_mask(DeskMask m, const DeskRun& coarse, const DeskRun& fine, const CaseResult& reference);

}  // namespace vpm
