#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vpm/analysis/analysis.hpp"
#include "vpm/masks/mask.hpp"

namespace vpm {

enum class ExecPolicy { serial, parallel };
enum class TimeScheme { imex1, bdf2 };
enum class CylinderMode { penalized, reference };

std::string to_string(TimeScheme s);
std::string to_string(CylinderMode m);

struct RadialSegment {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 0;  // including both ends

    bool operator==(const RadialSegment&) const = default;
};

/// Annulus R1 < r < R2 around a unit cylinder. The mask argument is r - 1.
struct CylinderConfig {
    double Re = 50.0;
    double eta = 1e-3;
    MaskSpec spec;
    double R1 = 0.1;
    double R2 = 10.0;
    std::size_t n_theta = 128;

    /// Explicit radial segments tiling [R1, R2]. Empty: anchors at R1, 1, the
    /// mask transition ends and R2, points shared out by grading mass.
    std::vector<RadialSegment> radial_segments;
    std::size_t radial_points = 288;
    /// Radii the grading concentrates on; empty: the wall and the mask centre.
    std::vector<double> grid_focus;
    double grid_width = 0.0;  // 0: four times the smallest of eps, delta, |shift|
    double grid_background = 0.2;

    double dt = 0.0;  // 0: min(5e-4, eta / 2)
    double t_end = 5.0;
    double ramp_time = 2.0;
    double inflow = 1.0;  // far-field speed after the ramp
    double omega_amplitude = 1.0;
    double omega_frequency = 0.6366197723675814;  // 2 / pi
    TimeScheme scheme = TimeScheme::imex1;
    double output_interval = 0.01;

    double eps() const;
    double time_step() const;
    double resolved_grid_width() const;
    /// Throws ConfigError. Penalized runs also check R1 and R2 against the
    /// mask support and dt <= eta / 2.
    void validate(CylinderMode mode = CylinderMode::penalized) const;
};

/// Same run with no-slip at r = 1: R1 = 1 and the segments above r = 1.
CylinderConfig reference_config(const CylinderConfig& cfg);

/// Nodes r_j carry u and q; centres r_{j-1/2} (one ghost past each end) carry v and p.
struct RadialGrid {
    std::vector<double> r;
    std::vector<double> rc;  // size r.size() + 1

    std::size_t size() const noexcept { return r.size(); }
};

/// Radial nodes honouring the segment structure. Throws ConfigError on
/// overlapping or unordered segments, or when the damping layer gets fewer
/// than eight points across 1 + l +- 3 max(delta, eps).
RadialGrid build_cylinder_grid(const CylinderConfig& cfg, CylinderMode mode = CylinderMode::penalized);

/// Segment list actually used (explicit or generated).
std::vector<RadialSegment> resolved_segments(const CylinderConfig& cfg, CylinderMode mode = CylinderMode::penalized);

/// Everything the stepper needs that depends only on space.
struct CylinderDiscretization {
    RadialGrid grid;
    std::size_t n_theta = 0;
    bool penalized = false;
    std::vector<double> gamma_node;    // cell-averaged mask on dual cells
    std::vector<double> gamma_center;  // indexed like rc; ghosts 0
};

CylinderDiscretization discretize(const CylinderConfig& cfg, CylinderMode mode);

/// Gamma_[erf;1](1 - 2t/ramp): 0 at t = 0, 1 for t >= ramp.
double ramp_function(double t, double ramp_time);

/// Time-dependent boundary data.
struct BoundaryDrive {
    std::function<double(double)> inflow;       // g(t)
    std::function<double(double)> omega;        // inner wall angular velocity
    std::function<double(double)> omega_dot;
    std::function<double(double)> outer_omega;  // outer wall angular velocity

    static BoundaryDrive from_config(const CylinderConfig& cfg);
};

/// Fourier coefficients m = 0..n_theta/2 - 1 of each field, mode-major.
struct FlowState2D {
    double t = 0.0;
    std::size_t nr = 0;
    std::size_t modes = 0;
    std::vector<std::complex<double>> u;  // [m * nr + j]
    std::vector<std::complex<double>> q;  // [m * nr + j]
    std::vector<std::complex<double>> v;  // [m * (nr + 1) + k], centres with ghosts
    std::vector<std::complex<double>> p;  // [m * (nr + 1) + k], ghost slots zero

    FlowState2D() = default;
    FlowState2D(std::size_t nr, std::size_t modes);
    bool finite() const;
};

/// Physical fields on the nodes, row-major [j * n_theta + k].
struct PhysicalFields {
    std::vector<double> r;
    std::size_t n_theta = 0;
    std::vector<double> u, v, P, omega;
};

PhysicalFields to_physical(const FlowState2D& s, const RadialGrid& grid, std::size_t n_theta);

/// Rigid rotation v = omega r, u = 0, p = omega^2 r^2, q = 2 omega r.
FlowState2D rigid_rotation_state(const RadialGrid& grid, std::size_t n_theta, double omega);

struct ForceSample {
    double t = 0.0;
    double Fx = 0.0, Fy = 0.0, T = 0.0;
    double F0x = 0.0, F0y = 0.0, T0 = 0.0;
};

struct ForceTorqueSeries {
    std::string method;  // surface | volume
    std::vector<ForceSample> samples;
};

struct SurfaceForces {
    double F0x = 0.0, F0y = 0.0, T0 = 0.0;
};

/// Stress integrals on the innermost node (the wall of the run).
SurfaceForces surface_force_torque(const FlowState2D& s, const RadialGrid& grid, double Re);

struct VolumeForces {
    double damping_x = 0.0, damping_y = 0.0, damping_t = 0.0;
    double acceleration = 0.0;  // torque only
    double Fx = 0.0, Fy = 0.0, T = 0.0;
};

/// Damping-term integrals plus the inner-wall stress and the rotational
/// acceleration correction 2 pi omega_dot (1 - R1^4) / 4.
VolumeForces volume_force_torque(const FlowState2D& s, const CylinderDiscretization& disc, double Re, double eta,
                                 double omega, double omega_dot);

/// Largest |d(ru)/dr + dv/dtheta| over the centres and largest |r u| over the nodes.
struct DivergenceCheck {
    double max_residual = 0.0;
    double max_ru = 0.0;
};
DivergenceCheck divergence_check(const FlowState2D& s, const RadialGrid& grid, std::size_t n_theta);

/// Largest |q - (d(rv)/dr - du/dtheta)| over the nodes.
double vorticity_consistency(const FlowState2D& s, const RadialGrid& grid, std::size_t n_theta);

class CylinderSolver {
public:
    CylinderSolver(const CylinderConfig& cfg, CylinderDiscretization disc, ExecPolicy exec = ExecPolicy::parallel,
                   BoundaryDrive drive = {});
    ~CylinderSolver();
    CylinderSolver(const CylinderSolver&) = delete;
    CylinderSolver& operator=(const CylinderSolver&) = delete;

    /// One IMEX step. Throws StepError on a non-finite state.
    void step();
    std::size_t steps_taken() const noexcept;
    double dt() const noexcept;

    const FlowState2D& state() const noexcept;
    /// Replaces the state and restarts the multistep history.
    void set_state(FlowState2D s);
    const CylinderDiscretization& discretization() const noexcept;
    const BoundaryDrive& drive() const noexcept;

    ForceSample forces() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct Snapshot {
    double t = 0.0;
    PhysicalFields fields;
};

struct RunOptions {
    ExecPolicy exec = ExecPolicy::parallel;
    std::vector<double> snapshot_times;  // the final state is always kept
    std::string checkpoint_path;         // written with the last valid state on failure
    std::function<void(double t)> progress;
};

struct CaseResult {
    CylinderConfig config;
    CylinderMode mode = CylinderMode::penalized;
    CylinderDiscretization disc;
    FlowState2D final_state;
    ForceTorqueSeries series;
    std::vector<Snapshot> snapshots;
    std::size_t steps = 0;
    double max_divergence_ratio = 0.0;
    double wall_seconds = 0.0;
};

CaseResult run_case(const CylinderConfig& cfg, CylinderMode mode, const RunOptions& opts = {});

struct FieldErrorReport {
    ErrorNorms u, v, P, omega;
    double r_lo = 0.0, r_hi = 0.0;
    double t = 0.0;
};

/// Penalized nodal fields are spline-interpolated in r onto the reference
/// nodes with r_lo < r < r_hi; E1 is the area-weighted mean. With
/// interpolate = false the nodes must coincide.
FieldErrorReport field_errors(const PhysicalFields& penalized, const PhysicalFields& reference, double r_lo,
                              double r_hi, bool interpolate = true);

enum class FieldVariable { u, v, P, omega };

/// Pointwise penalized - reference on the reference nodes in (r_lo, r_hi).
std::vector<double> error_field(const PhysicalFields& penalized, const PhysicalFields& reference, FieldVariable var,
                                double r_lo, double r_hi);

/// max |a / max|a| - b / max|b||
double shape_mismatch(std::span<const double> a, std::span<const double> b);

/// Series difference penalized - reference on common sample times. The maxima
/// skip the first sample: at t = 0 the interior has not yet lagged behind the
/// wall, so the damping integral cannot balance the acceleration correction.
struct ForceErrors {
    std::vector<double> t, dFx, dFy, dT;
    double max_abs_dFx = 0.0, max_abs_dFy = 0.0, max_abs_dT = 0.0;
};
ForceErrors force_errors(const ForceTorqueSeries& penalized, const ForceTorqueSeries& reference);

/// Shared grid for a set of runs: the union of every run's anchors and focus
/// radii, the smallest grading width, and points spread by grading mass.
void share_radial_grid(std::vector<CylinderConfig>& configs, std::size_t radial_points);

/// Flat snapshot: doubles nr, n_theta, 4, t, r[nr], then u, v, P, omega each row-major [nr][n_theta].
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace vpm
