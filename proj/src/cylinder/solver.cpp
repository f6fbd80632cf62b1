#include <algorithm>
#include <cmath>

#include "fourier.hpp"
#include "vpm/cylinder/cylinder.hpp"
#include "vpm/error.hpp"
#include "vpm/numerics/banded.hpp"

namespace vpm {

using detail::cplx;

FlowState2D::FlowState2D(std::size_t nr_, std::size_t modes_)
    : nr(nr_), modes(modes_), u(nr_ * modes_), q(nr_ * modes_), v((nr_ + 1) * modes_), p((nr_ + 1) * modes_) {}

bool FlowState2D::finite() const {
    auto ok = [](const std::vector<cplx>& f) {
        return std::all_of(f.begin(), f.end(), [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    };
    return ok(u) && ok(q) && ok(v) && ok(p);
}

namespace {

constexpr cplx kI{0.0, 1.0};

// Unknowns per radial block j = 0..nr: b_{j-1/2}, a_j, d_j, c_{j+1/2} with
// u = a, v = i b, p = c, q = i d, which keeps every mode matrix real.
BandedMatrix assemble_mode(const RadialGrid& g, std::size_t m, double Re, double gamma_over_dt) {
    const std::size_t n = g.size();
    const auto& r = g.r;
    const auto& rc = g.rc;
    const double md = static_cast<double>(m);
    BandedMatrix A(4 * (n + 1), 4, 4);

    A.add(0, 0, 0.5);
    A.add(0, 4, 0.5);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t ra = 4 * j + 1;
        if (j == 0) {
            A.add(ra, ra, 1.0);
        } else if (j + 1 == n) {
            if (m == 0) {
                A.add(ra, 4 * (j - 1) + 3, 1.0);  // pressure gauge; continuity already fixes u here
            } else {
                A.add(ra, ra, 1.0);
            }
        } else {
            const double hd = rc[j + 1] - rc[j];
            A.add(ra, ra, gamma_over_dt);
            A.add(ra, 4 * j + 2, -md / (Re * r[j] * r[j]));
            A.add(ra, 4 * j + 3, 1.0 / hd);
            A.add(ra, 4 * j - 1, -1.0 / hd);
        }

        const std::size_t rd = 4 * j + 2;
        const double hd = rc[j + 1] - rc[j];
        A.add(rd, rd, 1.0);
        A.add(rd, 4 * j + 1, md);
        A.add(rd, 4 * j + 4, -rc[j + 1] / hd);
        A.add(rd, 4 * j, rc[j] / hd);

        const std::size_t rcn = 4 * j + 3;
        if (j + 1 < n) {
            const double h = r[j + 1] - r[j];
            A.add(rcn, 4 * j + 5, r[j + 1] / h);
            A.add(rcn, 4 * j + 1, -r[j] / h);
            A.add(rcn, 4 * j + 4, -md);
        } else {
            A.add(rcn, rcn, 1.0);
        }

        if (j >= 1) {
            const std::size_t rb = 4 * j;
            const double hc = r[j] - r[j - 1];
            const double x = rc[j];
            // (q/r)' with q divided by the mean of its neighbouring centres, so
            // rigid rotation is an exact discrete steady state on graded grids.
            const double rbar_j = 0.5 * (rc[j] + rc[j + 1]);
            const double rbar_l = 0.5 * (rc[j - 1] + rc[j]);
            A.add(rb, rb, gamma_over_dt);
            A.add(rb, 4 * j + 2, -1.0 / (Re * hc * rbar_j));
            A.add(rb, 4 * j - 2, 1.0 / (Re * hc * rbar_l));
            A.add(rb, 4 * j - 1, md / x);
        }
    }
    const std::size_t last = 4 * n;
    A.add(last, last, 0.5);
    A.add(last, last - 4, 0.5);
    A.add(last + 1, last + 1, 1.0);
    A.add(last + 2, last + 2, 1.0);
    A.add(last + 3, last + 3, 1.0);
    return A;
}

}  // namespace

struct CylinderSolver::Impl {
    CylinderConfig cfg;
    CylinderDiscretization disc;
    ExecPolicy exec;
    BoundaryDrive drive;

    std::size_t nr = 0, modes = 0;
    double dt = 0.0;
    std::size_t steps = 0;
    double t0 = 0.0;
    bool have_prev = false;

    FlowState2D s, prev;
    std::vector<cplx> eu, ev, eu_prev, ev_prev;
    std::vector<BandedLU> lu1, lu2;

    detail::AzimuthalFft fft;  // padded 3/2 for quadratic products
    std::vector<cplx> spec_a, spec_b, spec_c, spec_d;
    std::vector<double> phys_a, phys_b, phys_c, phys_d;

    Impl(const CylinderConfig& c, CylinderDiscretization d, ExecPolicy e, BoundaryDrive dr)
        : cfg(c), disc(std::move(d)), exec(e), drive(std::move(dr)), fft(3 * c.n_theta / 2) {}

    bool parallel() const { return exec == ExecPolicy::parallel; }

    void factor_all(std::vector<BandedLU>& cache, double gamma) {
        if (cache.empty()) cache.resize(modes);
        const long mm = static_cast<long>(modes);
#pragma omp parallel for schedule(dynamic, 1) if (parallel())
        for (long m = 0; m < mm; ++m) {
            const auto um = static_cast<std::size_t>(m);
            if (cache[um].size() == 0) cache[um] = BandedLU(assemble_mode(disc.grid, um, cfg.Re, gamma / dt));
        }
    }

    // Advection and penalty at the current state and time.
    void explicit_terms(std::vector<cplx>& out_u, std::vector<cplx>& out_v) {
        const auto& r = disc.grid.r;
        const auto& rc = disc.grid.rc;
        const std::size_t np = fft.size(), nh = fft.half();
        const std::size_t nc = nr - 1;  // real centres k = 1..nr-1
        const long lnr = static_cast<long>(nr), lnc = static_cast<long>(nc);

#pragma omp parallel if (parallel())
        {
            std::vector<cplx> row(modes);
#pragma omp for schedule(static)
            for (long lj = 0; lj < lnr; ++lj) {
                const auto j = static_cast<std::size_t>(lj);
                const double wl = (rc[j + 1] - r[j]) / (rc[j + 1] - rc[j]);
                for (std::size_t m = 0; m < modes; ++m) {
                    const std::size_t o = m * (nr + 1);
                    row[m] = wl * s.v[o + j] + (1.0 - wl) * s.v[o + j + 1];
                }
                fft.synthesize(row.data(), modes, 1, phys_a.data() + j * np, spec_a.data() + j * nh);
                fft.synthesize(s.q.data() + j, modes, nr, phys_b.data() + j * np, spec_b.data() + j * nh);
                double* pa = phys_a.data() + j * np;
                const double* pb = phys_b.data() + j * np;
                const double inv_r = 1.0 / r[j];
                for (std::size_t k = 0; k < np; ++k) pa[k] *= pb[k] * inv_r;
                fft.analyze(pa, modes, nr, out_u.data() + j, spec_a.data() + j * nh);
            }
#pragma omp for schedule(static)
            for (long lk = 0; lk < lnc; ++lk) {
                const auto k = static_cast<std::size_t>(lk) + 1;
                for (std::size_t m = 0; m < modes; ++m) row[m] = 0.5 * (s.u[m * nr + k - 1] + s.u[m * nr + k]);
                fft.synthesize(row.data(), modes, 1, phys_c.data() + (k - 1) * np, spec_c.data() + (k - 1) * nh);
                for (std::size_t m = 0; m < modes; ++m) row[m] = 0.5 * (s.q[m * nr + k - 1] + s.q[m * nr + k]);
                fft.synthesize(row.data(), modes, 1, phys_d.data() + (k - 1) * np, spec_d.data() + (k - 1) * nh);
                double* pc = phys_c.data() + (k - 1) * np;
                const double* pd = phys_d.data() + (k - 1) * np;
                const double inv_r = -1.0 / rc[k];
                for (std::size_t i = 0; i < np; ++i) pc[i] *= pd[i] * inv_r;
                fft.analyze(pc, modes, nr + 1, out_v.data() + k, spec_c.data() + (k - 1) * nh);
            }
        }
        for (std::size_t m = 0; m < modes; ++m) {
            out_v[m * (nr + 1)] = 0.0;
            out_v[m * (nr + 1) + nr] = 0.0;
        }

        if (!disc.penalized) return;
        const double inv_eta = 1.0 / cfg.eta;
        const double omega = drive.omega(s.t);
        for (std::size_t m = 0; m < modes; ++m) {
            for (std::size_t j = 0; j < nr; ++j) out_u[m * nr + j] -= disc.gamma_node[j] * inv_eta * s.u[m * nr + j];
            for (std::size_t k = 1; k < nr; ++k) {
                cplx target = m == 0 ? cplx(rc[k] * omega, 0.0) : cplx(0.0, 0.0);
                out_v[m * (nr + 1) + k] -= disc.gamma_center[k] * inv_eta * (s.v[m * (nr + 1) + k] - target);
            }
        }
    }

    void step() {
        const bool first = !have_prev || cfg.scheme == TimeScheme::imex1;
        const double gamma = first ? 1.0 : 1.5;
        auto& cache = first ? lu1 : lu2;
        factor_all(cache, gamma);

        explicit_terms(eu, ev);
        const double t_new = t0 + static_cast<double>(steps + 1) * dt;
        const double g = drive.inflow(t_new);
        const double om_in = drive.omega(t_new);
        const double om_out = drive.outer_omega(t_new);
        const double r_in = disc.grid.r.front();
        const double r_out = disc.grid.r.back();

        FlowState2D next(nr, modes);
        next.t = t_new;
        const std::size_t sz = 4 * (nr + 1);
        const long mm = static_cast<long>(modes);
        const double inv_dt = 1.0 / dt;

#pragma omp parallel if (parallel())
        {
            std::vector<cplx> b(sz);
#pragma omp for schedule(dynamic, 1)
            for (long lm = 0; lm < mm; ++lm) {
                const auto m = static_cast<std::size_t>(lm);
                std::fill(b.begin(), b.end(), cplx(0.0, 0.0));
                const std::size_t ou = m * nr, ov = m * (nr + 1);
                for (std::size_t j = 1; j + 1 < nr; ++j) {
                    cplx hist, ex;
                    if (first) {
                        hist = s.u[ou + j] * inv_dt;
                        ex = eu[ou + j];
                    } else {
                        hist = (2.0 * s.u[ou + j] - 0.5 * prev.u[ou + j]) * inv_dt;
                        ex = 2.0 * eu[ou + j] - eu_prev[ou + j];
                    }
                    b[4 * j + 1] = hist + ex;
                }
                for (std::size_t k = 1; k < nr; ++k) {
                    cplx hist, ex;
                    if (first) {
                        hist = s.v[ov + k] * inv_dt;
                        ex = ev[ov + k];
                    } else {
                        hist = (2.0 * s.v[ov + k] - 0.5 * prev.v[ov + k]) * inv_dt;
                        ex = 2.0 * ev[ov + k] - ev_prev[ov + k];
                    }
                    b[4 * k] = -kI * (hist + ex);
                }
                // Boundary rows: u and v at both walls.
                if (m == 0) {
                    b[0] = -kI * cplx(r_in * om_in, 0.0);
                    b[4 * nr] = -kI * cplx(r_out * om_out, 0.0);
                } else if (m == 1) {
                    b[4 * (nr - 1) + 1] = 0.5 * g;
                    b[4 * nr] = 0.5 * g;
                }
                cache[m].solve_in_place(std::span<cplx>(b));
                for (std::size_t j = 0; j < nr; ++j) {
                    next.u[ou + j] = b[4 * j + 1];
                    next.q[ou + j] = kI * b[4 * j + 2];
                }
                for (std::size_t k = 0; k <= nr; ++k) next.v[ov + k] = kI * b[4 * k];
                for (std::size_t k = 1; k < nr; ++k) next.p[ov + k] = b[4 * (k - 1) + 3];
            }
        }
        for (std::size_t j = 0; j < nr; ++j) {
            next.u[j].imag(0.0);
            next.q[j].imag(0.0);
        }
        for (std::size_t k = 0; k <= nr; ++k) {
            next.v[k].imag(0.0);
            next.p[k].imag(0.0);
        }
        if (!next.finite()) throw StepError("cylinder step produced a non-finite state", t_new);

        prev = std::move(s);
        s = std::move(next);
        std::swap(eu_prev, eu);
        std::swap(ev_prev, ev);
        have_prev = true;
        ++steps;
    }
};

CylinderSolver::CylinderSolver(const CylinderConfig& cfg, CylinderDiscretization disc, ExecPolicy exec,
                               BoundaryDrive drive) {
    const BoundaryDrive defaults = BoundaryDrive::from_config(cfg);
    if (!drive.inflow) drive.inflow = defaults.inflow;
    if (!drive.omega) drive.omega = defaults.omega;
    if (!drive.omega_dot) drive.omega_dot = defaults.omega_dot;
    if (!drive.outer_omega) drive.outer_omega = defaults.outer_omega;
    if (disc.grid.size() < 4) throw ConfigError("cylinder grid needs at least four radial nodes");
    if (disc.n_theta != cfg.n_theta) throw ConfigError("discretization and config disagree on n_theta");
    impl_ = std::make_unique<Impl>(cfg, std::move(disc), exec, std::move(drive));
    auto& I = *impl_;
    I.nr = I.disc.grid.size();
    I.modes = cfg.n_theta / 2;
    I.dt = cfg.time_step();
    if (!(I.dt > 0.0)) throw ConfigError("dt must be positive");
    I.s = FlowState2D(I.nr, I.modes);
    I.eu.assign(I.nr * I.modes, 0.0);
    I.eu_prev = I.eu;
    I.ev.assign((I.nr + 1) * I.modes, 0.0);
    I.ev_prev = I.ev;
    const std::size_t np = I.fft.size(), nh = I.fft.half();
    I.phys_a.resize(I.nr * np);
    I.phys_b.resize(I.nr * np);
    I.phys_c.resize(I.nr * np);
    I.phys_d.resize(I.nr * np);
    I.spec_a.resize(I.nr * nh);
    I.spec_b.resize(I.nr * nh);
    I.spec_c.resize(I.nr * nh);
    I.spec_d.resize(I.nr * nh);
}

CylinderSolver::~CylinderSolver() = default;

void CylinderSolver::step() { impl_->step(); }

std::size_t CylinderSolver::steps_taken() const noexcept { return impl_->steps; }

double CylinderSolver::dt() const noexcept { return impl_->dt; }

const FlowState2D& CylinderSolver::state() const noexcept { return impl_->s; }

void CylinderSolver::set_state(FlowState2D s) {
    if (s.nr != impl_->nr || s.modes != impl_->modes) throw ConfigError("set_state: shape mismatch");
    impl_->t0 = s.t;
    impl_->steps = 0;
    impl_->s = std::move(s);
    impl_->have_prev = false;
}

const CylinderDiscretization& CylinderSolver::discretization() const noexcept { return impl_->disc; }

const BoundaryDrive& CylinderSolver::drive() const noexcept { return impl_->drive; }

ForceSample CylinderSolver::forces() const {
    const auto& I = *impl_;
    ForceSample f;
    f.t = I.s.t;
    const SurfaceForces s0 = surface_force_torque(I.s, I.disc.grid, I.cfg.Re);
    f.F0x = s0.F0x;
    f.F0y = s0.F0y;
    f.T0 = s0.T0;
    if (I.disc.penalized) {
        const VolumeForces v =
            volume_force_torque(I.s, I.disc, I.cfg.Re, I.cfg.eta, I.drive.omega(I.s.t), I.drive.omega_dot(I.s.t));
        f.Fx = v.Fx;
        f.Fy = v.Fy;
        f.T = v.T;
    } else {
        f.Fx = f.F0x;
        f.Fy = f.F0y;
        f.T = f.T0;
    }
    return f;
}

}  // namespace vpm
