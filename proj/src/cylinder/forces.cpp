#include <algorithm>
#include <cmath>
#include <numbers>

#include "fourier.hpp"
#include "vpm/cylinder/cylinder.hpp"
#include "vpm/error.hpp"

namespace vpm {

using detail::cplx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Coefficient m of a real field from its nonnegative modes.
cplx coef(const std::vector<cplx>& c, long m) {
    const auto am = static_cast<std::size_t>(std::abs(m));
    if (am >= c.size()) return 0.0;
    return m >= 0 ? c[am] : std::conj(c[am]);
}

// Mode 1 of f^2 by direct convolution.
cplx square_mode1(const std::vector<cplx>& c) {
    const long M = static_cast<long>(c.size());
    cplx s = 0.0;
    for (long m = 2 - M; m <= M - 1; ++m) s += coef(c, m) * coef(c, 1 - m);
    return s;
}

// Pressure per mode at node j: interpolated between centres, extrapolated at the ends.
cplx pressure_at_node(const FlowState2D& s, const RadialGrid& g, std::size_t m, std::size_t j) {
    const std::size_t nr = g.size();
    const std::size_t o = m * (nr + 1);
    std::size_t k0, k1;
    if (j == 0) {
        k0 = 1;
        k1 = 2;
    } else if (j + 1 == nr) {
        k0 = nr - 2;
        k1 = nr - 1;
    } else {
        k0 = j;
        k1 = j + 1;
    }
    const double w = (g.r[j] - g.rc[k0]) / (g.rc[k1] - g.rc[k0]);
    return (1.0 - w) * s.p[o + k0] + w * s.p[o + k1];
}

cplx v_at_node(const FlowState2D& s, const RadialGrid& g, std::size_t m, std::size_t j) {
    const std::size_t o = m * (g.size() + 1);
    const double wl = (g.rc[j + 1] - g.r[j]) / (g.rc[j + 1] - g.rc[j]);
    return wl * s.v[o + j] + (1.0 - wl) * s.v[o + j + 1];
}

void check_shape(const FlowState2D& s, const RadialGrid& g) {
    if (s.nr != g.size() || g.size() < 3) throw ConfigError("state and grid disagree on radial size");
    if (s.u.size() != s.nr * s.modes || s.v.size() != (s.nr + 1) * s.modes) throw ConfigError("malformed state");
}

}  // namespace

PhysicalFields to_physical(const FlowState2D& s, const RadialGrid& g, std::size_t n_theta) {
    check_shape(s, g);
    const std::size_t nr = g.size(), M = s.modes;
    std::vector<cplx> vn(nr * M), pn(nr * M), wn(nr * M);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t j = 0; j < nr; ++j) {
            vn[m * nr + j] = v_at_node(s, g, m, j);
            pn[m * nr + j] = pressure_at_node(s, g, m, j);
            wn[m * nr + j] = s.q[m * nr + j] / g.r[j];
        }
    }
    const detail::AzimuthalFft fft(n_theta);
    PhysicalFields f;
    f.r = g.r;
    f.n_theta = n_theta;
    f.u = detail::synthesize_rows(fft, s.u, nr, M);
    f.v = detail::synthesize_rows(fft, vn, nr, M);
    f.omega = detail::synthesize_rows(fft, wn, nr, M);
    f.P = detail::synthesize_rows(fft, pn, nr, M);
    for (std::size_t i = 0; i < f.P.size(); ++i) f.P[i] -= 0.5 * (f.u[i] * f.u[i] + f.v[i] * f.v[i]);
    return f;
}

FlowState2D rigid_rotation_state(const RadialGrid& g, std::size_t n_theta, double omega) {
    const std::size_t nr = g.size();
    FlowState2D s(nr, n_theta / 2);
    for (std::size_t j = 0; j < nr; ++j) s.q[j] = 2.0 * omega * g.r[j];
    for (std::size_t k = 0; k <= nr; ++k) s.v[k] = omega * g.rc[k];
    for (std::size_t k = 1; k < nr; ++k) s.p[k] = omega * omega * g.rc[k] * g.rc[k];
    return s;
}

SurfaceForces surface_force_torque(const FlowState2D& s, const RadialGrid& g, double Re) {
    check_shape(s, g);
    const std::size_t nr = g.size(), M = s.modes;
    const double r = g.r[0];
    std::vector<cplx> uw(M), vw(M), qw(M), pw(M);
    for (std::size_t m = 0; m < M; ++m) {
        uw[m] = s.u[m * nr];
        qw[m] = s.q[m * nr];
        vw[m] = 0.5 * (s.v[m * (nr + 1)] + s.v[m * (nr + 1) + 1]);
        pw[m] = pressure_at_node(s, g, m, 0);
    }
    SurfaceForces f;
    if (M > 1) {
        const cplx P1 = pw[1] - 0.5 * (square_mode1(uw) + square_mode1(vw));
        const cplx dudr1 = (-kI * vw[1] - uw[1]) / r;
        const cplx S1 = qw[1] - 2.0 * vw[1] + 2.0 * kI * uw[1];
        f.F0x = kTwoPi * (-r * P1.real() + 2.0 * r / Re * dudr1.real() + S1.imag() / Re);
        f.F0y = kTwoPi * (r * P1.imag() - 2.0 * r / Re * dudr1.imag() + S1.real() / Re);
    }
    const cplx S0 = qw[0] - 2.0 * vw[0];
    f.T0 = kTwoPi * r * S0.real() / Re;
    return f;
}

VolumeForces volume_force_torque(const FlowState2D& s, const CylinderDiscretization& d, double Re, double eta,
                                 double omega, double omega_dot) {
    const auto& g = d.grid;
    check_shape(s, g);
    if (!d.penalized) throw ConfigError("volume forces need a penalized state");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    const std::size_t nr = g.size();
    VolumeForces f;
    double sx = 0.0, sy = 0.0, st = 0.0;
    if (s.modes > 1) {
        for (std::size_t j = 1; j + 1 < nr; ++j) {
            const double w = (g.rc[j + 1] - g.rc[j]) * g.r[j] * d.gamma_node[j];
            const cplx u1 = s.u[nr + j];
            sx += w * u1.real();
            sy -= w * u1.imag();
        }
        for (std::size_t k = 1; k < nr; ++k) {
            const double w = (g.r[k] - g.r[k - 1]) * g.rc[k] * d.gamma_center[k];
            const cplx v1 = s.v[(nr + 1) + k];
            sx += w * v1.imag();
            sy += w * v1.real();
        }
    }
    for (std::size_t k = 1; k < nr; ++k) {
        const double w = (g.r[k] - g.r[k - 1]) * g.rc[k] * d.gamma_center[k];
        st += w * (s.v[k].real() - g.rc[k] * omega) * g.rc[k];
    }
    f.damping_x = kTwoPi * sx / eta;
    f.damping_y = kTwoPi * sy / eta;
    f.damping_t = kTwoPi * st / eta;
    const double R1 = g.r[0];
    f.acceleration = kTwoPi * omega_dot * (1.0 - R1 * R1 * R1 * R1) / 4.0;
    const SurfaceForces s0 = surface_force_torque(s, g, Re);
    f.Fx = f.damping_x + s0.F0x;
    f.Fy = f.damping_y + s0.F0y;
    f.T = f.damping_t + f.acceleration + s0.T0;
    return f;
}

DivergenceCheck divergence_check(const FlowState2D& s, const RadialGrid& g, std::size_t n_theta) {
    check_shape(s, g);
    const std::size_t nr = g.size(), M = s.modes;
    std::vector<cplx> res((nr - 1) * M), ru(nr * M);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t k = 1; k < nr; ++k) {
            const double h = g.r[k] - g.r[k - 1];
            res[m * (nr - 1) + k - 1] = (g.r[k] * s.u[m * nr + k] - g.r[k - 1] * s.u[m * nr + k - 1]) / h +
                                        kI * static_cast<double>(m) * s.v[m * (nr + 1) + k];
        }
        for (std::size_t j = 0; j < nr; ++j) ru[m * nr + j] = g.r[j] * s.u[m * nr + j];
    }
    const detail::AzimuthalFft fft(n_theta);
    const auto pr = detail::synthesize_rows(fft, res, nr - 1, M);
    const auto pu = detail::synthesize_rows(fft, ru, nr, M);
    DivergenceCheck c;
    for (double x : pr) c.max_residual = std::max(c.max_residual, std::abs(x));
    for (double x : pu) c.max_ru = std::max(c.max_ru, std::abs(x));
    return c;
}

double vorticity_consistency(const FlowState2D& s, const RadialGrid& g, std::size_t n_theta) {
    check_shape(s, g);
    const std::size_t nr = g.size(), M = s.modes;
    std::vector<cplx> res(nr * M);
    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t o = m * (nr + 1);
        for (std::size_t j = 0; j < nr; ++j) {
            const double hd = g.rc[j + 1] - g.rc[j];
            const cplx drv = (g.rc[j + 1] * s.v[o + j + 1] - g.rc[j] * s.v[o + j]) / hd;
            res[m * nr + j] = s.q[m * nr + j] - (drv - kI * static_cast<double>(m) * s.u[m * nr + j]);
        }
    }
    const detail::AzimuthalFft fft(n_theta);
    double worst = 0.0;
    for (double x : detail::synthesize_rows(fft, res, nr, M)) worst = std::max(worst, std::abs(x));
    return worst;
}

}  // namespace vpm
