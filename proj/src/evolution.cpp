#include "tof/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tof/numerics.hpp"

namespace tof {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double beta_of(double t, const ValidatedConfig& cfg) {
    return cfg.hbar * t / (2.0 * cfg.particle.mass * cfg.sigma0 * cfg.sigma0);
}

// Envelope part of one packet: prefactor times Gaussian, without the
// gravitational phase.  The principal branch of (2 pi s_t^2)^(-1/4) is
// continuous in t because Re s_t = sigma0 > 0 keeps arg(s_t^2) inside
// (-pi, pi).
std::complex<double> packet_envelope(double z, double t, double offset,
                                     const ValidatedConfig& cfg) {
    const ComplexWidth st = complex_width(t, cfg);
    const double u = z + offset + 0.5 * cfg.gravity.g * t * t;
    const std::complex<double> pref =
        std::exp(-0.25 * std::log(two_pi * st * st));
    return pref * std::exp(-u * u / (4.0 * st * cfg.sigma0));
}

// Gravitational phase factor exp[-i (m/hbar)(g t z + g^2 t^3 / 6)],
// shared by both packets.  Computed once per point so it cancels exactly
// (bitwise) in products like conj(Psi) * dPsi.
std::complex<double> gravity_phase(double z, double t,
                                   const ValidatedConfig& cfg) {
    const double g = cfg.gravity.g;
    if (g == 0.0) return {1.0, 0.0};
    const double phase = -(cfg.particle.mass / cfg.hbar) *
                         (g * t * z + g * g * t * t * t / 6.0);
    return std::polar(1.0, phase);
}

struct EnvelopePair {
    std::complex<double> f1, f2;    // envelopes of psi1, psi2
    std::complex<double> df1, df2;  // their d/dz
};

EnvelopePair envelopes(double z, double t, const ValidatedConfig& cfg) {
    const ComplexWidth st = complex_width(t, cfg);
    // d/dz exp(-u^2/(4 s_t sigma0)) = -u/(2 s_t sigma0) * exp(...)
    const std::complex<double> inv_2ss = 1.0 / (2.0 * st * cfg.sigma0);
    const double u1 = z + 0.5 * cfg.gravity.g * t * t;
    const double u2 = u1 + cfg.d;
    EnvelopePair e;
    e.f1 = packet_envelope(z, t, 0.0, cfg);
    e.f2 = packet_envelope(z, t, cfg.d, cfg);
    e.df1 = -u1 * inv_2ss * e.f1;
    e.df2 = -u2 * inv_2ss * e.f2;
    return e;
}

}  // namespace

ComplexWidth complex_width(double t, const ValidatedConfig& cfg) {
    return cfg.sigma0 * std::complex<double>(1.0, beta_of(t, cfg));
}

double sigma_sq(double t, const ValidatedConfig& cfg) {
    const double beta = beta_of(t, cfg);
    return cfg.sigma0 * cfg.sigma0 * (1.0 + beta * beta);
}

std::complex<double> packet_amplitude(double z, double t, double offset,
                                      const ValidatedConfig& cfg) {
    return packet_envelope(z, t, offset, cfg) * gravity_phase(z, t, cfg);
}

double packet_density(double z, double t, double offset,
                      const ValidatedConfig& cfg) {
    const double s2 = sigma_sq(t, cfg);
    const double u = z + offset + 0.5 * cfg.gravity.g * t * t;
    const double expo = -u * u / (2.0 * s2);
    // exp underflows to 0 below about -745; return 0 before multiplying
    // so no 0 * inf pattern can surface.
    if (expo < -745.0) return 0.0;
    return std::exp(expo) / std::sqrt(two_pi * s2);
}

std::complex<double> cat_amplitude(double z, double t,
                                   const ValidatedConfig& cfg) {
    const EnvelopePair e = envelopes(z, t, cfg);
    const std::complex<double> ph = gravity_phase(z, t, cfg);
    return cfg.norm * ph * (cfg.c1 * e.f1 + cfg.c2 * e.f2);
}

std::complex<double> cat_amplitude_dz(double z, double t,
                                      const ValidatedConfig& cfg) {
    const EnvelopePair e = envelopes(z, t, cfg);
    const std::complex<double> ph = gravity_phase(z, t, cfg);
    // d/dz of the gravitational phase contributes -i m g t / hbar times
    // the amplitude itself.
    const std::complex<double> dlog_ph(
        0.0, -cfg.particle.mass * cfg.gravity.g * t / cfg.hbar);
    return cfg.norm * ph *
           (cfg.c1 * (e.df1 + dlog_ph * e.f1) +
            cfg.c2 * (e.df2 + dlog_ph * e.f2));
}

double cat_norm(double t, const ValidatedConfig& cfg) {
    const double sigma = std::sqrt(sigma_sq(t, cfg));
    const double fall = -0.5 * cfg.gravity.g * t * t;
    const double c_hi = fall;           // center of psi1
    const double c_lo = fall - cfg.d;   // center of psi2
    const double pad = 12.0 * sigma;

    const auto density = [&](double z) {
        return std::norm(cat_amplitude(z, t, cfg));
    };

    // Merge the +-12 sigma windows around both centers when they touch;
    // otherwise integrate the two disjoint pieces (the gap contributes
    // at most an exp(-72) tail).
    const double tol = 1e-12;
    if (c_lo + pad >= c_hi - pad) {
        return adaptive_simpson(density, c_lo - pad, c_hi + pad, tol);
    }
    return adaptive_simpson(density, c_lo - pad, c_lo + pad, tol) +
           adaptive_simpson(density, c_hi - pad, c_hi + pad, tol);
}

double pde_residual(double z_min, double z_max, std::size_t n_points,
                    double t, double dt, const ValidatedConfig& cfg) {
    if (!(z_max > z_min) || n_points < 8) {
        throw Error(ErrorCode::InvalidGrid,
                    "pde_residual requires z_max > z_min and >= 8 points");
    }
    if (!(dt > 0.0) || !(t > dt)) {
        throw Error(ErrorCode::InvalidGrid,
                    "pde_residual requires dt > 0 and t > dt");
    }
    const double dz = (z_max - z_min) / double(n_points - 1);
    // The steepest spatial oscillation of the evolved state is the
    // gravitationally acquired wavenumber k = m g t / hbar; demand at
    // least 16 grid points per such wavelength before differencing.
    const double k_grav = cfg.particle.mass * cfg.gravity.g * t / cfg.hbar;
    if (k_grav * dz > two_pi / 16.0) {
        throw Error(ErrorCode::GridTooCoarse,
                    "z spacing resolves the local wavelength with fewer "
                    "than 16 points; refine the grid or reduce t");
    }

    const double hb = cfg.hbar;
    const double m = cfg.particle.mass;
    const double g = cfg.gravity.g;
    const std::complex<double> i_unit(0.0, 1.0);

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 1; i + 1 < n_points; ++i) {
        const double z = z_min + double(i) * dz;
        const std::complex<double> pc = cat_amplitude(z, t, cfg);
        const std::complex<double> pl = cat_amplitude(z - dz, t, cfg);
        const std::complex<double> pr = cat_amplitude(z + dz, t, cfg);
        const std::complex<double> pm = cat_amplitude(z, t - dt, cfg);
        const std::complex<double> pp = cat_amplitude(z, t + dt, cfg);

        const std::complex<double> lhs = i_unit * hb * (pp - pm) / (2.0 * dt);
        const std::complex<double> d2 = (pr - 2.0 * pc + pl) / (dz * dz);
        const std::complex<double> rhs =
            -hb * hb / (2.0 * m) * d2 + m * g * z * pc;

        num += std::norm(lhs - rhs);
        den += std::norm(rhs);
    }
    if (den == 0.0) {
        throw Error(ErrorCode::InvalidGrid,
                    "pde_residual window contains no probability mass");
    }
    return std::sqrt(num / den);
}

}  // namespace tof
