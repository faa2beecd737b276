#include "tof/current.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tof/evolution.hpp"
#include "tof/numerics.hpp"

namespace tof {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

double phase_delta(double z, double t, const ValidatedConfig& cfg) {
    const double m = cfg.particle.mass;
    const double hb = cfg.hbar;
    const double d = cfg.d;
    const double g = cfg.gravity.g;
    const double s0sq = cfg.sigma0 * cfg.sigma0;
    // sigma0^4 + hbar^2 t^2 / (4 m^2) = sigma0^2 sigma^2(t)
    const double denom = 8.0 * m * (s0sq * s0sq + hb * hb * t * t / (4.0 * m * m));
    return hb * t * d * (d + g * t * t + 2.0 * z) / denom;
}

double phase_delta_spread_form(double z, double t, const ValidatedConfig& cfg) {
    const double m = cfg.particle.mass;
    const double hb = cfg.hbar;
    const double d = cfg.d;
    const double g = cfg.gravity.g;
    const double s0sq = cfg.sigma0 * cfg.sigma0;
    return hb * t * d * (d + g * t * t + 2.0 * z) /
           (8.0 * m * s0sq * sigma_sq(t, cfg));
}

double overlap_p12(double z, double t, const ValidatedConfig& cfg) {
    const double s2 = sigma_sq(t, cfg);
    const double u1 = z + 0.5 * cfg.gravity.g * t * t;
    const double u2 = u1 + cfg.d;
    const double expo = -(u1 * u1 + u2 * u2) / (4.0 * s2);
    if (expo < -745.0) return 0.0;
    return std::exp(expo) / std::sqrt(two_pi * s2);
}

CurrentBreakdown current_breakdown(double z, double t,
                                   const ValidatedConfig& cfg) {
    const double m = cfg.particle.mass;
    const double hb = cfg.hbar;
    const double g = cfg.gravity.g;
    const double s0sq = cfg.sigma0 * cfg.sigma0;
    const double s2 = sigma_sq(t, cfg);

    // Common velocity scale of the spreading envelope:
    // K u is the local group velocity acquired by dispersion.
    const double K = hb * hb * t / (4.0 * m * m * s0sq * s2);
    const double u1 = z + 0.5 * g * t * t;
    const double u2 = u1 + cfg.d;

    CurrentBreakdown b;
    b.j1 = (K * u1 - g * t) * packet_density(z, t, 0.0, cfg);
    b.j2 = (K * u2 - g * t) * packet_density(z, t, cfg.d, cfg);
    b.p12 = overlap_p12(z, t, cfg);
    b.delta = phase_delta(z, t, cfg);
    b.lambda = hb * cfg.d / (4.0 * m * s2);
    b.eta = 0.5 * K * (u1 + u2) - g * t;

    const double a1 = std::abs(cfg.c1);
    const double a2 = std::abs(cfg.c2);
    // cross is stored for the geometric phase delta; complex amplitudes
    // shift the working phase by their relative argument.
    const double arg_shift =
        (a1 > 0.0 && a2 > 0.0) ? std::arg(cfg.c2) - std::arg(cfg.c1) : 0.0;
    const double dt_phase = b.delta + arg_shift;
    b.cross = 2.0 * b.p12 * (b.eta * std::cos(dt_phase) -
                             b.lambda * std::sin(dt_phase));
    b.total = cfg.norm * cfg.norm *
              (a1 * a1 * b.j1 + a2 * a2 * b.j2 + a1 * a2 * b.cross);
    return b;
}

double direct_current(double z, double t, const ValidatedConfig& cfg) {
    const std::complex<double> psi = cat_amplitude(z, t, cfg);
    const std::complex<double> dpsi = cat_amplitude_dz(z, t, cfg);
    // J = (i hbar / 2m)(Psi dPsi*/dz - Psi* dPsi/dz)
    //   = (hbar / m) Im( conj(Psi) dPsi/dz )
    return cfg.hbar / cfg.particle.mass *
           std::imag(std::conj(psi) * dpsi);
}

TimeGrid auto_time_grid(const ValidatedConfig& cfg) {
    const double abs_h = std::abs(cfg.detector_H);
    if (abs_h <= 0.0) {
        throw Error(ErrorCode::InvalidTimeGrid,
                    "detector at the initial packet center has no arrival "
                    "window; pass an explicit time grid");
    }
    const double m = cfg.particle.mass;
    const double g = cfg.gravity.g;
    constexpr std::size_t n_min = 2048;
    constexpr std::size_t n_max = std::size_t(1) << 20;

    if (g > 0.0) {
        // Ballistic arrivals of the two packet centers.
        const double t1 = std::sqrt(2.0 * abs_h / g);
        const double t2 = std::sqrt(2.0 * std::max(abs_h - cfg.d, 0.0) / g);
        // Arrival-time width: position spread divided by impact speed.
        const double sigma_t = std::sqrt(sigma_sq(t1, cfg)) / (g * t1);
        const double lo = std::max(0.0, std::min(t1, t2) - 8.0 * sigma_t);
        const double hi = t1 + 8.0 * sigma_t;

        std::size_t n = n_min;
        if (cfg.d > 0.0) {
            // Interference period at the detector: delta advances at the
            // asymptotic rate m d g / hbar.
            const double period = two_pi * cfg.hbar / (m * cfg.d * g);
            const double want = std::ceil(40.0 * (hi - lo) / period);
            if (want > double(n_max)) {
                n = n_max;
            } else if (want > double(n_min)) {
                n = std::size_t(want);
            }
        }
        return make_time_grid(lo, hi, n);
    }

    // Free expansion: packets reach the detector by dispersion alone.
    // The speed scale is v_s = hbar / (2 m sigma0); the pulse peaks near
    // |H| / (sqrt(2) v_s).
    const double v_s = cfg.hbar / (2.0 * m * cfg.sigma0);
    const double t_star = abs_h / (std::numbers::sqrt2 * v_s);
    const double lo = 0.0;
    const double hi = 5.0 * t_star;

    std::size_t n = n_min;
    if (cfg.d > 0.0) {
        // Near-field fringe rate bound, evaluated at the early edge of
        // the pulse where delta changes fastest.
        const double t_early = 0.3 * t_star;
        const double rate = m * cfg.d * std::abs(cfg.d + 2.0 * cfg.detector_H) /
                            (2.0 * cfg.hbar * t_early * t_early);
        const double want = std::ceil(40.0 * (hi - lo) * rate / two_pi);
        if (want > double(n_max)) {
            n = n_max;
        } else if (want > double(n_min)) {
            n = std::size_t(want);
        }
    }
    return make_time_grid(lo, hi, n);
}

TofSignal quantum_tof(const TimeGrid& grid, const ValidatedConfig& cfg,
                      bool with_channels) {
    TofSignal sig;
    sig.grid = grid;
    sig.detector = cfg.detector_H;
    sig.config = cfg;
    sig.has_channels = with_channels;
    sig.pi.resize(grid.n_samples);
    if (with_channels) sig.channels.resize(grid.n_samples);

    parallel_for(grid.n_samples, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double t = grid.at(i);
            const CurrentBreakdown b =
                current_breakdown(cfg.detector_H, t, cfg);
            sig.pi[i] = std::abs(b.total);
            if (with_channels) sig.channels[i] = b;
        }
    });
    return sig;
}

}  // namespace tof
