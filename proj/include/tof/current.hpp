#ifndef TOF_CURRENT_HPP
#define TOF_CURRENT_HPP

#include <cstddef>
#include <vector>

#include "tof/model.hpp"

// Probability current of the evolved state and the quantum
// time-of-flight distribution Pi(t) = |J(H, t)|.
//
// With u1 = z + g t^2/2, u2 = u1 + d, sigma^2 = sigma^2(t) and
// K = hbar^2 t / (4 m^2 sigma0^2 sigma^2), the current splits into
//
//   j1    = (K u1 - g t) |psi1|^2          single-packet flux of psi1
//   j2    = (K u2 - g t) |psi2|^2          single-packet flux of psi2
//   cross = 2 P12 (eta cos dt - lambda sin dt)   interference flux
//
//   J = N^2 ( |c1|^2 j1 + |c2|^2 j2 + |c1||c2| cross )
//
// where P12 = |psi1||psi2| is the overlap envelope,
// lambda = hbar d / (4 m sigma^2), eta = K (u1 + u2)/2 - g t, and the
// oscillatory phase is
//
//   delta = hbar t d (d + g t^2 + 2 z) / (8 m sigma0^2 sigma^2).
//
// The cross channel uses dt = delta + arg(c2) - arg(c1); for real
// positive amplitudes dt = delta.

namespace tof {

struct CurrentBreakdown {
    double j1;      // 1/s, single-packet flux of psi1
    double j2;      // 1/s, single-packet flux of psi2
    double cross;   // 1/s, interference flux before amplitude weighting
    double total;   // 1/s, weighted sum; Pi(t) = |total| at the detector
    double p12;     // 1/m, overlap envelope |psi1||psi2|
    double delta;   // rad, geometric phase difference
    double lambda;  // m/s, sin-quadrature velocity coefficient
    double eta;     // m/s, cos-quadrature velocity coefficient
};

// delta written over the combination sigma0^4 + hbar^2 t^2 / (4 m^2).
double phase_delta(double z, double t, const ValidatedConfig& cfg);

// Same phase written over sigma0^2 sigma^2(t); the two forms are
// algebraically identical and cross-check each other numerically.
double phase_delta_spread_form(double z, double t, const ValidatedConfig& cfg);

// Overlap envelope P12 = |psi1(z,t)| |psi2(z,t)|.
double overlap_p12(double z, double t, const ValidatedConfig& cfg);

// All channels at one spacetime point.
CurrentBreakdown current_breakdown(double z, double t,
                                   const ValidatedConfig& cfg);

// J from the defining expression (i hbar / 2m)(Psi dPsi*/dz - c.c.)
// evaluated with the closed-form amplitude and its analytic derivative;
// independent of the channel decomposition above.
double direct_current(double z, double t, const ValidatedConfig& cfg);

// Time-of-flight signal sampled on a grid.
struct TofSignal {
    TimeGrid grid;
    std::vector<double> pi;                  // |J(detector, t_i)|, 1/s
    std::vector<CurrentBreakdown> channels;  // filled when requested
    bool has_channels = false;
    double detector = 0.0;                   // m
    ValidatedConfig config;
};

// Default sampling window.  For g > 0: centered on the ballistic
// arrival times of the two packets, padded by 8 arrival-time widths
// sigma(t1)/(g t1), sampled with at least 40 points per interference
// period 2 pi hbar / (m d g).  For g = 0 the pulse peaks near
// t* = |H| / (sqrt(2) v_s) with v_s = hbar / (2 m sigma0); the window is
// [0, 5 t*] sampled against the near-field fringe rate.  Sample counts
// are clamped to [2048, 2^20].
TimeGrid auto_time_grid(const ValidatedConfig& cfg);

// Evaluates Pi(t) = |J(H, t)| on the grid; with_channels additionally
// records the per-sample CurrentBreakdown.
TofSignal quantum_tof(const TimeGrid& grid, const ValidatedConfig& cfg,
                      bool with_channels = false);

}  // namespace tof

#endif  // TOF_CURRENT_HPP
