#ifndef TOF_EVOLUTION_HPP
#define TOF_EVOLUTION_HPP

#include <complex>
#include <cstddef>

#include "tof/model.hpp"

// Closed-form time evolution of the two-packet state under V = m g z.
//
// Each component packet (offset 0 for psi1, offset d for psi2) evolves as
//
//   psi(z,t) = (2 pi s_t^2)^(-1/4)
//              * exp[ -(z + offset + g t^2/2)^2 / (4 s_t sigma0) ]
//              * exp[ -i (m/hbar) (g t z + g^2 t^3 / 6) ]
//
// with the complex width s_t = sigma0 (1 + i beta),
// beta = hbar t / (2 m sigma0^2).  The packet centers fall along the
// classical trajectory -g t^2/2 while the spread grows as
// sigma^2(t) = |s_t|^2 = sigma0^2 (1 + beta^2).

namespace tof {

using ComplexWidth = std::complex<double>;

// s_t = sigma0 (1 + i beta); Re s_t = sigma0 for all t.
ComplexWidth complex_width(double t, const ValidatedConfig& cfg);

// sigma^2(t) = sigma0^2 (1 + beta^2), the evolving packet variance.
double sigma_sq(double t, const ValidatedConfig& cfg);

// Single evolved packet including the gravitational phase factor.
// offset = 0 gives psi1, offset = d gives psi2.
std::complex<double> packet_amplitude(double z, double t, double offset,
                                      const ValidatedConfig& cfg);

// |packet_amplitude|^2 through the real modulus identity
//   (2 pi sigma^2)^(-1/2) exp[-(z + offset + g t^2/2)^2 / (2 sigma^2)],
// with an underflow guard for far tails.
double packet_density(double z, double t, double offset,
                      const ValidatedConfig& cfg);

// Full state N (c1 psi1 + c2 psi2).
std::complex<double> cat_amplitude(double z, double t,
                                   const ValidatedConfig& cfg);

// Analytic d/dz of cat_amplitude (no finite differencing).  Built from
// the same envelope and phase factors as cat_amplitude, so products such
// as conj(Psi) * dPsi cancel the shared gravitational phase exactly.
std::complex<double> cat_amplitude_dz(double z, double t,
                                      const ValidatedConfig& cfg);

// Integral of |Psi|^2 over the real line by adaptive quadrature across
// +-12 sigma windows around both packet centers (merged when they
// overlap).  Equals 1 for all t up to quadrature tolerance.
double cat_norm(double t, const ValidatedConfig& cfg);

// Relative residual of the evolution equation
//   i hbar dPsi/dt = -(hbar^2 / 2m) d2Psi/dz2 + m g z Psi
// evaluated on the closed form with central differences in z (uniform
// grid of n_points spanning [z_min, z_max]) and in t (spacing dt):
//   || i hbar D_t Psi - H_dz Psi ||_2 / || H_dz Psi ||_2.
// Requires t > dt so the backward stencil stays at positive times.
// Throws Error{GridTooCoarse} when the grid resolves the local
// gravitational de Broglie wavelength 2 pi hbar / (m g t) with fewer
// than 16 points, and Error{InvalidGrid} for malformed grids.
double pde_residual(double z_min, double z_max, std::size_t n_points,
                    double t, double dt, const ValidatedConfig& cfg);

}  // namespace tof

#endif  // TOF_EVOLUTION_HPP
