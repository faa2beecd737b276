#ifndef TOF_MODEL_HPP
#define TOF_MODEL_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

// Physical constants, particle data, and validated experiment
// configurations shared by every other component.
//
// Unit policy: everything is SI internally (m, s, kg, J, K).
// Human-friendly units (um, cm, amu, uK) exist only at the CLI boundary.
// Sign convention: z increases upward, the potential is V = m g z with
// g >= 0, so falling packets drift toward negative z and detectors sit
// at negative coordinates.

namespace tof {

namespace constants {

// CODATA 2018 reduced Planck constant, J s.
inline constexpr double hbar = 1.054571817e-34;

// Boltzmann constant, J/K (exact by the 2019 SI redefinition).
inline constexpr double boltzmann = 1.380649e-23;

// CODATA 2018 unified atomic mass unit, kg.
inline constexpr double atomic_mass_unit = 1.66053906660e-27;

// Relative atomic mass of 23Na, amu (IUPAC CIAAW).
inline constexpr double sodium_mass_amu = 22.98976928;

// data/constants.json documents the provenance of these values; a unit
// test keeps that file and this header in sync.

}  // namespace constants

enum class ErrorCode {
    NonPositiveWidth,
    NonPositiveMass,
    NegativeSeparation,
    ZeroAmplitudes,
    NonPositiveTime,
    InvalidTimeGrid,
    InvalidGrid,
    GridTooCoarse,
    WindowTooNarrow,
    NormDrift,
    BoundaryLeak,
    UsageError,
};

const char* error_name(ErrorCode code);

// Domain error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct Particle {
    double mass = 0.0;  // kg, strictly positive
    std::string label;
};

// The reference falling species used by the default parameter sets.
Particle sodium();

struct Gravity {
    // Acceleration magnitude, m/s^2; g = 0 is the legal free-expansion
    // case.  The acceleration vector is -g along z.
    double g = 9.8;
};

// Full experiment parameterization for the superposition state
//   Psi(z,0) = N [c1 psi1(z) + c2 psi2(z)]
// of two Gaussian packets of width sigma0 centered at z = 0 and z = -d.
struct CatConfig {
    Particle particle;
    double sigma0 = 1e-6;  // m, initial packet width, > 0
    double d = 0.0;        // m, packet separation, >= 0
    // Superposition amplitudes; the default is the equal split 1/sqrt(2).
    std::complex<double> c1{0.70710678118654752440, 0.0};
    std::complex<double> c2{0.70710678118654752440, 0.0};
    Gravity gravity;
    double detector_H = -0.01;      // m, detector plane coordinate
    double hbar = constants::hbar;  // J s; overridable in tests only
};

// Normalization constant
//   N = 1 / sqrt(|c1|^2 + |c2|^2 + 2 Re(c1* c2) exp(-d^2 / 8 sigma0^2)),
// which reduces to 1/sqrt(1 + exp(-d^2/8 sigma0^2)) for the equal split.
double normalization(const CatConfig& cfg);

// CatConfig whose invariants have been checked, with the derived
// normalization attached (recomputed at validation, never stored stale).
struct ValidatedConfig {
    Particle particle;
    double sigma0;
    double d;
    std::complex<double> c1;
    std::complex<double> c2;
    Gravity gravity;
    double detector_H;
    double hbar;
    double norm;  // N as defined above
};

// Checks all invariants and attaches the derived normalization.
// Throws Error with code NonPositiveWidth (sigma0 <= 0), NonPositiveMass,
// NegativeSeparation (d < 0), or ZeroAmplitudes (c1 = c2 = 0).
ValidatedConfig validate_config(const CatConfig& cfg);

// Uniformly spaced sampling times t_i = t_start + i * dt.
struct TimeGrid {
    double t_start = 0.0;       // s, >= 0
    double t_end = 0.0;         // s, > t_start
    std::size_t n_samples = 0;  // >= 2

    double dt() const { return (t_end - t_start) / double(n_samples - 1); }
    double at(std::size_t i) const { return t_start + double(i) * dt(); }
};

// Validates 0 <= t_start < t_end and n_samples >= 2.
// Throws Error{InvalidTimeGrid} otherwise.
TimeGrid make_time_grid(double t_start, double t_end, std::size_t n_samples);

}  // namespace tof

#endif  // TOF_MODEL_HPP
