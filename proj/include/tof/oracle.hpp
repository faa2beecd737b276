#ifndef TOF_ORACLE_HPP
#define TOF_ORACLE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "tof/model.hpp"

// Independent numerical evolution: Strang-split Fourier stepper for
//   i hbar dPsi/dt = -(hbar^2/2m) d2/dz2 Psi + m g z Psi
// on a periodic grid.  Shares no formulas with the closed-form modules
// beyond the Hamiltonian itself, so agreement is evidence, not
// tautology.
//
// For the linear potential the Baker-Campbell-Hausdorff series of the
// split exponentials terminates: [V,[T,V]] is a c-number and
// [T,[T,V]] = 0, so the VTV step equals the exact propagator times a
// global phase exp(+i m g^2 dt^3 / 24 hbar) (TVT: -1/12 in place of
// +1/24).  With exact_phase_correction the stepper removes that phase
// each step and is exact for all dt up to roundoff and grid tails; the
// relative phase between uncorrected one-step TVT and VTV states,
// m g^2 dt^3 / 8 hbar, is a testable fingerprint of the algebra.

namespace tof {

// Periodic uniform grid; z_i = z_min + i dz, dz = (z_max - z_min) / n,
// the right endpoint being the wrap-around image of the left.
struct Grid1D {
    double z_min = 0.0;
    double z_max = 0.0;
    std::size_t n_points = 0;

    double dz() const { return (z_max - z_min) / double(n_points); }
    double z_at(std::size_t i) const { return z_min + double(i) * dz(); }
};

// Validates z_max > z_min and n_points a power of two >= 1024.
// Throws Error{InvalidGrid}.
Grid1D make_grid1d(double z_min, double z_max, std::size_t n_points);

enum class Splitting { vtv, tvt };

enum class DerivMode { spectral, stencil4 };

struct PropagateOptions {
    std::vector<std::size_t> snapshot_steps;  // which steps to retain
    double detector = 0.0;                    // m, plane for the J series
    std::size_t detector_stride = 0;          // 0 disables the series
    Splitting splitting = Splitting::vtv;
    bool exact_phase_correction = true;
    double norm_tol = 1e-8;   // max allowed |norm/norm0 - 1|
    double leak_tol = 1e-10;  // max allowed probability near the edges
};

struct Snapshot {
    std::size_t step = 0;
    std::vector<std::complex<double>> psi;
};

struct DetectorSample {
    double t = 0.0;  // s
    double j = 0.0;  // 1/s, signed current at the detector node
};

struct PropagationRun {
    Grid1D grid;
    Particle particle;
    double g = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    double detector_z = 0.0;  // grid node used for the J series
    std::vector<Snapshot> snapshots;
    std::vector<DetectorSample> detector_series;
    double max_norm_drift = 0.0;     // observed over the whole run
    double max_boundary_prob = 0.0;  // observed over the whole run
};

// Evolves the initial state n_steps of size dt.  The norm (relative to
// the initial discrete norm) and the probability within 5 points of
// either edge are monitored every step; exceeding the tolerances throws
// Error{NormDrift} or Error{BoundaryLeak}.  Snapshot step 0 stores the
// initial state.  Throws Error{InvalidGrid} on size mismatches and
// Error{UsageError} for dt <= 0, n_steps = 0, or a detector outside the
// grid.
PropagationRun propagate(const std::vector<std::complex<double>>& initial,
                         const Grid1D& grid, const Particle& particle,
                         double g, double dt, std::size_t n_steps,
                         const PropagateOptions& opt = {});

// Probability current J_i = (hbar/m) Im(conj(psi_i) dpsi_i) on the grid,
// with the derivative either spectral (default) or a periodic
// fourth-order stencil for cross-checks on well-resolved states.
std::vector<double> grid_current(const std::vector<std::complex<double>>& psi,
                                 const Grid1D& grid, const Particle& particle,
                                 DerivMode mode = DerivMode::spectral);

// Discrete norm sum |psi_i|^2 dz.
double grid_norm(const std::vector<std::complex<double>>& psi,
                 const Grid1D& grid);

// Central-difference continuity check around snapshot step k:
//   || (rho_{k+1} - rho_{k-1}) / (2 dt) + dJ_k/dz ||_2 / || dJ_k/dz ||_2
// with the spatial derivative spectral.  Requires snapshots at steps
// k-1, k, k+1 (consecutive steps); throws Error{UsageError} otherwise.
double continuity_residual(const PropagationRun& run, std::size_t k);

// Samples the closed-form state on the grid nodes at time t.
std::vector<std::complex<double>> sample_state(const Grid1D& grid, double t,
                                               const ValidatedConfig& cfg);

}  // namespace tof

#endif  // TOF_ORACLE_HPP
