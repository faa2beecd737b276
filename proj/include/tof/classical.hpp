#ifndef TOF_CLASSICAL_HPP
#define TOF_CLASSICAL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tof/model.hpp"

// Classical ballistic baseline: a thermal cloud with Gaussian position
// spread sigma0 and Maxwell velocity spread sigma_v = sqrt(kT/m) falls
// under gravity; arrivals at the plane z = H follow the closed-form
// density below.  A Monte Carlo sampler provides an independent check.

namespace tof {

struct ThermalCloud {
    Particle particle;
    double sigma0 = 1e-6;       // m, initial position spread, > 0
    double temperature = 0.0;   // K, >= 0
};

// Thermal velocity spread sqrt(k_B T / m), m/s.
double sigma_v(const ThermalCloud& cloud);

// Arrival-time density at the detector plane (1/s):
//
//   D(t) = (2 pi t^2)^(-1/2)
//          * [ g t^2 (2 sigma0^2 + sigma_v^2 t^2) / 2 - H sigma_v^2 t^2 ]
//          / (sigma0^2 + sigma_v^2 t^2)^(3/2)
//          * exp[ -(H + g t^2/2)^2 / (2 (sigma0^2 + sigma_v^2 t^2)) ].
//
// Throws Error{NonPositiveTime} for t <= 0.  Valid for g >= 0 and T >= 0
// (T = 0 gives the ballistically sharpened sigma_v = 0 pulse).
double classical_distribution(double t, double H, const ThermalCloud& cloud,
                              double g);

// Cumulative arrival probability
//   F(t) = Phi( (H + g t^2/2) / sqrt(sigma0^2 + sigma_v^2 t^2) ),
// whose time derivative is exactly the density above.  Used as the
// reference law for the Kolmogorov-Smirnov check.
double classical_cdf(double t, double H, const ThermalCloud& cloud, double g);

// F(t -> infinity): 1 for g > 0 (every trajectory eventually falls
// through the plane), 1/2 for g = 0 with H != 0 (only one velocity sign
// ever crosses).
double classical_cdf_limit(double H, const ThermalCloud& cloud, double g);

// Monte Carlo arrival histogram plus summary statistics.
struct McHistogram {
    double t_lo = 0.0;          // s, histogram window
    double t_hi = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t n_total = 0;       // draws requested
    std::uint64_t n_arrived = 0;     // trajectories crossing z = H
    std::uint64_t n_no_arrival = 0;  // never cross the plane
    std::uint64_t n_below = 0;       // arrivals before t_lo
    std::uint64_t n_above = 0;       // arrivals after t_hi
    double ks = 0.0;  // Kolmogorov-Smirnov distance to the closed form

    double bin_width() const {
        return (t_hi - t_lo) / double(counts.size());
    }
    // Bin density normalized per draw, comparable to the closed form.
    double density(std::size_t bin) const {
        return double(counts[bin]) / (double(n_total) * bin_width());
    }
};

// Samples n trajectories (z0, v0) ~ N(0, sigma0) x N(0, sigma_v), solves
// each first crossing of z = H exactly, and bins the arrival times.
//
// Deterministic by construction: draws are partitioned into fixed
// chunks of 2^16 trajectories with per-chunk RNG substreams derived
// from (seed, chunk index), so results are byte-identical for any
// thread count.  The KS distance compares the sorted arrivals against
// the conditional law F(t) / F(inf).
McHistogram monte_carlo_tof(const ThermalCloud& cloud, double H, double g,
                            std::uint64_t n, std::uint64_t seed,
                            std::size_t n_bins, double t_lo, double t_hi);

}  // namespace tof

#endif  // TOF_CLASSICAL_HPP
