#include "tof/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tof/numerics.hpp"

namespace tof {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::uint64_t chunk_size = std::uint64_t(1) << 16;

void check_cloud(const ThermalCloud& cloud, double g) {
    if (!(cloud.sigma0 > 0.0)) {
        throw Error(ErrorCode::NonPositiveWidth,
                    "cloud position spread sigma0 must be > 0");
    }
    if (!(cloud.particle.mass > 0.0)) {
        throw Error(ErrorCode::NonPositiveMass, "cloud mass must be > 0");
    }
    if (!(cloud.temperature >= 0.0)) {
        throw Error(ErrorCode::UsageError, "temperature must be >= 0");
    }
    if (!(g >= 0.0)) {
        throw Error(ErrorCode::UsageError, "g must be >= 0");
    }
}

// First positive time at which z0 + v0 t - g t^2/2 = H, or a negative
// sentinel when the trajectory never reaches the plane.
double first_crossing(double z0, double v0, double H, double g) {
    if (g > 0.0) {
        const double disc = v0 * v0 + 2.0 * g * (z0 - H);
        if (disc < 0.0) return -1.0;  // turning point stays above H
        const double root = std::sqrt(disc);
        const double t_minus = (v0 - root) / g;
        const double t_plus = (v0 + root) / g;
        if (t_minus > 0.0) return t_minus;
        if (t_plus > 0.0) return t_plus;
        return -1.0;
    }
    // Free flight: needs velocity pointing at the plane.
    const double dz = H - z0;
    if (dz == 0.0) return -1.0;  // starts on the plane; no later crossing bin
    if (v0 == 0.0 || (dz > 0.0) != (v0 > 0.0)) return -1.0;
    return dz / v0;
}

}  // namespace

double sigma_v(const ThermalCloud& cloud) {
    check_cloud(cloud, 0.0);
    return std::sqrt(constants::boltzmann * cloud.temperature /
                     cloud.particle.mass);
}

double classical_distribution(double t, double H, const ThermalCloud& cloud,
                              double g) {
    check_cloud(cloud, g);
    if (!(t > 0.0)) {
        throw Error(ErrorCode::NonPositiveTime,
                    "classical arrival density is defined for t > 0");
    }
    const double s0sq = cloud.sigma0 * cloud.sigma0;
    const double svsq = constants::boltzmann * cloud.temperature /
                        cloud.particle.mass;
    const double var = s0sq + svsq * t * t;
    const double mean_z = H + 0.5 * g * t * t;
    const double expo = -mean_z * mean_z / (2.0 * var);
    // exp underflows below about -745; the prefactor cannot rescue it.
    if (expo < -745.0) return 0.0;
    const double numer =
        0.5 * g * t * t * (2.0 * s0sq + svsq * t * t) - H * svsq * t * t;
    return numer / (std::sqrt(two_pi * t * t) * var * std::sqrt(var)) *
           std::exp(expo);
}

double classical_cdf(double t, double H, const ThermalCloud& cloud, double g) {
    check_cloud(cloud, g);
    if (!(t > 0.0)) {
        throw Error(ErrorCode::NonPositiveTime,
                    "classical arrival law is defined for t > 0");
    }
    const double s0sq = cloud.sigma0 * cloud.sigma0;
    const double svsq = constants::boltzmann * cloud.temperature /
                        cloud.particle.mass;
    const double var = s0sq + svsq * t * t;
    return normal_cdf((H + 0.5 * g * t * t) / std::sqrt(var));
}

double classical_cdf_limit(double H, const ThermalCloud& cloud, double g) {
    check_cloud(cloud, g);
    if (g > 0.0) return 1.0;
    // g = 0: as t -> inf the argument tends to sign-neutral 0 through
    // H / (sigma_v t); half of the velocity distribution crosses.
    (void)H;
    return 0.5;
}

McHistogram monte_carlo_tof(const ThermalCloud& cloud, double H, double g,
                            std::uint64_t n, std::uint64_t seed,
                            std::size_t n_bins, double t_lo, double t_hi) {
    check_cloud(cloud, g);
    if (n == 0) {
        throw Error(ErrorCode::UsageError, "need at least one draw");
    }
    if (n_bins == 0 || !(t_hi > t_lo) || !(t_lo >= 0.0)) {
        throw Error(ErrorCode::InvalidTimeGrid,
                    "histogram needs n_bins >= 1 and 0 <= t_lo < t_hi");
    }
    const double sv = sigma_v(cloud);

    McHistogram h;
    h.t_lo = t_lo;
    h.t_hi = t_hi;
    h.counts.assign(n_bins, 0);
    h.n_total = n;

    const std::uint64_t n_chunks = (n + chunk_size - 1) / chunk_size;

    struct ChunkResult {
        std::vector<std::uint64_t> counts;
        std::vector<double> arrivals;
        std::uint64_t no_arrival = 0;
        std::uint64_t below = 0;
        std::uint64_t above = 0;
    };
    std::vector<ChunkResult> results(n_chunks);

    const double inv_width = double(n_bins) / (t_hi - t_lo);

    parallel_for(n_chunks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            ChunkResult& r = results[c];
            r.counts.assign(n_bins, 0);
            const std::uint64_t first = std::uint64_t(c) * chunk_size;
            const std::uint64_t count =
                std::min<std::uint64_t>(chunk_size, n - first);
            r.arrivals.reserve(count);
            // Independent substream per chunk; the mixing constant keeps
            // nearby (seed, chunk) pairs decorrelated.
            SplitMix64 mix(seed);
            Xoshiro256pp rng(mix.next() ^
                             (0x9e3779b97f4a7c15ull * (std::uint64_t(c) + 1)));
            for (std::uint64_t i = 0; i < count; ++i) {
                double g0, g1;
                normal_pair(rng, g0, g1);
                const double z0 = cloud.sigma0 * g0;
                const double v0 = sv * g1;
                const double t = first_crossing(z0, v0, H, g);
                if (t <= 0.0) {
                    ++r.no_arrival;
                    continue;
                }
                r.arrivals.push_back(t);
                if (t < t_lo) {
                    ++r.below;
                } else if (t >= t_hi) {
                    ++r.above;
                } else {
                    const auto bin = std::size_t((t - t_lo) * inv_width);
                    ++r.counts[std::min(bin, n_bins - 1)];
                }
            }
        }
    });

    // Merge in fixed chunk order so the output is independent of the
    // thread partition.
    std::vector<double> arrivals;
    for (const ChunkResult& r : results) {
        for (std::size_t b = 0; b < n_bins; ++b) h.counts[b] += r.counts[b];
        h.n_no_arrival += r.no_arrival;
        h.n_below += r.below;
        h.n_above += r.above;
        arrivals.insert(arrivals.end(), r.arrivals.begin(), r.arrivals.end());
    }
    h.n_arrived = arrivals.size();

    // KS distance of the arrival sample against the conditional law
    // F(t) / F(inf).
    if (h.n_arrived > 0) {
        std::sort(arrivals.begin(), arrivals.end());
        const double f_inf = classical_cdf_limit(H, cloud, g);
        const double inv_n = 1.0 / double(h.n_arrived);
        double ks = 0.0;
        for (std::size_t i = 0; i < arrivals.size(); ++i) {
            const double fc = classical_cdf(arrivals[i], H, cloud, g) / f_inf;
            ks = std::max(ks, std::abs(fc - double(i) * inv_n));
            ks = std::max(ks, std::abs(double(i + 1) * inv_n - fc));
        }
        h.ks = ks;
    }
    return h;
}

}  // namespace tof
