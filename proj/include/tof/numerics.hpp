#ifndef TOF_NUMERICS_HPP
#define TOF_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

// Small numerical toolbox: adaptive quadrature, golden-section search,
// a portable deterministic RNG, and a static-partition parallel loop.
//
// The RNG is hand-rolled on purpose: std::normal_distribution and the
// std engines are not bit-stable across standard library
// implementations, and byte-identical reruns are part of the output
// contract.

namespace tof {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb,
                   double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with the standard Richardson acceptance
// test; tol is an absolute tolerance on the integral.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol,
                        int max_depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Golden-section search for the maximizer of a unimodal f on [a, b];
// returns the abscissa once the bracket shrinks below xtol.
template <class F>
double golden_max(const F& f, double a, double b, double xtol) {
    constexpr double inv_phi = 0.61803398874989485;  // (sqrt(5) - 1) / 2
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Trapezoid rule over uniformly sampled values.
inline double trapezoid(const std::vector<double>& y, double dx) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * dx;
}

// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// splitmix64 seed expander (Steele, Lea, Flood).
struct SplitMix64 {
    std::uint64_t s;

    explicit SplitMix64(std::uint64_t seed) : s(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman / Vigna), state seeded through splitmix64.
struct Xoshiro256pp {
    std::uint64_t s[4];

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s) w = sm.next();
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform in (0, 1]: 53-bit mantissa, never zero, safe under log().
    double uniform01() {
        return double((next() >> 11) + 1) * 0x1.0p-53;
    }
};

// One Box-Muller pair of independent standard normals.
inline void normal_pair(Xoshiro256pp& rng, double& n0, double& n1) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    n0 = r * std::cos(a);
    n1 = r * std::sin(a);
}

// Worker count for data-parallel loops: hardware concurrency, capped by
// the TOF_THREADS environment variable when set (minimum 1).
unsigned worker_count();

// Splits [0, n) into contiguous ranges, one per worker, and runs
// body(begin, end) for each.  Results must not depend on the partition;
// callers write disjoint output ranges, so any worker count (including
// TOF_THREADS=1) produces identical bytes.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tof

#endif  // TOF_NUMERICS_HPP
