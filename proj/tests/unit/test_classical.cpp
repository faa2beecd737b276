#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tof/classical.hpp"
#include "tof/numerics.hpp"

using namespace tof;
using tof_test::throws_code;

namespace {

ThermalCloud microkelvin_cloud() {
    ThermalCloud cloud;
    cloud.particle = sodium();
    cloud.sigma0 = 1e-6;
    cloud.temperature = 1e-6;
    return cloud;
}

}  // namespace

TEST_CASE("thermal velocity spread anchor") {
    const ThermalCloud cloud = microkelvin_cloud();
    CHECK(sigma_v(cloud) ==
          doctest::Approx(1.90173406629737e-02).epsilon(1e-12));
    ThermalCloud zero = cloud;
    zero.temperature = 0.0;
    CHECK(sigma_v(zero) == 0.0);
}

TEST_CASE("density is the derivative of the arrival law") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01, g = 9.8;
    const double h = 1e-6;
    for (double t : {0.043, 0.045, 0.0451, 0.047}) {
        const double fd = (classical_cdf(t + h, H, cloud, g) -
                           classical_cdf(t - h, H, cloud, g)) /
                          (2.0 * h);
        const double den = classical_distribution(t, H, cloud, g);
        CHECK(fd == doctest::Approx(den).epsilon(1e-5));
    }
}

TEST_CASE("arrival law limits") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01;

    SUBCASE("under gravity everything arrives") {
        CHECK(classical_cdf_limit(H, cloud, 9.8) == 1.0);
        CHECK(classical_cdf(10.0, H, cloud, 9.8) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("free expansion loses half the cloud") {
        CHECK(classical_cdf_limit(H, cloud, 0.0) == 0.5);
        CHECK(classical_cdf(1e6, H, cloud, 0.0) ==
              doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("pulse peak and unit integral") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01, g = 9.8;
    const double t1 = std::sqrt(2.0 * 0.01 / g);

    const double tpk = golden_max(
        [&](double t) { return classical_distribution(t, H, cloud, g); },
        0.9 * t1, 1.1 * t1, 1e-10);
    CHECK(tpk == doctest::Approx(0.04509008).epsilon(1e-5));
    // Thermal broadening drags the peak slightly ahead of the sharp
    // ballistic arrival, but by far less than half a percent.
    CHECK(std::abs(tpk - t1) / t1 < 5e-3);

    const double sigma_t = std::sqrt(cloud.sigma0 * cloud.sigma0 +
                                     sigma_v(cloud) * sigma_v(cloud) * t1 *
                                         t1) /
                           (g * t1);
    const double total = adaptive_simpson(
        [&](double t) { return classical_distribution(t, H, cloud, g); },
        t1 - 10.0 * sigma_t, t1 + 10.0 * sigma_t, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero temperature narrows to the ballistic pulse") {
    ThermalCloud cloud = microkelvin_cloud();
    cloud.temperature = 0.0;
    const double H = -0.01, g = 9.8;
    const double t1 = std::sqrt(2.0 * 0.01 / g);
    const double sigma_t = cloud.sigma0 / (g * t1);

    const double total = adaptive_simpson(
        [&](double t) { return classical_distribution(t, H, cloud, g); },
        t1 - 10.0 * sigma_t, t1 + 10.0 * sigma_t, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(classical_distribution(t1, H, cloud, g) >
          100.0 * classical_distribution(t1, H, microkelvin_cloud(), g));
}

TEST_CASE("density rejects non-positive times") {
    const ThermalCloud cloud = microkelvin_cloud();
    CHECK(throws_code(ErrorCode::NonPositiveTime, [&] {
        classical_distribution(0.0, -0.01, cloud, 9.8);
    }));
    CHECK(throws_code(ErrorCode::NonPositiveTime, [&] {
        classical_distribution(-1.0, -0.01, cloud, 9.8);
    }));
}

TEST_CASE("monte carlo sampler is deterministic and unbiased") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01, g = 9.8;
    const std::uint64_t n = 1000000;

    const McHistogram a = monte_carlo_tof(cloud, H, g, n, 42, 256, 0.040, 0.051);
    const McHistogram b = monte_carlo_tof(cloud, H, g, n, 42, 256, 0.040, 0.051);
    CHECK(a.counts == b.counts);
    CHECK(a.ks == b.ks);

    // Frozen statistics for seed 42: every draw falls through the
    // plane, the window clips a few tail arrivals, and the KS distance
    // sits inside the 1% critical band 1.63 / sqrt(n).
    CHECK(a.n_arrived == n);
    CHECK(a.n_no_arrival == 0);
    CHECK(a.n_below == 2244);
    CHECK(a.n_above == 2350);
    CHECK(a.ks == doctest::Approx(1.402316e-03).epsilon(1e-5));
    CHECK(a.ks < 1.63e-3);

    std::uint64_t binned = 0;
    for (const auto c : a.counts) binned += c;
    CHECK(binned + a.n_below + a.n_above == a.n_arrived);

    const McHistogram c = monte_carlo_tof(cloud, H, g, n, 43, 256, 0.040, 0.051);
    CHECK(c.counts != a.counts);
}

TEST_CASE("histogram density matches the law near the peak") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01, g = 9.8;
    const McHistogram h =
        monte_carlo_tof(cloud, H, g, 1000000, 42, 128, 0.040, 0.051);
    const std::size_t mid = std::size_t(
        (0.0451754 - h.t_lo) / h.bin_width());
    const double t_mid = h.t_lo + (double(mid) + 0.5) * h.bin_width();
    const double law = classical_distribution(t_mid, H, cloud, g);
    // ~18k counts in the peak bin: a 3 sigma band is about 2.3%.
    CHECK(h.density(mid) == doctest::Approx(law).epsilon(0.025));
}

TEST_CASE("free expansion splits the cloud in half") {
    const ThermalCloud cloud = microkelvin_cloud();
    const double H = -0.01;
    const std::uint64_t n = 1000000;
    const McHistogram h = monte_carlo_tof(cloud, H, 0.0, n, 7, 256, 0.0, 60.0);
    CHECK(h.n_arrived == 499764);
    CHECK(h.n_arrived + h.n_no_arrival == n);
    CHECK(std::abs(double(h.n_arrived) / double(n) - 0.5) < 3e-3);
    // KS is taken against the conditional law F(t) / F(inf).
    CHECK(h.ks == doctest::Approx(1.213880e-03).epsilon(1e-5));
    CHECK(h.ks < 2e-3);
}

TEST_CASE("zero temperature free cloud never arrives") {
    ThermalCloud cloud = microkelvin_cloud();
    cloud.temperature = 0.0;
    const McHistogram h =
        monte_carlo_tof(cloud, -0.01, 0.0, 10000, 3, 16, 0.0, 1.0);
    CHECK(h.n_arrived == 0);
    CHECK(h.n_no_arrival == 10000);
    CHECK(h.ks == 0.0);
}
