#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "tof/evolution.hpp"
#include "tof/numerics.hpp"

using namespace tof;
using tof_test::reference_config;
using tof_test::throws_code;

namespace {

ValidatedConfig reference() { return validate_config(reference_config()); }

}  // namespace

TEST_CASE("complex width and spread anchors") {
    const ValidatedConfig cfg = reference();

    const ComplexWidth s0 = complex_width(0.0, cfg);
    CHECK(s0.real() == cfg.sigma0);
    CHECK(s0.imag() == 0.0);
    CHECK(sigma_sq(0.0, cfg) == doctest::Approx(1e-12).epsilon(1e-14));

    // Sodium, sigma0 = 1 um, t = 45 ms: beta = hbar t / (2 m sigma0^2).
    const ComplexWidth st = complex_width(0.045, cfg);
    CHECK(st.real() == cfg.sigma0);
    CHECK(st.imag() ==
          doctest::Approx(6.215484226390515e-05).epsilon(1e-12));
    CHECK(std::sqrt(sigma_sq(0.045, cfg)) ==
          doctest::Approx(6.216288616892663e-05).epsilon(1e-12));
}

TEST_CASE("state stays normalized while falling") {
    const ValidatedConfig cfg = reference();
    for (double t : {0.0, 0.010, 0.045}) {
        CHECK(std::abs(cat_norm(t, cfg) - 1.0) < 1e-10);
    }
}

TEST_CASE("packet density matches the squared amplitude") {
    const ValidatedConfig cfg = reference();
    const double t = 0.02;
    for (double z : {-2e-3, -1.96e-3, -1.9e-3}) {
        const double den = packet_density(z, t, 0.0, cfg);
        const double amp = std::norm(packet_amplitude(z, t, 0.0, cfg));
        CHECK(den == doctest::Approx(amp).epsilon(1e-10));
    }
}

TEST_CASE("single packet density integrates to one") {
    const ValidatedConfig cfg = reference();
    const double t = 0.03;
    const double center = -0.5 * cfg.gravity.g * t * t;
    const double w = 12.0 * std::sqrt(sigma_sq(t, cfg));
    const double total = adaptive_simpson(
        [&](double z) { return packet_density(z, t, 0.0, cfg); }, center - w,
        center + w, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gravity only translates the envelope") {
    CatConfig base = reference_config();
    const ValidatedConfig with_g = validate_config(base);
    base.gravity.g = 0.0;
    const ValidatedConfig no_g = validate_config(base);

    const double t = 0.025;
    const double fall = 0.5 * with_g.gravity.g * t * t;
    for (double z : {-3.1e-3, -3.0625e-3, -3.0e-3}) {
        const double a = std::abs(packet_amplitude(z, t, 0.0, with_g));
        const double b = std::abs(packet_amplitude(z + fall, t, 0.0, no_g));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("evolution equation residual converges at second order") {
    const ValidatedConfig cfg = reference();
    const double t = 2e-3;
    const double zc = -0.5 * cfg.gravity.g * t * t;
    const double half = 0.64e-6;
    const double dt = 2e-8;

    // Fixed window, dz halved twice; frozen residuals with ratio ~ 4.
    const double r1 = pde_residual(zc - half, zc + half, 129, t, dt, cfg);
    const double r2 = pde_residual(zc - half, zc + half, 257, t, dt, cfg);
    const double r3 = pde_residual(zc - half, zc + half, 513, t, dt, cfg);
    CHECK(r1 == doctest::Approx(5.940648e-02).epsilon(1e-3));
    CHECK(r2 == doctest::Approx(1.471611e-02).epsilon(1e-3));
    CHECK(r3 == doctest::Approx(3.666802e-03).epsilon(1e-3));
    CHECK(r1 / r2 > 3.8);
    CHECK(r1 / r2 < 4.2);
    CHECK(r2 / r3 > 3.8);
    CHECK(r2 / r3 < 4.2);

    // One more halving lands below 1e-3.
    const double r4 = pde_residual(zc - half, zc + half, 1025, t, dt, cfg);
    CHECK(r4 == doctest::Approx(9.155767e-04).epsilon(1e-3));
    CHECK(r4 < 1e-3);

    // The time-difference error is subdominant: dt changes nothing.
    const double ra = pde_residual(zc - half, zc + half, 513, t, 4e-8, cfg);
    const double rb = pde_residual(zc - half, zc + half, 513, t, 1e-8, cfg);
    CHECK(std::abs(ra - rb) / r3 < 1e-3);
}

TEST_CASE("residual guards its grid") {
    const ValidatedConfig cfg = reference();

    // At t = 45 ms the local phase wavelength 2 pi hbar / (m g t) is
    // 39 nm, so a 50 nm step cannot resolve it and the guard fires
    // before accuracy silently degrades.
    CHECK(throws_code(ErrorCode::GridTooCoarse, [&] {
        pde_residual(-0.01, -0.0099, 2001, 0.045, 1e-8, cfg);
    }));

    CHECK(throws_code(ErrorCode::InvalidGrid, [&] {
        pde_residual(-1e-6, 1e-6, 4, 2e-3, 1e-8, cfg);
    }));
    CHECK(throws_code(ErrorCode::InvalidGrid, [&] {
        pde_residual(1e-6, -1e-6, 128, 2e-3, 1e-8, cfg);
    }));
    CHECK(throws_code(ErrorCode::InvalidGrid, [&] {
        pde_residual(-1e-6, 1e-6, 128, 2e-3, 0.0, cfg);
    }));
    CHECK(throws_code(ErrorCode::InvalidGrid, [&] {
        pde_residual(-1e-6, 1e-6, 128, 1e-9, 1e-8, cfg);
    }));
}
