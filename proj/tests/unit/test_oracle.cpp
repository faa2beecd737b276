#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "tof/current.hpp"
#include "tof/oracle.hpp"

using namespace tof;
using tof_test::throws_code;

namespace {

ValidatedConfig free_packet() {
    CatConfig cfg;
    cfg.particle = sodium();
    cfg.sigma0 = 2e-6;
    cfg.d = 0.0;
    cfg.gravity.g = 0.0;
    cfg.detector_H = -1e-5;
    return validate_config(cfg);
}

ValidatedConfig falling_packet() {
    CatConfig cfg;
    cfg.particle = sodium();
    cfg.sigma0 = 1e-6;
    cfg.d = 0.0;
    cfg.gravity.g = 9.8;
    cfg.detector_H = -1e-5;
    return validate_config(cfg);
}

double max_rel(const std::vector<std::complex<double>>& a,
               const std::vector<std::complex<double>>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / den;
}

}  // namespace

TEST_CASE("grid construction is validated") {
    const Grid1D g = make_grid1d(-1e-4, 1e-4, 4096);
    CHECK(g.dz() == doctest::Approx(2e-4 / 4096).epsilon(1e-14));
    CHECK(g.z_at(0) == -1e-4);
    CHECK(g.z_at(2048) == doctest::Approx(0.0));

    CHECK(throws_code(ErrorCode::InvalidGrid,
                      [] { make_grid1d(-1e-4, 1e-4, 3000); }));
    CHECK(throws_code(ErrorCode::InvalidGrid,
                      [] { make_grid1d(-1e-4, 1e-4, 512); }));
    CHECK(throws_code(ErrorCode::InvalidGrid,
                      [] { make_grid1d(1e-4, -1e-4, 4096); }));
}

TEST_CASE("free packet propagation reproduces the closed form") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    PropagateOptions opt;
    opt.snapshot_steps = {0, 50};
    const PropagationRun run = propagate(sample_state(grid, 0.0, cfg), grid,
                                         cfg.particle, 0.0, 2e-5, 50, opt);

    REQUIRE(run.snapshots.size() == 2);
    CHECK(run.snapshots[0].step == 0);
    // Snapshot 0 is the unmodified initial state.
    CHECK(max_rel(run.snapshots[0].psi, sample_state(grid, 0.0, cfg)) == 0.0);

    CHECK(max_rel(run.snapshots[1].psi, sample_state(grid, 1e-3, cfg)) <
          1e-12);
    CHECK(run.max_norm_drift < 1e-13);
    CHECK(run.max_boundary_prob < 1e-20);
}

TEST_CASE("both splittings are exact for the linear potential") {
    const ValidatedConfig cfg = falling_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    const auto initial = sample_state(grid, 0.0, cfg);
    const auto ref = sample_state(grid, 1e-3, cfg);

    for (Splitting sp : {Splitting::vtv, Splitting::tvt}) {
        PropagateOptions opt;
        opt.splitting = sp;
        opt.snapshot_steps = {100};
        const PropagationRun run =
            propagate(initial, grid, cfg.particle, 9.8, 1e-5, 100, opt);
        CHECK(max_rel(run.snapshots.back().psi, ref) < 1e-12);
    }
}

TEST_CASE("skipping the phase correction leaves the splitting error") {
    const ValidatedConfig cfg = falling_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    const auto initial = sample_state(grid, 0.0, cfg);

    // One large uncorrected step of each splitting; the relative phase
    // between the two results is m g^2 dt^3 / 8 hbar.
    const double dt = 1e-4;
    PropagateOptions opt;
    opt.exact_phase_correction = false;
    opt.snapshot_steps = {1};
    const auto vtv =
        propagate(initial, grid, cfg.particle, 9.8, dt, 1, opt);
    opt.splitting = Splitting::tvt;
    const auto tvt =
        propagate(initial, grid, cfg.particle, 9.8, dt, 1, opt);

    std::complex<double> inner{0.0, 0.0};
    const auto& a = tvt.snapshots.back().psi;
    const auto& b = vtv.snapshots.back().psi;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inner += std::conj(a[i]) * b[i] * grid.dz();
    }
    const double predicted = cfg.particle.mass * 9.8 * 9.8 * dt * dt * dt /
                             (8.0 * cfg.hbar);
    CHECK(std::arg(inner) == doctest::Approx(predicted).epsilon(1e-10));
}

TEST_CASE("norm and boundary monitors trip") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);

    SUBCASE("an unreachable norm tolerance throws") {
        PropagateOptions opt;
        opt.norm_tol = 1e-18;
        CHECK(throws_code(ErrorCode::NormDrift, [&] {
            propagate(sample_state(grid, 0.0, cfg), grid, cfg.particle, 0.0,
                      2e-5, 16, opt);
        }));
    }
    SUBCASE("a wide state leaks into the boundary guard") {
        CatConfig wide_cfg;
        wide_cfg.particle = sodium();
        wide_cfg.sigma0 = 5e-5;
        wide_cfg.gravity.g = 0.0;
        const ValidatedConfig wide = validate_config(wide_cfg);
        CHECK(throws_code(ErrorCode::BoundaryLeak, [&] {
            propagate(sample_state(grid, 0.0, wide), grid, wide.particle, 0.0,
                      1e-6, 2);
        }));
    }
}

TEST_CASE("propagate validates its inputs") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    const auto initial = sample_state(grid, 0.0, cfg);

    CHECK(throws_code(ErrorCode::UsageError, [&] {
        propagate(initial, grid, cfg.particle, 0.0, 0.0, 4);
    }));
    CHECK(throws_code(ErrorCode::UsageError, [&] {
        propagate(initial, grid, cfg.particle, 0.0, 1e-6, 0);
    }));
    CHECK(throws_code(ErrorCode::InvalidGrid, [&] {
        std::vector<std::complex<double>> short_state(100);
        propagate(short_state, grid, cfg.particle, 0.0, 1e-6, 4);
    }));
    CHECK(throws_code(ErrorCode::UsageError, [&] {
        PropagateOptions opt;
        opt.detector = 1.0;  // outside the grid
        opt.detector_stride = 1;
        propagate(initial, grid, cfg.particle, 0.0, 1e-6, 4, opt);
    }));
}

TEST_CASE("detector series samples the grid current") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    PropagateOptions opt;
    opt.snapshot_steps = {50};
    opt.detector = 3e-6;
    opt.detector_stride = 10;
    const PropagationRun run = propagate(sample_state(grid, 0.0, cfg), grid,
                                         cfg.particle, 0.0, 2e-5, 50, opt);

    REQUIRE(run.detector_series.size() == 5);
    const std::size_t node =
        std::size_t(std::lround((3e-6 - grid.z_min) / grid.dz()));
    CHECK(run.detector_z == grid.z_at(node));

    const auto j = grid_current(run.snapshots.back().psi, grid, cfg.particle);
    const DetectorSample& last = run.detector_series.back();
    CHECK(last.t == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(last.j == doctest::Approx(j[node]).epsilon(1e-12));

    // The sampled current agrees with the closed-form current there.
    const double analytic = direct_current(run.detector_z, 1e-3, cfg);
    CHECK(last.j == doctest::Approx(analytic).epsilon(1e-9));
}

TEST_CASE("derivative stencils agree on resolved states") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    PropagateOptions opt;
    opt.snapshot_steps = {50};
    const PropagationRun run = propagate(sample_state(grid, 0.0, cfg), grid,
                                         cfg.particle, 0.0, 2e-5, 50, opt);
    const auto& psi = run.snapshots.back().psi;
    const auto spectral = grid_current(psi, grid, cfg.particle);
    const auto stencil =
        grid_current(psi, grid, cfg.particle, DerivMode::stencil4);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < spectral.size(); ++i) {
        num = std::max(num, std::abs(spectral[i] - stencil[i]));
        den = std::max(den, std::abs(spectral[i]));
    }
    CHECK(num / den < 1e-6);
}

TEST_CASE("continuity equation holds between snapshots") {
    const ValidatedConfig cfg = free_packet();
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 4096);
    PropagateOptions opt;
    opt.snapshot_steps = {49, 50, 51};
    const PropagationRun run = propagate(sample_state(grid, 0.0, cfg), grid,
                                         cfg.particle, 0.0, 2e-5, 60, opt);
    CHECK(continuity_residual(run, 50) ==
          doctest::Approx(5.316475e-05).epsilon(1e-3));
    CHECK(continuity_residual(run, 50) < 2e-4);

    CHECK(throws_code(ErrorCode::UsageError,
                      [&] { continuity_residual(run, 49); }));
    CHECK(throws_code(ErrorCode::UsageError,
                      [&] { continuity_residual(run, 0); }));
}
