#include "tof/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tof/evolution.hpp"
#include "tof/numerics.hpp"

namespace tof {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// RAII pair of in-place c2c plans over one buffer.  FFTW_ESTIMATE never
// touches the array, so planning before the buffer is filled is safe,
// and it keeps plans deterministic (no machine-dependent measurement).
class FftPair {
public:
    FftPair(std::complex<double>* buf, std::size_t n) {
        auto* p = reinterpret_cast<fftw_complex*>(buf);
        fwd_ = fftw_plan_dft_1d(int(n), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(int(n), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

private:
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// Angular wavenumber of FFT bin i, with the Nyquist bin mapped to zero
// for odd-derivative use.
double k_of(std::size_t i, std::size_t n, double dk) {
    if (2 * i == n) return 0.0;
    return (i < n / 2) ? double(i) * dk : (double(i) - double(n)) * dk;
}

double edge_probability(const std::vector<std::complex<double>>& psi,
                        double dz) {
    const std::size_t n = psi.size();
    double p = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        p += std::norm(psi[i]) + std::norm(psi[n - 1 - i]);
    }
    return p * dz;
}

}  // namespace

Grid1D make_grid1d(double z_min, double z_max, std::size_t n_points) {
    if (!(z_max > z_min)) {
        throw Error(ErrorCode::InvalidGrid, "grid requires z_max > z_min");
    }
    if (n_points < 1024 || (n_points & (n_points - 1)) != 0) {
        throw Error(ErrorCode::InvalidGrid,
                    "grid size must be a power of two >= 1024");
    }
    return Grid1D{z_min, z_max, n_points};
}

double grid_norm(const std::vector<std::complex<double>>& psi,
                 const Grid1D& grid) {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * grid.dz();
}

std::vector<std::complex<double>> sample_state(const Grid1D& grid, double t,
                                               const ValidatedConfig& cfg) {
    std::vector<std::complex<double>> psi(grid.n_points);
    parallel_for(grid.n_points, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            psi[i] = cat_amplitude(grid.z_at(i), t, cfg);
        }
    });
    return psi;
}

PropagationRun propagate(const std::vector<std::complex<double>>& initial,
                         const Grid1D& grid, const Particle& particle,
                         double g, double dt, std::size_t n_steps,
                         const PropagateOptions& opt) {
    make_grid1d(grid.z_min, grid.z_max, grid.n_points);  // revalidate
    const std::size_t n = grid.n_points;
    if (initial.size() != n) {
        throw Error(ErrorCode::InvalidGrid,
                    "initial state size does not match the grid");
    }
    if (!(dt > 0.0) || n_steps == 0) {
        throw Error(ErrorCode::UsageError,
                    "propagation requires dt > 0 and n_steps >= 1");
    }
    if (!(particle.mass > 0.0)) {
        throw Error(ErrorCode::NonPositiveMass, "particle mass must be > 0");
    }
    if (!(g >= 0.0)) {
        throw Error(ErrorCode::UsageError, "g must be >= 0");
    }

    const double hb = constants::hbar;
    const double m = particle.mass;
    const double dz = grid.dz();
    const double dk = two_pi / (grid.z_max - grid.z_min);

    PropagationRun run;
    run.grid = grid;
    run.particle = particle;
    run.g = g;
    run.dt = dt;
    run.n_steps = n_steps;

    std::size_t det_idx = 0;
    if (opt.detector_stride > 0) {
        const double pos = (opt.detector - grid.z_min) / dz;
        const auto idx = (long long)std::llround(pos);
        if (idx < 0 || idx >= (long long)n) {
            throw Error(ErrorCode::UsageError,
                        "detector plane lies outside the grid");
        }
        det_idx = std::size_t(idx);
        run.detector_z = grid.z_at(det_idx);
    }

    // Precomputed per-step factors.  The 1/n of the unnormalized FFT
    // round trip is folded into the kinetic multiplier.
    const bool two_kinetic = opt.splitting == Splitting::tvt;
    const double kin_dt = two_kinetic ? 0.5 * dt : dt;
    const double pot_dt = two_kinetic ? dt : 0.5 * dt;
    // Each forward+backward round trip scales by n, and each round trip
    // applies the kinetic multiplier exactly once.
    const double kin_scale = 1.0 / double(n);

    std::vector<std::complex<double>> pot(n), kin(n);
    for (std::size_t i = 0; i < n; ++i) {
        pot[i] = std::polar(1.0, -m * g * grid.z_at(i) * pot_dt / hb);
        const double k = k_of(i, n, dk);
        kin[i] = std::polar(kin_scale, -hb * k * k * kin_dt / (2.0 * m));
    }
    // Residual global phase of one split step against the exact
    // propagator; see the header note.
    const double corr_angle = two_kinetic
                                  ? m * g * g * dt * dt * dt / (12.0 * hb)
                                  : -m * g * g * dt * dt * dt / (24.0 * hb);
    const std::complex<double> corr =
        opt.exact_phase_correction ? std::polar(1.0, corr_angle)
                                   : std::complex<double>(1.0, 0.0);

    std::vector<std::complex<double>> psi = initial;
    FftPair fft(psi.data(), n);

    // Auxiliary buffer and plans for the spectral derivative used by the
    // detector series.
    std::vector<std::complex<double>> aux(n);
    FftPair aux_fft(aux.data(), n);

    const double norm0 = grid_norm(psi, grid);
    if (!(norm0 > 0.0)) {
        throw Error(ErrorCode::InvalidGrid, "initial state has zero norm");
    }

    const auto want_snapshot = [&](std::size_t step) {
        return std::find(opt.snapshot_steps.begin(), opt.snapshot_steps.end(),
                         step) != opt.snapshot_steps.end();
    };
    if (want_snapshot(0)) run.snapshots.push_back({0, psi});

    for (std::size_t step = 1; step <= n_steps; ++step) {
        if (two_kinetic) {
            // exp(-i T dt/2) exp(-i V dt) exp(-i T dt/2)
            fft.forward();
            for (std::size_t i = 0; i < n; ++i) psi[i] *= kin[i];
            fft.backward();
            for (std::size_t i = 0; i < n; ++i) psi[i] *= pot[i];
            fft.forward();
            for (std::size_t i = 0; i < n; ++i) psi[i] *= kin[i];
            fft.backward();
        } else {
            // exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2)
            for (std::size_t i = 0; i < n; ++i) psi[i] *= pot[i];
            fft.forward();
            for (std::size_t i = 0; i < n; ++i) psi[i] *= kin[i];
            fft.backward();
            for (std::size_t i = 0; i < n; ++i) psi[i] *= pot[i];
        }
        if (opt.exact_phase_correction) {
            for (std::size_t i = 0; i < n; ++i) psi[i] *= corr;
        }

        const double drift = std::abs(grid_norm(psi, grid) / norm0 - 1.0);
        run.max_norm_drift = std::max(run.max_norm_drift, drift);
        if (drift > opt.norm_tol) {
            throw Error(ErrorCode::NormDrift,
                        "norm drift exceeded tolerance at step " +
                            std::to_string(step));
        }
        const double edge = edge_probability(psi, dz);
        run.max_boundary_prob = std::max(run.max_boundary_prob, edge);
        if (edge > opt.leak_tol) {
            throw Error(ErrorCode::BoundaryLeak,
                        "probability reached the grid boundary at step " +
                            std::to_string(step));
        }

        if (opt.detector_stride > 0 && step % opt.detector_stride == 0) {
            aux = psi;
            aux_fft.forward();
            for (std::size_t i = 0; i < n; ++i) {
                const double k = k_of(i, n, dk);
                aux[i] *= std::complex<double>(0.0, k / double(n));
            }
            aux_fft.backward();
            const double j = hb / m *
                             std::imag(std::conj(psi[det_idx]) * aux[det_idx]);
            run.detector_series.push_back({double(step) * dt, j});
        }
        if (want_snapshot(step)) run.snapshots.push_back({step, psi});
    }
    return run;
}

std::vector<double> grid_current(const std::vector<std::complex<double>>& psi,
                                 const Grid1D& grid, const Particle& particle,
                                 DerivMode mode) {
    make_grid1d(grid.z_min, grid.z_max, grid.n_points);
    const std::size_t n = grid.n_points;
    if (psi.size() != n) {
        throw Error(ErrorCode::InvalidGrid,
                    "state size does not match the grid");
    }
    if (!(particle.mass > 0.0)) {
        throw Error(ErrorCode::NonPositiveMass, "particle mass must be > 0");
    }
    const double hb = constants::hbar;
    const double scale = hb / particle.mass;
    std::vector<double> j(n);

    if (mode == DerivMode::spectral) {
        std::vector<std::complex<double>> d = psi;
        FftPair fft(d.data(), n);
        fft.forward();
        const double dk = two_pi / (grid.z_max - grid.z_min);
        for (std::size_t i = 0; i < n; ++i) {
            const double k = k_of(i, n, dk);
            d[i] *= std::complex<double>(0.0, k / double(n));
        }
        fft.backward();
        for (std::size_t i = 0; i < n; ++i) {
            j[i] = scale * std::imag(std::conj(psi[i]) * d[i]);
        }
        return j;
    }

    // Periodic fourth-order central stencil.
    const double inv12dz = 1.0 / (12.0 * grid.dz());
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double>& m2 = psi[(i + n - 2) % n];
        const std::complex<double>& m1 = psi[(i + n - 1) % n];
        const std::complex<double>& p1 = psi[(i + 1) % n];
        const std::complex<double>& p2 = psi[(i + 2) % n];
        const std::complex<double> d =
            (m2 - 8.0 * m1 + 8.0 * p1 - p2) * inv12dz;
        j[i] = scale * std::imag(std::conj(psi[i]) * d);
    }
    return j;
}

double continuity_residual(const PropagationRun& run, std::size_t k) {
    const auto find = [&](std::size_t step) -> const Snapshot* {
        for (const auto& s : run.snapshots) {
            if (s.step == step) return &s;
        }
        return nullptr;
    };
    if (k == 0) {
        throw Error(ErrorCode::UsageError,
                    "continuity check needs an interior step");
    }
    const Snapshot* sm = find(k - 1);
    const Snapshot* sc = find(k);
    const Snapshot* sp = find(k + 1);
    if (!sm || !sc || !sp) {
        throw Error(ErrorCode::UsageError,
                    "continuity check requires snapshots at steps k-1, k, "
                    "k+1");
    }
    const std::size_t n = run.grid.n_points;
    const std::vector<double> j =
        grid_current(sc->psi, run.grid, run.particle, DerivMode::spectral);

    // Spectral derivative of the (real) current.
    std::vector<std::complex<double>> dj(n);
    for (std::size_t i = 0; i < n; ++i) dj[i] = j[i];
    {
        FftPair fft(dj.data(), n);
        fft.forward();
        const double dk = two_pi / (run.grid.z_max - run.grid.z_min);
        for (std::size_t i = 0; i < n; ++i) {
            const double kk = k_of(i, n, dk);
            dj[i] *= std::complex<double>(0.0, kk / double(n));
        }
        fft.backward();
    }

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double drho = (std::norm(sp->psi[i]) - std::norm(sm->psi[i])) /
                            (2.0 * run.dt);
        const double div = std::real(dj[i]);
        num += (drho + div) * (drho + div);
        den += div * div;
    }
    if (den == 0.0) {
        throw Error(ErrorCode::UsageError,
                    "continuity check on a currentless state");
    }
    return std::sqrt(num / den);
}

}  // namespace tof
