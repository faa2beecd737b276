#include "tof/geometry.hpp"

#include <cmath>

#include "tof/evolution.hpp"

namespace tof {

namespace {

CatConfig to_cat(const ValidatedConfig& cfg) {
    CatConfig out;
    out.particle = cfg.particle;
    out.sigma0 = cfg.sigma0;
    out.d = cfg.d;
    out.c1 = cfg.c1;
    out.c2 = cfg.c2;
    out.gravity = cfg.gravity;
    out.detector_H = cfg.detector_H;
    out.hbar = cfg.hbar;
    return out;
}

ValidatedConfig modified(const ValidatedConfig& cfg, double d, double g,
                         double detector) {
    CatConfig c = to_cat(cfg);
    c.d = d;
    c.gravity.g = g;
    c.detector_H = detector;
    return validate_config(c);
}

// Trapezoid weight for node i of n.
double tw(std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::pi1: return "pi1";
        case Scenario::pi2: return "pi2";
        case Scenario::pi3: return "pi3";
        case Scenario::pi4: return "pi4";
    }
    return "?";
}

Scenario parse_scenario(const std::string& name) {
    if (name == "pi1") return Scenario::pi1;
    if (name == "pi2") return Scenario::pi2;
    if (name == "pi3") return Scenario::pi3;
    if (name == "pi4") return Scenario::pi4;
    throw Error(ErrorCode::UsageError,
                "unknown scenario '" + name +
                    "' (expected pi1, pi2, pi3, or pi4)");
}

ValidatedConfig reduced_config(Scenario s, const ValidatedConfig& cfg,
                               double X) {
    switch (s) {
        case Scenario::pi1:
            // Already the 1D law along z.
            return cfg;
        case Scenario::pi2:
            // Transverse plate: free single packet crossing x = X.
            return modified(cfg, 0.0, 0.0, X);
        case Scenario::pi3:
            // Horizontal superposition, floor plate: one falling packet.
            return modified(cfg, 0.0, cfg.gravity.g, cfg.detector_H);
        case Scenario::pi4:
            // Horizontal superposition, transverse plate: free
            // two-packet law at X.
            return modified(cfg, cfg.d, 0.0, X);
    }
    throw Error(ErrorCode::UsageError, "unreachable scenario");
}

TofSignal geometry_tof(Scenario s, const ValidatedConfig& cfg, double X,
                       const TimeGrid* grid, bool with_channels) {
    const ValidatedConfig reduced = reduced_config(s, cfg, X);
    const TimeGrid g = grid ? *grid : auto_time_grid(reduced);
    return quantum_tof(g, reduced, with_channels);
}

double plane_flux_quadrature(Scenario s, double t, const ValidatedConfig& cfg,
                             double X, std::size_t n_nodes) {
    if (n_nodes < 16) {
        throw Error(ErrorCode::InvalidGrid,
                    "plane quadrature needs at least 16 nodes per axis");
    }
    const double g = cfg.gravity.g;
    // Helper 1D factors of the product state.
    const ValidatedConfig free_single = modified(cfg, 0.0, 0.0, 0.0);
    const ValidatedConfig fall_single = modified(cfg, 0.0, g, 0.0);
    const ValidatedConfig free_pair = modified(cfg, cfg.d, 0.0, 0.0);

    const double sigma = std::sqrt(sigma_sq(t, cfg));
    const double pad = 8.0 * sigma;
    const double fall = -0.5 * g * t * t;
    const std::size_t n = n_nodes;

    // Free ground-state density along a transverse axis.
    const auto rho_free = [&](double x) {
        return packet_density(x, t, 0.0, free_single);
    };

    double sum = 0.0;
    switch (s) {
        case Scenario::pi1: {
            // Plane z = H; integrate over x and y.
            const double jz = direct_current(cfg.detector_H, t, cfg);
            const double lo = -pad, hi = pad;
            const double h = (hi - lo) / double(n - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double rx = rho_free(lo + double(i) * h);
                for (std::size_t j = 0; j < n; ++j) {
                    const double ry = rho_free(lo + double(j) * h);
                    sum += tw(i, n) * tw(j, n) * rx * ry * jz;
                }
            }
            return sum * h * h;
        }
        case Scenario::pi2: {
            // Plane x = X; integrate over y and the falling coherent
            // pair along z.
            const double jx = direct_current(X, t, free_single);
            const double ylo = -pad, yhi = pad;
            const double zlo = fall - cfg.d - pad, zhi = fall + pad;
            const double hy = (yhi - ylo) / double(n - 1);
            const double hz = (zhi - zlo) / double(n - 1);
            for (std::size_t j = 0; j < n; ++j) {
                const double ry = rho_free(ylo + double(j) * hy);
                for (std::size_t k = 0; k < n; ++k) {
                    const double rz =
                        std::norm(cat_amplitude(zlo + double(k) * hz, t, cfg));
                    sum += tw(j, n) * tw(k, n) * ry * rz * jx;
                }
            }
            return sum * hy * hz;
        }
        case Scenario::pi3: {
            // Plane z = H; integrate the coherent pair along x and the
            // ground state along y.
            const double jz = direct_current(cfg.detector_H, t, fall_single);
            const double xlo = -cfg.d - pad, xhi = pad;
            const double ylo = -pad, yhi = pad;
            const double hx = (xhi - xlo) / double(n - 1);
            const double hy = (yhi - ylo) / double(n - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double rx = std::norm(
                    cat_amplitude(xlo + double(i) * hx, t, free_pair));
                for (std::size_t j = 0; j < n; ++j) {
                    const double ry = rho_free(ylo + double(j) * hy);
                    sum += tw(i, n) * tw(j, n) * rx * ry * jz;
                }
            }
            return sum * hx * hy;
        }
        case Scenario::pi4: {
            // Plane x = X; coherent pair current along x, falling single
            // packet along z.
            const double jx = direct_current(X, t, free_pair);
            const double ylo = -pad, yhi = pad;
            const double zlo = fall - pad, zhi = fall + pad;
            const double hy = (yhi - ylo) / double(n - 1);
            const double hz = (zhi - zlo) / double(n - 1);
            for (std::size_t j = 0; j < n; ++j) {
                const double ry = rho_free(ylo + double(j) * hy);
                for (std::size_t k = 0; k < n; ++k) {
                    const double rz = packet_density(zlo + double(k) * hz, t,
                                                     0.0, fall_single);
                    sum += tw(j, n) * tw(k, n) * ry * rz * jx;
                }
            }
            return sum * hy * hz;
        }
    }
    throw Error(ErrorCode::UsageError, "unreachable scenario");
}

}  // namespace tof
