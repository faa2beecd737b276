#include "tof/model.hpp"

#include <cmath>

namespace tof {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
        case ErrorCode::NonPositiveMass: return "NonPositiveMass";
        case ErrorCode::NegativeSeparation: return "NegativeSeparation";
        case ErrorCode::ZeroAmplitudes: return "ZeroAmplitudes";
        case ErrorCode::NonPositiveTime: return "NonPositiveTime";
        case ErrorCode::InvalidTimeGrid: return "InvalidTimeGrid";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
        case ErrorCode::NormDrift: return "NormDrift";
        case ErrorCode::BoundaryLeak: return "BoundaryLeak";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "UnknownError";
}

Particle sodium() {
    return Particle{constants::sodium_mass_amu * constants::atomic_mass_unit,
                    "Na-23"};
}

double normalization(const CatConfig& cfg) {
    const double a1 = std::abs(cfg.c1);
    const double a2 = std::abs(cfg.c2);
    const double overlap =
        std::exp(-cfg.d * cfg.d / (8.0 * cfg.sigma0 * cfg.sigma0));
    const double cross = 2.0 * std::real(std::conj(cfg.c1) * cfg.c2) * overlap;
    return 1.0 / std::sqrt(a1 * a1 + a2 * a2 + cross);
}

ValidatedConfig validate_config(const CatConfig& cfg) {
    if (!(cfg.sigma0 > 0.0) || !std::isfinite(cfg.sigma0)) {
        throw Error(ErrorCode::NonPositiveWidth,
                    "initial packet width sigma0 must be finite and > 0");
    }
    if (!(cfg.particle.mass > 0.0) || !std::isfinite(cfg.particle.mass)) {
        throw Error(ErrorCode::NonPositiveMass,
                    "particle mass must be finite and > 0");
    }
    if (!(cfg.d >= 0.0) || !std::isfinite(cfg.d)) {
        throw Error(ErrorCode::NegativeSeparation,
                    "packet separation d must be finite and >= 0");
    }
    if (std::abs(cfg.c1) == 0.0 && std::abs(cfg.c2) == 0.0) {
        throw Error(ErrorCode::ZeroAmplitudes,
                    "at least one superposition amplitude must be nonzero");
    }
    if (!(cfg.gravity.g >= 0.0) || !std::isfinite(cfg.gravity.g)) {
        throw Error(ErrorCode::UsageError,
                    "gravitational acceleration must be finite and >= 0");
    }
    if (!std::isfinite(cfg.detector_H)) {
        throw Error(ErrorCode::UsageError,
                    "detector coordinate must be finite");
    }
    if (!(cfg.hbar > 0.0)) {
        throw Error(ErrorCode::UsageError, "hbar must be > 0");
    }

    ValidatedConfig out{cfg.particle, cfg.sigma0,     cfg.d,
                        cfg.c1,       cfg.c2,         cfg.gravity,
                        cfg.detector_H, cfg.hbar,     0.0};
    out.norm = normalization(cfg);
    return out;
}

TimeGrid make_time_grid(double t_start, double t_end, std::size_t n_samples) {
    if (!(t_start >= 0.0) || !(t_end > t_start) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidTimeGrid,
                    "time grid requires 0 <= t_start < t_end");
    }
    if (n_samples < 2) {
        throw Error(ErrorCode::InvalidTimeGrid,
                    "time grid requires at least 2 samples");
    }
    return TimeGrid{t_start, t_end, n_samples};
}

}  // namespace tof
