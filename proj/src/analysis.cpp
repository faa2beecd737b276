#include "tof/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tof/numerics.hpp"

namespace tof {

namespace {

struct Extremum {
    std::size_t idx;
    bool is_max;
};

// Alternating raw extrema from sign changes of discrete differences;
// plateaus collapse onto their trailing edge.
std::vector<Extremum> raw_extrema(const std::vector<double>& y) {
    std::vector<Extremum> out;
    int prev = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const int s = (y[i] > y[i - 1]) - (y[i] < y[i - 1]);
        if (s == 0) continue;
        if (prev != 0 && s != prev) {
            out.push_back({i - 1, prev > 0});
        }
        prev = s;
    }
    return out;
}

}  // namespace

FringeReport fringe_report(const TofSignal& sig) {
    const std::vector<double>& y = sig.pi;
    const std::size_t n = y.size();
    if (n < 3) {
        throw Error(ErrorCode::InvalidTimeGrid,
                    "fringe analysis needs at least 3 samples");
    }

    const std::size_t peak_idx =
        std::size_t(std::max_element(y.begin(), y.end()) - y.begin());
    const double peak = y[peak_idx];
    if (!(peak > 0.0)) {
        throw Error(ErrorCode::WindowTooNarrow,
                    "signal vanishes on the whole window; no pulse captured");
    }
    if (y.front() > 1e-4 * peak || y.back() > 1e-4 * peak) {
        throw Error(ErrorCode::WindowTooNarrow,
                    "Pi at a window end exceeds 1e-4 of the peak; the "
                    "window does not capture the full pulse");
    }

    const double prominence = 0.01 * peak;
    const std::vector<Extremum> ext = raw_extrema(y);

    // Value of the minimum adjacent to extremum position k on one side;
    // window ends act as minima.
    const auto side_min = [&](std::size_t k, bool left) -> double {
        if (left) {
            for (std::size_t j = k; j-- > 0;) {
                if (!ext[j].is_max) return y[ext[j].idx];
            }
            return y.front();
        }
        for (std::size_t j = k + 1; j < ext.size(); ++j) {
            if (!ext[j].is_max) return y[ext[j].idx];
        }
        return y.back();
    };
    const auto side_max = [&](std::size_t k, bool left) -> double {
        if (left) {
            for (std::size_t j = k; j-- > 0;) {
                if (ext[j].is_max) return y[ext[j].idx];
            }
            return -1.0;
        }
        for (std::size_t j = k + 1; j < ext.size(); ++j) {
            if (ext[j].is_max) return y[ext[j].idx];
        }
        return -1.0;
    };

    FringeReport rep;
    for (std::size_t k = 0; k < ext.size(); ++k) {
        if (ext[k].is_max) {
            const double rise = y[ext[k].idx] -
                                std::min(side_min(k, true), side_min(k, false));
            if (rise >= prominence) ++rep.n_maxima;
        } else {
            const double l = side_max(k, true);
            const double r = side_max(k, false);
            if (l < 0.0 || r < 0.0) continue;  // not an internal minimum
            if (std::min(l, r) - y[ext[k].idx] >= prominence) ++rep.n_fringes;
        }
    }

    // Peak location refined by the parabola through the three samples
    // around the grid maximum.
    const double dt = sig.grid.dt();
    rep.peak_time = sig.grid.at(peak_idx);
    rep.peak_value = peak;
    if (peak_idx > 0 && peak_idx + 1 < n) {
        const double ym = y[peak_idx - 1];
        const double yp = y[peak_idx + 1];
        const double curv = ym - 2.0 * peak + yp;
        if (curv < 0.0) {
            const double shift = 0.5 * (ym - yp) / curv;
            rep.peak_time += shift * dt;
            rep.peak_value = peak - 0.25 * (ym - yp) * shift;
        }
    }

    rep.total_prob = trapezoid(y, dt);
    double moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        moment += w * sig.grid.at(i) * y[i];
    }
    rep.mean_arrival =
        rep.total_prob > 0.0 ? moment * dt / rep.total_prob : 0.0;

    // Visibility: zero without a prominent fringe, otherwise the ratio
    // of the integrated interference envelope to the integrated
    // incoherent flux.
    if (rep.n_fringes == 0) {
        rep.visibility = 0.0;
        return rep;
    }
    const ValidatedConfig& cfg = sig.config;
    const double a1 = std::abs(cfg.c1);
    const double a2 = std::abs(cfg.c2);
    const double n2 = cfg.norm * cfg.norm;
    std::vector<double> coherent(n), incoherent(n);
    for (std::size_t i = 0; i < n; ++i) {
        CurrentBreakdown b;
        if (sig.has_channels) {
            b = sig.channels[i];
        } else {
            b = current_breakdown(sig.detector, sig.grid.at(i), cfg);
        }
        coherent[i] =
            2.0 * a1 * a2 * n2 * b.p12 * std::hypot(b.eta, b.lambda);
        incoherent[i] =
            n2 * (a1 * a1 * std::abs(b.j1) + a2 * a2 * std::abs(b.j2));
    }
    const double num = trapezoid(coherent, dt);
    const double den = trapezoid(incoherent, dt);
    rep.visibility =
        den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
    return rep;
}

const char* sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::separation: return "d";
        case SweepParam::mass: return "mass";
        case SweepParam::sigma0: return "sigma0";
        case SweepParam::gravity: return "g";
        case SweepParam::detector: return "H";
    }
    return "?";
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "d") return SweepParam::separation;
    if (name == "mass") return SweepParam::mass;
    if (name == "sigma0") return SweepParam::sigma0;
    if (name == "g") return SweepParam::gravity;
    if (name == "H") return SweepParam::detector;
    throw Error(ErrorCode::UsageError,
                "unknown sweep parameter '" + name +
                    "' (expected d, mass, sigma0, g, or H)");
}

std::size_t SweepTable::n_ok() const {
    std::size_t k = 0;
    for (const auto& r : rows) {
        if (r.ok) ++k;
    }
    return k;
}

SweepTable sweep(const CatConfig& base, SweepParam param,
                 std::vector<double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::UsageError, "sweep needs at least one value");
    }
    std::sort(values.begin(), values.end());

    SweepTable table;
    table.param = param;
    table.rows.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow& row = table.rows[i];
        row.value = values[i];
        CatConfig cfg = base;
        switch (param) {
            case SweepParam::separation: cfg.d = values[i]; break;
            case SweepParam::mass: cfg.particle.mass = values[i]; break;
            case SweepParam::sigma0: cfg.sigma0 = values[i]; break;
            case SweepParam::gravity: cfg.gravity.g = values[i]; break;
            case SweepParam::detector: cfg.detector_H = values[i]; break;
        }
        try {
            const ValidatedConfig vc = validate_config(cfg);
            const TofSignal sig =
                quantum_tof(auto_time_grid(vc), vc, true);
            row.report = fringe_report(sig);
            row.ok = true;
        } catch (const Error& e) {
            row.error = error_name(e.code());
        }
    }
    return table;
}

}  // namespace tof
