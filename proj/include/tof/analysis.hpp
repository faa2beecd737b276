#ifndef TOF_ANALYSIS_HPP
#define TOF_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tof/current.hpp"
#include "tof/model.hpp"

// Fringe statistics of a time-of-flight signal and parameter sweeps.

namespace tof {

// Summary of one Pi(t) curve.
//
// Extrema are located by sign changes of the discrete differences and
// filtered by a prominence threshold of 1% of the global peak: a local
// maximum counts when it rises at least that much above one of its
// neighboring minima (window ends act as minima), and a dark fringe
// counts when the internal minimum sits at least that much below both
// neighboring maxima.  By construction n_fringes <= n_maxima - 1.
//
// Visibility is an energy-ratio metric: the time integral of the
// interference flux envelope 2 |c1||c2| N^2 P12 sqrt(eta^2 + lambda^2)
// over the integral of the incoherent flux N^2 (|c1|^2 |j1| + |c2|^2
// |j2|), clamped to [0, 1].  It reports 0 when no prominent fringe
// exists, so a smooth unimodal pulse has zero visibility by definition.
struct FringeReport {
    std::size_t n_maxima = 0;   // prominent local maxima of Pi
    std::size_t n_fringes = 0;  // prominent dark fringes between them
    double visibility = 0.0;    // [0, 1]
    double peak_time = 0.0;     // s, parabolic refinement of the peak
    double peak_value = 0.0;    // 1/s
    double mean_arrival = 0.0;  // s, first moment of Pi over the window
    double total_prob = 0.0;    // integral of Pi over the window
};

// Analyzes one signal.  Precondition: the window captures the pulse,
// i.e. Pi at both window ends is below 1e-4 of the peak; otherwise
// throws Error{WindowTooNarrow}.
FringeReport fringe_report(const TofSignal& sig);

enum class SweepParam { separation, mass, sigma0, gravity, detector };

const char* sweep_param_name(SweepParam p);

// Accepts "d", "mass", "sigma0", "g", "H"; throws Error{UsageError}.
SweepParam parse_sweep_param(const std::string& name);

struct SweepRow {
    double value = 0.0;   // SI value of the swept parameter
    bool ok = false;
    FringeReport report;  // valid when ok
    std::string error;    // error name when not ok, empty otherwise
};

struct SweepTable {
    SweepParam param = SweepParam::separation;
    std::vector<SweepRow> rows;  // ordered by ascending parameter value

    std::size_t n_ok() const;
};

// Runs quantum_tof + fringe_report per value on the automatic window.
// A failing row (for example WindowTooNarrow) records its error and the
// sweep continues.  Values are sorted ascending; SI units throughout.
SweepTable sweep(const CatConfig& base, SweepParam param,
                 std::vector<double> values);

}  // namespace tof

#endif  // TOF_ANALYSIS_HPP
