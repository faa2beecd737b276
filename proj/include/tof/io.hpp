#ifndef TOF_IO_HPP
#define TOF_IO_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tof/analysis.hpp"
#include "tof/classical.hpp"
#include "tof/current.hpp"
#include "tof/model.hpp"
#include "tof/oracle.hpp"

// File formats and unit handling.
//
// Output contract: CSV files open with a block of '# key=value' metadata
// lines echoing the fully resolved configuration, then one header line
// of column names, then data rows.  All floating-point cells use C
// locale scientific notation with 15 significant digits ('%.14e'), LF
// line endings, binary streams.  No timestamps, hostnames, or other
// run-environment state ever enter a file: reruns are byte-identical.

namespace tof {

// '%.14e' rendering shared by every writer.
std::string format_num(double v);

// Unit-suffixed scalar parsers.  A bare number means the SI unit.
// Lengths: m, cm, mm, um, nm.  Times: s, ms, us.  Mass: kg, amu.
// Temperature: K, mK, uK, nK.  Throw Error{UsageError} on anything else.
double parse_length(const std::string& text);
double parse_time(const std::string& text);
double parse_mass(const std::string& text);
double parse_temperature(const std::string& text);

// Plain number (no suffix allowed); used for g and dimensionless values.
double parse_scalar(const std::string& text);

// Sweep value: either a suffixed absolute value appropriate for the
// parameter, or a relative multiplier like "2x" applied to the base
// configuration's value.
double parse_sweep_value(SweepParam param, const std::string& text,
                         const CatConfig& base);

// Ordered key=value metadata block.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> kv;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
};

// Generic numeric table with metadata; the common shape of every curve
// file (quantum signal, classical curve, Monte Carlo histogram).
struct CurveFile {
    Metadata meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Quantum signal as a curve: columns t_s,pi_per_s and, when channels
// were recorded, j1,j2,cross,p12,delta.
CurveFile signal_curve(const TofSignal& sig);

// Closed-form classical curve on a grid.
CurveFile classical_curve(const ThermalCloud& cloud, double H, double g,
                          const TimeGrid& grid);

// Monte Carlo histogram (bin centers, density per draw) with sampling
// metadata including the seed and the KS distance.
CurveFile histogram_curve(const ThermalCloud& cloud, double H, double g,
                          const McHistogram& hist, std::uint64_t seed);

void write_curve_csv(const std::string& path, const CurveFile& curve);
void write_curve_json(const std::string& path, const CurveFile& curve);

// Sweep table writers (CSV and JSON carry identical content).
void write_sweep_csv(const std::string& path, const SweepTable& table,
                     const Metadata& meta);
void write_sweep_json(const std::string& path, const SweepTable& table,
                      const Metadata& meta);

// Oracle snapshot: columns z_m,re_psi,im_psi with grid metadata.
void write_snapshot_csv(const std::string& path, const PropagationRun& run,
                        std::size_t snapshot_index);

// Optional JSON run configuration; every field may be absent.  Unit
// suffixes are allowed in string-valued fields.  Unknown keys are
// rejected with Error{UsageError}.
struct RunFile {
    std::optional<double> mass_kg;      // keys mass_amu (number) or mass
    std::optional<double> sigma0;       // m
    std::optional<double> d;            // m
    std::optional<double> H;            // m
    std::optional<double> X;            // m
    std::optional<double> g;            // m/s^2
    std::optional<std::complex<double>> c1;
    std::optional<std::complex<double>> c2;
    std::optional<double> temperature;  // K
    std::optional<double> t_start;      // s
    std::optional<double> t_end;        // s
    std::optional<std::uint64_t> t_samples;
    std::optional<bool> channels;
    std::optional<std::string> scenario;
    std::optional<std::string> param;
    std::optional<std::vector<std::string>> values;
    std::optional<std::uint64_t> monte_carlo;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> bins;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

RunFile load_run_file(const std::string& path);

}  // namespace tof

#endif  // TOF_IO_HPP
