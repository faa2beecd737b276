// tof: time-of-flight distributions for falling matter waves.
//
// Subcommands: quantum (closed-form Pi(t) with optional channel
// breakdown), classical (ballistic baseline, optional Monte Carlo),
// geometry (3D detection scenarios pi1..pi4), sweep (fringe statistics
// across a parameter), verify (split-step self-check).
//
// Exit codes: 0 success, 1 verification failure, 2 usage or
// configuration error (machine-readable JSON on stderr), 3 sweep with
// every row failed.

#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tof/analysis.hpp"
#include "tof/classical.hpp"
#include "tof/current.hpp"
#include "tof/geometry.hpp"
#include "tof/io.hpp"
#include "tof/model.hpp"
#include "tof/verify.hpp"

namespace {

// Flag values arrive as strings so unit suffixes work everywhere.
struct CommonArgs {
    std::string config_path;
    std::string mass_amu;
    std::string sigma0;
    std::string d;
    std::string H;
    std::string X;
    std::string g;
    std::string temperature;
    std::string t_start;
    std::string t_end;
    std::uint64_t t_samples = 0;
    bool channels = false;
    std::string out;
    std::string format = "csv";
};

void add_physics_flags(CLI::App* cmd, CommonArgs& a, bool with_d,
                       bool with_temperature) {
    cmd->add_option("--config", a.config_path,
                    "JSON run configuration (flags override file values)");
    cmd->add_option("--mass-amu", a.mass_amu, "particle mass in amu");
    cmd->add_option("--sigma0", a.sigma0,
                    "initial packet width (length, e.g. 1um)");
    if (with_d) {
        cmd->add_option("--d", a.d, "packet separation (length)");
    }
    cmd->add_option("--H", a.H, "detector plane coordinate (length, signed)");
    cmd->add_option("--g", a.g, "gravitational acceleration in m/s^2");
    if (with_temperature) {
        cmd->add_option("--temperature", a.temperature,
                        "cloud temperature (e.g. 1uK)");
    }
}

void add_grid_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--t-start", a.t_start, "window start (time, e.g. 30ms)");
    cmd->add_option("--t-end", a.t_end, "window end (time)");
    cmd->add_option("--t-samples", a.t_samples, "number of samples");
}

void add_output_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--out", a.out, "output file path")->required();
    cmd->add_option("--format", a.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

// Layered resolution: defaults, then config file, then explicit flags.
struct Resolved {
    tof::CatConfig cat;
    tof::ThermalCloud cloud;
    std::optional<double> X;
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<std::uint64_t> t_samples;
    bool channels = false;
    tof::RunFile file;  // retained for sweep/scenario extras
};

Resolved resolve(const CommonArgs& a) {
    Resolved r;
    r.cat.particle = tof::sodium();
    r.cloud.particle = r.cat.particle;
    r.cloud.temperature = 1e-6;

    if (!a.config_path.empty()) {
        r.file = tof::load_run_file(a.config_path);
        const tof::RunFile& f = r.file;
        if (f.mass_kg) {
            r.cat.particle.mass = *f.mass_kg;
            r.cat.particle.label = "custom";
        }
        if (f.sigma0) r.cat.sigma0 = *f.sigma0;
        if (f.d) r.cat.d = *f.d;
        if (f.H) r.cat.detector_H = *f.H;
        if (f.g) r.cat.gravity.g = *f.g;
        if (f.c1) r.cat.c1 = *f.c1;
        if (f.c2) r.cat.c2 = *f.c2;
        if (f.X) r.X = *f.X;
        if (f.temperature) r.cloud.temperature = *f.temperature;
        if (f.t_start) r.t_start = *f.t_start;
        if (f.t_end) r.t_end = *f.t_end;
        if (f.t_samples) r.t_samples = *f.t_samples;
        if (f.channels) r.channels = *f.channels;
    }
    if (!a.mass_amu.empty()) {
        r.cat.particle.mass = tof::parse_scalar(a.mass_amu) *
                              tof::constants::atomic_mass_unit;
        r.cat.particle.label = "custom";
    }
    if (!a.sigma0.empty()) r.cat.sigma0 = tof::parse_length(a.sigma0);
    if (!a.d.empty()) r.cat.d = tof::parse_length(a.d);
    if (!a.H.empty()) r.cat.detector_H = tof::parse_length(a.H);
    if (!a.g.empty()) r.cat.gravity.g = tof::parse_scalar(a.g);
    if (!a.X.empty()) r.X = tof::parse_length(a.X);
    if (!a.temperature.empty()) {
        r.cloud.temperature = tof::parse_temperature(a.temperature);
    }
    if (!a.t_start.empty()) r.t_start = tof::parse_time(a.t_start);
    if (!a.t_end.empty()) r.t_end = tof::parse_time(a.t_end);
    if (a.t_samples > 0) r.t_samples = a.t_samples;
    if (a.channels) r.channels = true;

    r.cloud.particle = r.cat.particle;
    r.cloud.sigma0 = r.cat.sigma0;
    return r;
}

tof::TimeGrid resolve_grid(const Resolved& r, const tof::ValidatedConfig& vc) {
    if (r.t_start && r.t_end) {
        return tof::make_time_grid(*r.t_start, *r.t_end,
                                   r.t_samples.value_or(2048));
    }
    if (r.t_start || r.t_end) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "provide both --t-start and --t-end, or neither");
    }
    tof::TimeGrid grid = tof::auto_time_grid(vc);
    if (r.t_samples) {
        grid.n_samples = std::max<std::uint64_t>(*r.t_samples, 2);
    }
    return grid;
}

void write_curve(const tof::CurveFile& curve, const std::string& path,
                 const std::string& format) {
    if (format == "json") {
        tof::write_curve_json(path, curve);
    } else {
        tof::write_curve_csv(path, curve);
    }
    std::printf("wrote %s (%zu rows)\n", path.c_str(), curve.rows.size());
}

int cmd_quantum(const CommonArgs& a) {
    const Resolved r = resolve(a);
    const tof::ValidatedConfig vc = tof::validate_config(r.cat);
    const tof::TimeGrid grid = resolve_grid(r, vc);
    const tof::TofSignal sig = tof::quantum_tof(grid, vc, r.channels);
    write_curve(tof::signal_curve(sig), a.out, a.format);
    return 0;
}

int cmd_geometry(const CommonArgs& a, const std::string& scenario_flag) {
    const Resolved r = resolve(a);
    std::string scenario_name = scenario_flag;
    if (scenario_name.empty() && r.file.scenario) {
        scenario_name = *r.file.scenario;
    }
    if (scenario_name.empty()) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "geometry requires --scenario pi1|pi2|pi3|pi4");
    }
    const tof::Scenario sc = tof::parse_scenario(scenario_name);
    const bool needs_x =
        sc == tof::Scenario::pi2 || sc == tof::Scenario::pi4;
    if (needs_x && !r.X) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "scenario " + scenario_name +
                             " needs the transverse plane coordinate --X");
    }
    const tof::ValidatedConfig vc = tof::validate_config(r.cat);
    const tof::ValidatedConfig reduced =
        tof::reduced_config(sc, vc, r.X.value_or(0.0));
    const tof::TimeGrid grid = resolve_grid(r, reduced);
    const tof::TofSignal sig = tof::quantum_tof(grid, reduced, r.channels);
    write_curve(tof::signal_curve(sig), a.out, a.format);
    return 0;
}

// Arrival window for the ballistic baseline, mirroring the quantum
// policy: ballistic center +- 10 classical arrival widths for g > 0, a
// dispersion-scaled window for g = 0.
tof::TimeGrid classical_auto_grid(const tof::ThermalCloud& cloud, double H,
                                  double g, std::uint64_t n_samples) {
    const double abs_h = std::abs(H);
    if (abs_h <= 0.0) {
        throw tof::Error(tof::ErrorCode::InvalidTimeGrid,
                         "detector at the cloud center has no arrival "
                         "window; pass an explicit time grid");
    }
    const std::size_t n = std::max<std::uint64_t>(n_samples, 2);
    if (g > 0.0) {
        const double t1 = std::sqrt(2.0 * abs_h / g);
        const double sv = tof::sigma_v(cloud);
        const double spread = std::sqrt(cloud.sigma0 * cloud.sigma0 +
                                        sv * sv * t1 * t1);
        const double sigma_t = spread / (g * t1);
        const double lo = std::max(1e-3 * t1, t1 - 10.0 * sigma_t);
        const double hi = t1 + 10.0 * sigma_t;
        return tof::make_time_grid(lo, hi, n);
    }
    const double sv = tof::sigma_v(cloud);
    if (sv <= 0.0) {
        throw tof::Error(tof::ErrorCode::InvalidTimeGrid,
                         "g = 0 with T = 0 never reaches the detector; "
                         "pass an explicit time grid");
    }
    const double t_peak = abs_h / (std::numbers::sqrt2 * sv);
    return tof::make_time_grid(1e-3 * t_peak, 5.0 * t_peak, n);
}

int cmd_classical(const CommonArgs& a, const CLI::App* cmd,
                  std::uint64_t mc_draws, std::uint64_t seed,
                  std::uint64_t bins) {
    const Resolved r = resolve(a);
    const double H = r.cat.detector_H;
    const double g = r.cat.gravity.g;
    // File values apply when the flag was not given on the command line.
    if (r.file.monte_carlo && cmd->count("--monte-carlo") == 0) {
        mc_draws = *r.file.monte_carlo;
    }
    if (r.file.seed && cmd->count("--seed") == 0) seed = *r.file.seed;
    if (r.file.bins && cmd->count("--bins") == 0) bins = *r.file.bins;

    tof::TimeGrid grid{0.0, 0.0, 0};
    if (r.t_start && r.t_end) {
        grid = tof::make_time_grid(*r.t_start, *r.t_end,
                                   r.t_samples.value_or(2048));
        if (!(grid.t_start > 0.0)) {
            throw tof::Error(tof::ErrorCode::NonPositiveTime,
                             "classical curve needs t_start > 0");
        }
    } else if (r.t_start || r.t_end) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "provide both --t-start and --t-end, or neither");
    } else {
        grid = classical_auto_grid(r.cloud, H, g,
                                   r.t_samples.value_or(2048));
    }

    write_curve(tof::classical_curve(r.cloud, H, g, grid), a.out, a.format);

    if (mc_draws > 0) {
        const tof::McHistogram hist = tof::monte_carlo_tof(
            r.cloud, H, g, mc_draws, seed, bins, grid.t_start, grid.t_end);
        std::string mc_path = a.out;
        const auto dot = mc_path.find_last_of('.');
        if (dot == std::string::npos) {
            mc_path += "_mc";
        } else {
            mc_path.insert(dot, "_mc");
        }
        write_curve(tof::histogram_curve(r.cloud, H, g, hist, seed), mc_path,
                    a.format);
        std::printf("monte carlo: %llu drawn, %llu arrived, ks=%s\n",
                    (unsigned long long)hist.n_total,
                    (unsigned long long)hist.n_arrived,
                    tof::format_num(hist.ks).c_str());
    }
    return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& param_flag,
              const std::string& values_flag) {
    const Resolved r = resolve(a);
    std::string param_name = param_flag;
    if (param_name.empty() && r.file.param) param_name = *r.file.param;
    if (param_name.empty()) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "sweep requires --param d|mass|sigma0|g|H");
    }
    const tof::SweepParam param = tof::parse_sweep_param(param_name);

    std::vector<std::string> value_texts;
    if (!values_flag.empty()) {
        std::string cur;
        for (const char ch : values_flag) {
            if (ch == ',') {
                if (!cur.empty()) value_texts.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) value_texts.push_back(cur);
    } else if (r.file.values) {
        value_texts = *r.file.values;
    }
    if (value_texts.empty()) {
        throw tof::Error(tof::ErrorCode::UsageError,
                         "sweep requires --values v1,v2,... (suffixed "
                         "values or multipliers like 2x)");
    }
    std::vector<double> values;
    values.reserve(value_texts.size());
    for (const auto& text : value_texts) {
        values.push_back(tof::parse_sweep_value(param, text, r.cat));
    }

    const tof::SweepTable table = tof::sweep(r.cat, param, values);

    tof::Metadata meta;
    meta.add("schema", "tof-sweep-v1");
    meta.add("param", tof::sweep_param_name(param));
    const tof::ValidatedConfig vc = tof::validate_config(r.cat);
    meta.add("mass_kg", vc.particle.mass);
    meta.add("sigma0_m", vc.sigma0);
    meta.add("d_m", vc.d);
    meta.add("g_m_s2", vc.gravity.g);
    meta.add("detector_m", vc.detector_H);
    meta.add("hbar_J_s", vc.hbar);
    meta.add("n_values", std::uint64_t(values.size()));

    tof::write_sweep_csv(a.out + ".csv", table, meta);
    tof::write_sweep_json(a.out + ".json", table, meta);
    std::printf("wrote %s.csv and %s.json (%zu rows, %zu ok)\n",
                a.out.c_str(), a.out.c_str(), table.rows.size(),
                table.n_ok());
    return table.n_ok() == 0 ? 3 : 0;
}

int cmd_verify(bool quick) {
    const bool tamper = [] {
        const char* env = std::getenv("TOF_VERIFY_TAMPER");
        return env != nullptr && env[0] != '\0' && env[0] != '0';
    }();
    if (tamper) {
        std::printf("tamper mode: analytic reference deliberately scaled "
                    "by 1+1e-3 (negative control)\n");
    }
    const tof::VerifyReport rep = tof::run_verification(quick, tamper);
    for (const auto& c : rep.checks) {
        std::printf("[%s] %-28s measured=%s threshold=%s\n",
                    c.pass ? "ok" : "FAIL", c.name.c_str(),
                    tof::format_num(c.measured).c_str(),
                    tof::format_num(c.threshold).c_str());
    }
    std::printf("verify: %s (%zu checks%s)\n",
                rep.all_pass() ? "PASS" : "FAIL", rep.checks.size(),
                rep.quick ? ", quick" : "");
    return rep.all_pass() ? 0 : 1;
}

void print_error(const char* code, const std::string& message) {
    std::string escaped;
    for (const char ch : message) {
        if (ch == '"' || ch == '\\') {
            escaped += '\\';
            escaped += ch;
        } else if (ch == '\n') {
            escaped += "\\n";
        } else {
            escaped += ch;
        }
    }
    std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", code,
                 escaped.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"time-of-flight distributions for falling matter waves"};
    app.require_subcommand(1);

    CommonArgs qa, ga, ca, sa;
    std::string scenario_flag, param_flag, values_flag;
    std::uint64_t mc_draws = 0, seed = 0, bins = 512;
    bool quick = false;

    CLI::App* quantum =
        app.add_subcommand("quantum", "closed-form quantum Pi(t)");
    add_physics_flags(quantum, qa, true, false);
    add_grid_flags(quantum, qa);
    quantum->add_flag("--channels", qa.channels,
                      "emit j1,j2,cross,p12,delta columns");
    add_output_flags(quantum, qa);

    CLI::App* classical =
        app.add_subcommand("classical", "ballistic thermal baseline");
    add_physics_flags(classical, ca, false, true);
    add_grid_flags(classical, ca);
    classical->add_option("--monte-carlo", mc_draws,
                          "also sample N trajectories");
    classical->add_option("--seed", seed, "Monte Carlo seed");
    classical->add_option("--bins", bins, "Monte Carlo histogram bins");
    add_output_flags(classical, ca);

    CLI::App* geometry =
        app.add_subcommand("geometry", "3D detection scenarios");
    geometry->add_option("--scenario", scenario_flag,
                         "pi1, pi2, pi3, or pi4");
    geometry->add_option("--X", ga.X,
                         "transverse plane coordinate (pi2, pi4)");
    add_physics_flags(geometry, ga, true, false);
    add_grid_flags(geometry, ga);
    geometry->add_flag("--channels", ga.channels,
                       "emit j1,j2,cross,p12,delta columns");
    add_output_flags(geometry, ga);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "fringe statistics across a parameter");
    sweep_cmd->add_option("--param", param_flag, "d, mass, sigma0, g, or H");
    sweep_cmd->add_option("--values", values_flag,
                          "comma-separated values (units or 2x multipliers)");
    add_physics_flags(sweep_cmd, sa, true, false);
    sweep_cmd->add_option("--out", sa.out, "output prefix")->required();

    CLI::App* verify =
        app.add_subcommand("verify", "split-step self-verification");
    verify->add_flag("--quick", quick, "reduced propagation, 10x tolerances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return 2;
    }

    try {
        if (quantum->parsed()) return cmd_quantum(qa);
        if (classical->parsed()) {
            return cmd_classical(ca, classical, mc_draws, seed, bins);
        }
        if (geometry->parsed()) return cmd_geometry(ga, scenario_flag);
        if (sweep_cmd->parsed()) return cmd_sweep(sa, param_flag, values_flag);
        if (verify->parsed()) return cmd_verify(quick);
    } catch (const tof::Error& e) {
        print_error(tof::error_name(e.code()), e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("RuntimeError", e.what());
        return 2;
    }
    print_error("UsageError", "no subcommand selected");
    return 2;
}
