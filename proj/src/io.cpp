#include "tof/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace tof {

namespace {

using ordered_json = nlohmann::ordered_json;

struct UnitTable {
    const char* quantity;
    std::vector<std::pair<std::string, double>> factors;
};

double parse_with_units(const std::string& text, const UnitTable& table) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr == begin) {
        throw Error(ErrorCode::UsageError,
                    std::string("cannot parse ") + table.quantity + " '" +
                        text + "'");
    }
    const std::string suffix(res.ptr, end);
    if (suffix.empty()) return value;  // bare number: SI unit
    for (const auto& [name, factor] : table.factors) {
        if (suffix == name) return value * factor;
    }
    throw Error(ErrorCode::UsageError,
                std::string("unknown ") + table.quantity + " unit '" + suffix +
                    "' in '" + text + "'");
}

const UnitTable length_units{
    "length",
    {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}};
const UnitTable time_units{"time", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}}};
const UnitTable mass_units{
    "mass", {{"kg", 1.0}, {"amu", constants::atomic_mass_unit}}};
const UnitTable temperature_units{
    "temperature", {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9}}};

void write_lines(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::UsageError, "cannot open '" + path +
                                               "' for writing");
    }
    out.write(body.data(), std::streamsize(body.size()));
    if (!out) {
        throw Error(ErrorCode::UsageError, "write to '" + path + "' failed");
    }
}

std::string meta_block(const Metadata& meta) {
    std::string s;
    for (const auto& [k, v] : meta.kv) {
        s += "# ";
        s += k;
        s += '=';
        s += v;
        s += '\n';
    }
    return s;
}

std::string join_row(const std::vector<double>& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ',';
        s += format_num(row[i]);
    }
    return s;
}

Metadata config_metadata(const ValidatedConfig& cfg) {
    Metadata m;
    m.add("schema", "tof-signal-v1");
    m.add("signal", "quantum");
    m.add("mass_kg", cfg.particle.mass);
    m.add("sigma0_m", cfg.sigma0);
    m.add("d_m", cfg.d);
    m.add("c1_re", cfg.c1.real());
    m.add("c1_im", cfg.c1.imag());
    m.add("c2_re", cfg.c2.real());
    m.add("c2_im", cfg.c2.imag());
    m.add("g_m_s2", cfg.gravity.g);
    m.add("detector_m", cfg.detector_H);
    m.add("hbar_J_s", cfg.hbar);
    m.add("norm", cfg.norm);
    return m;
}

Metadata cloud_metadata(const ThermalCloud& cloud, double H, double g,
                        const char* kind) {
    Metadata m;
    m.add("schema", "tof-signal-v1");
    m.add("signal", kind);
    m.add("mass_kg", cloud.particle.mass);
    m.add("sigma0_m", cloud.sigma0);
    m.add("temperature_K", cloud.temperature);
    m.add("sigma_v_m_s", sigma_v(cloud));
    m.add("g_m_s2", g);
    m.add("detector_m", H);
    return m;
}

}  // namespace

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", v);
    return buf;
}

double parse_length(const std::string& text) {
    return parse_with_units(text, length_units);
}

double parse_time(const std::string& text) {
    return parse_with_units(text, time_units);
}

double parse_mass(const std::string& text) {
    return parse_with_units(text, mass_units);
}

double parse_temperature(const std::string& text) {
    return parse_with_units(text, temperature_units);
}

double parse_scalar(const std::string& text) {
    return parse_with_units(text, UnitTable{"number", {}});
}

double parse_sweep_value(SweepParam param, const std::string& text,
                         const CatConfig& base) {
    if (!text.empty() && text.back() == 'x') {
        const double mult = parse_scalar(text.substr(0, text.size() - 1));
        switch (param) {
            case SweepParam::separation: return mult * base.d;
            case SweepParam::mass: return mult * base.particle.mass;
            case SweepParam::sigma0: return mult * base.sigma0;
            case SweepParam::gravity: return mult * base.gravity.g;
            case SweepParam::detector: return mult * base.detector_H;
        }
    }
    switch (param) {
        case SweepParam::separation:
        case SweepParam::sigma0:
        case SweepParam::detector:
            return parse_length(text);
        case SweepParam::mass:
            return parse_mass(text);
        case SweepParam::gravity:
            return parse_scalar(text);
    }
    throw Error(ErrorCode::UsageError, "unreachable sweep parameter");
}

void Metadata::add(const std::string& key, const std::string& value) {
    kv.emplace_back(key, value);
}

void Metadata::add(const std::string& key, double value) {
    kv.emplace_back(key, format_num(value));
}

void Metadata::add(const std::string& key, std::uint64_t value) {
    kv.emplace_back(key, std::to_string(value));
}

CurveFile signal_curve(const TofSignal& sig) {
    CurveFile c;
    c.meta = config_metadata(sig.config);
    c.meta.add("t_start_s", sig.grid.t_start);
    c.meta.add("t_end_s", sig.grid.t_end);
    c.meta.add("n_samples", std::uint64_t(sig.grid.n_samples));
    c.meta.add("channels", std::uint64_t(sig.has_channels ? 1 : 0));

    c.columns = {"t_s", "pi_per_s"};
    if (sig.has_channels) {
        const char* extra[] = {"j1", "j2", "cross", "p12", "delta"};
        c.columns.insert(c.columns.end(), std::begin(extra), std::end(extra));
    }
    c.rows.reserve(sig.pi.size());
    for (std::size_t i = 0; i < sig.pi.size(); ++i) {
        std::vector<double> row{sig.grid.at(i), sig.pi[i]};
        if (sig.has_channels) {
            const CurrentBreakdown& b = sig.channels[i];
            row.insert(row.end(), {b.j1, b.j2, b.cross, b.p12, b.delta});
        }
        c.rows.push_back(std::move(row));
    }
    return c;
}

CurveFile classical_curve(const ThermalCloud& cloud, double H, double g,
                          const TimeGrid& grid) {
    if (!(grid.t_start > 0.0)) {
        throw Error(ErrorCode::NonPositiveTime,
                    "classical curve needs t_start > 0");
    }
    CurveFile c;
    c.meta = cloud_metadata(cloud, H, g, "classical");
    c.meta.add("t_start_s", grid.t_start);
    c.meta.add("t_end_s", grid.t_end);
    c.meta.add("n_samples", std::uint64_t(grid.n_samples));
    c.columns = {"t_s", "pi_per_s"};
    c.rows.reserve(grid.n_samples);
    for (std::size_t i = 0; i < grid.n_samples; ++i) {
        const double t = grid.at(i);
        c.rows.push_back({t, classical_distribution(t, H, cloud, g)});
    }
    return c;
}

CurveFile histogram_curve(const ThermalCloud& cloud, double H, double g,
                          const McHistogram& hist, std::uint64_t seed) {
    CurveFile c;
    c.meta = cloud_metadata(cloud, H, g, "classical-mc");
    c.meta.add("t_lo_s", hist.t_lo);
    c.meta.add("t_hi_s", hist.t_hi);
    c.meta.add("n_bins", std::uint64_t(hist.counts.size()));
    c.meta.add("seed", seed);
    c.meta.add("n_draws", hist.n_total);
    c.meta.add("n_arrived", hist.n_arrived);
    c.meta.add("n_no_arrival", hist.n_no_arrival);
    c.meta.add("n_below", hist.n_below);
    c.meta.add("n_above", hist.n_above);
    c.meta.add("ks", hist.ks);
    c.columns = {"t_s", "pi_per_s"};
    const double w = hist.bin_width();
    c.rows.reserve(hist.counts.size());
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        c.rows.push_back(
            {hist.t_lo + (double(b) + 0.5) * w, hist.density(b)});
    }
    return c;
}

void write_curve_csv(const std::string& path, const CurveFile& curve) {
    std::string body = meta_block(curve.meta);
    for (std::size_t i = 0; i < curve.columns.size(); ++i) {
        if (i) body += ',';
        body += curve.columns[i];
    }
    body += '\n';
    for (const auto& row : curve.rows) {
        body += join_row(row);
        body += '\n';
    }
    write_lines(path, body);
}

void write_curve_json(const std::string& path, const CurveFile& curve) {
    ordered_json j;
    ordered_json meta;
    for (const auto& [k, v] : curve.meta.kv) meta[k] = v;
    j["meta"] = meta;
    j["columns"] = curve.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : curve.rows) {
        ordered_json r = ordered_json::array();
        for (const double v : row) r.push_back(format_num(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    write_lines(path, j.dump(2) + "\n");
}

namespace {

std::string sweep_cell_u(bool ok, std::size_t v) {
    return ok ? std::to_string(v) : "nan";
}

std::string sweep_cell_d(bool ok, double v) {
    return ok ? format_num(v) : "nan";
}

}  // namespace

void write_sweep_csv(const std::string& path, const SweepTable& table,
                     const Metadata& meta) {
    std::string body = meta_block(meta);
    body +=
        "param,value,n_maxima,n_fringes,visibility,peak_time_s,peak_per_s,"
        "mean_arrival_s,total_prob,status\n";
    for (const auto& r : table.rows) {
        const FringeReport& f = r.report;
        body += sweep_param_name(table.param);
        body += ',';
        body += format_num(r.value);
        body += ',';
        body += sweep_cell_u(r.ok, f.n_maxima);
        body += ',';
        body += sweep_cell_u(r.ok, f.n_fringes);
        body += ',';
        body += sweep_cell_d(r.ok, f.visibility);
        body += ',';
        body += sweep_cell_d(r.ok, f.peak_time);
        body += ',';
        body += sweep_cell_d(r.ok, f.peak_value);
        body += ',';
        body += sweep_cell_d(r.ok, f.mean_arrival);
        body += ',';
        body += sweep_cell_d(r.ok, f.total_prob);
        body += ',';
        body += r.ok ? "ok" : r.error;
        body += '\n';
    }
    write_lines(path, body);
}

void write_sweep_json(const std::string& path, const SweepTable& table,
                      const Metadata& meta) {
    ordered_json j;
    ordered_json m;
    for (const auto& [k, v] : meta.kv) m[k] = v;
    j["meta"] = m;
    j["param"] = sweep_param_name(table.param);
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        ordered_json row;
        row["value"] = format_num(r.value);
        row["status"] = r.ok ? "ok" : r.error;
        if (r.ok) {
            const FringeReport& f = r.report;
            row["n_maxima"] = f.n_maxima;
            row["n_fringes"] = f.n_fringes;
            row["visibility"] = format_num(f.visibility);
            row["peak_time_s"] = format_num(f.peak_time);
            row["peak_per_s"] = format_num(f.peak_value);
            row["mean_arrival_s"] = format_num(f.mean_arrival);
            row["total_prob"] = format_num(f.total_prob);
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = rows;
    write_lines(path, j.dump(2) + "\n");
}

void write_snapshot_csv(const std::string& path, const PropagationRun& run,
                        std::size_t snapshot_index) {
    if (snapshot_index >= run.snapshots.size()) {
        throw Error(ErrorCode::UsageError, "snapshot index out of range");
    }
    const Snapshot& s = run.snapshots[snapshot_index];
    Metadata m;
    m.add("schema", "tof-snapshot-v1");
    m.add("mass_kg", run.particle.mass);
    m.add("g_m_s2", run.g);
    m.add("z_min_m", run.grid.z_min);
    m.add("z_max_m", run.grid.z_max);
    m.add("n_points", std::uint64_t(run.grid.n_points));
    m.add("dt_s", run.dt);
    m.add("step", std::uint64_t(s.step));
    m.add("t_s", double(s.step) * run.dt);

    std::string body = meta_block(m);
    body += "z_m,re_psi,im_psi\n";
    for (std::size_t i = 0; i < s.psi.size(); ++i) {
        body += format_num(run.grid.z_at(i));
        body += ',';
        body += format_num(s.psi[i].real());
        body += ',';
        body += format_num(s.psi[i].imag());
        body += '\n';
    }
    write_lines(path, body);
}

namespace {

double quantity_field(const ordered_json& v, const char* key,
                      double (*parser)(const std::string&)) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parser(v.get<std::string>());
    throw Error(ErrorCode::UsageError,
                std::string("config key '") + key +
                    "' must be a number or a unit-suffixed string");
}

std::complex<double> complex_field(const ordered_json& v, const char* key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() &&
        v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_object() && v.contains("re") && v.contains("im") &&
        v.size() == 2) {
        return {v["re"].get<double>(), v["im"].get<double>()};
    }
    throw Error(ErrorCode::UsageError,
                std::string("config key '") + key +
                    "' must be a number, [re, im], or {\"re\":..,\"im\":..}");
}

std::uint64_t uint_field(const ordered_json& v, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return std::uint64_t(v.get<std::int64_t>());
    }
    throw Error(ErrorCode::UsageError, std::string("config key '") + key +
                                           "' must be a nonnegative integer");
}

}  // namespace

RunFile load_run_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::UsageError,
                    "cannot open config file '" + path + "'");
    }
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::UsageError,
                    "config file '" + path + "' is not valid JSON: " +
                        e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::UsageError,
                    "config file must hold a JSON object");
    }

    static const std::set<std::string> known{
        "mass_amu", "mass",        "sigma0", "d",      "H",
        "X",        "g",           "c1",     "c2",     "temperature",
        "t_start",  "t_end",       "t_samples", "channels", "scenario",
        "param",    "values",      "monte_carlo", "seed", "bins",
        "out",      "format"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw Error(ErrorCode::UsageError,
                        "unknown config key '" + key + "'");
        }
        (void)value;
    }
    if (j.contains("mass_amu") && j.contains("mass")) {
        throw Error(ErrorCode::UsageError,
                    "config may set either mass_amu or mass, not both");
    }

    RunFile f;
    if (j.contains("mass_amu")) {
        if (!j["mass_amu"].is_number()) {
            throw Error(ErrorCode::UsageError, "mass_amu must be a number");
        }
        f.mass_kg = j["mass_amu"].get<double>() * constants::atomic_mass_unit;
    }
    if (j.contains("mass")) {
        f.mass_kg = quantity_field(j["mass"], "mass", parse_mass);
    }
    if (j.contains("sigma0")) {
        f.sigma0 = quantity_field(j["sigma0"], "sigma0", parse_length);
    }
    if (j.contains("d")) f.d = quantity_field(j["d"], "d", parse_length);
    if (j.contains("H")) f.H = quantity_field(j["H"], "H", parse_length);
    if (j.contains("X")) f.X = quantity_field(j["X"], "X", parse_length);
    if (j.contains("g")) f.g = quantity_field(j["g"], "g", parse_scalar);
    if (j.contains("c1")) f.c1 = complex_field(j["c1"], "c1");
    if (j.contains("c2")) f.c2 = complex_field(j["c2"], "c2");
    if (j.contains("temperature")) {
        f.temperature =
            quantity_field(j["temperature"], "temperature", parse_temperature);
    }
    if (j.contains("t_start")) {
        f.t_start = quantity_field(j["t_start"], "t_start", parse_time);
    }
    if (j.contains("t_end")) {
        f.t_end = quantity_field(j["t_end"], "t_end", parse_time);
    }
    if (j.contains("t_samples")) {
        f.t_samples = uint_field(j["t_samples"], "t_samples");
    }
    if (j.contains("channels")) {
        if (!j["channels"].is_boolean()) {
            throw Error(ErrorCode::UsageError, "channels must be a boolean");
        }
        f.channels = j["channels"].get<bool>();
    }
    if (j.contains("scenario")) {
        f.scenario = j["scenario"].get<std::string>();
    }
    if (j.contains("param")) f.param = j["param"].get<std::string>();
    if (j.contains("values")) {
        if (!j["values"].is_array()) {
            throw Error(ErrorCode::UsageError, "values must be an array");
        }
        std::vector<std::string> vals;
        for (const auto& v : j["values"]) {
            if (v.is_string()) {
                vals.push_back(v.get<std::string>());
            } else if (v.is_number()) {
                vals.push_back(v.dump());
            } else {
                throw Error(ErrorCode::UsageError,
                            "values entries must be strings or numbers");
            }
        }
        f.values = std::move(vals);
    }
    if (j.contains("monte_carlo")) {
        f.monte_carlo = uint_field(j["monte_carlo"], "monte_carlo");
    }
    if (j.contains("seed")) f.seed = uint_field(j["seed"], "seed");
    if (j.contains("bins")) f.bins = uint_field(j["bins"], "bins");
    if (j.contains("out")) f.out = j["out"].get<std::string>();
    if (j.contains("format")) f.format = j["format"].get<std::string>();
    return f;
}

}  // namespace tof
