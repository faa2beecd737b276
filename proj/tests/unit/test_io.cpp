#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "tof/io.hpp"

using namespace tof;
using tof_test::reference_config;
using tof_test::throws_code;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << body;
}

std::vector<std::string> split_lines(const std::string& body) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : body) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

TofSignal small_signal(bool with_channels) {
    const ValidatedConfig cfg = validate_config(reference_config());
    return quantum_tof(make_time_grid(0.0450, 0.0452, 4), cfg, with_channels);
}

}  // namespace

TEST_CASE("numbers are rendered with 15 significant digits") {
    CHECK(format_num(1.0) == "1.00000000000000e+00");
    CHECK(format_num(0.0) == "0.00000000000000e+00");
    CHECK(format_num(-0.0451754) == "-4.51754000000000e-02");
    CHECK(format_num(3.81754100215606e-26) == "3.81754100215606e-26");
}

TEST_CASE("unit suffixes") {
    CHECK(parse_length("1um") == 1e-6);
    CHECK(parse_length("50um") == doctest::Approx(5e-5).epsilon(1e-15));
    CHECK(parse_length("-1cm") == -0.01);
    CHECK(parse_length("2.5mm") == 2.5e-3);
    CHECK(parse_length("10nm") == 1e-8);
    CHECK(parse_length("0.01") == 0.01);
    CHECK(parse_length("3m") == 3.0);

    CHECK(parse_time("10ms") == 0.01);
    CHECK(parse_time("5us") == doctest::Approx(5e-6).epsilon(1e-15));
    CHECK(parse_time("0.045s") == 0.045);
    CHECK(parse_time("0.045") == 0.045);

    CHECK(parse_mass("1kg") == 1.0);
    CHECK(parse_mass("22.98976928amu") ==
          doctest::Approx(3.81754100215606e-26).epsilon(1e-14));
    CHECK(parse_mass("3.8e-26") == 3.8e-26);

    CHECK(parse_temperature("1uK") == 1e-6);
    CHECK(parse_temperature("2mK") == 2e-3);
    CHECK(parse_temperature("50nK") ==
          doctest::Approx(5e-8).epsilon(1e-15));
    CHECK(parse_temperature("0.001K") == 0.001);

    CHECK(parse_scalar("9.8") == 9.8);
    CHECK(parse_scalar("-3e2") == -300.0);
}

TEST_CASE("malformed quantities are usage errors") {
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_length("abc"); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_length("1kg"); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_length("1 um"); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_length(""); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_time("1um"); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_mass("1uK"); }));
    CHECK(throws_code(ErrorCode::UsageError, [] { parse_scalar("1x"); }));
}

TEST_CASE("sweep values accept multipliers and absolutes") {
    const CatConfig base = reference_config();
    CHECK(parse_sweep_value(SweepParam::separation, "2x", base) == 1e-4);
    CHECK(parse_sweep_value(SweepParam::separation, "10um", base) ==
          doctest::Approx(1e-5).epsilon(1e-15));
    CHECK(parse_sweep_value(SweepParam::mass, "4x", base) ==
          doctest::Approx(4.0 * sodium().mass).epsilon(1e-14));
    CHECK(parse_sweep_value(SweepParam::mass, "23amu", base) ==
          doctest::Approx(23.0 * constants::atomic_mass_unit).epsilon(1e-14));
    CHECK(parse_sweep_value(SweepParam::sigma0, "3um", base) == 3e-6);
    CHECK(parse_sweep_value(SweepParam::gravity, "0", base) == 0.0);
    CHECK(parse_sweep_value(SweepParam::detector, "-10cm", base) == -0.1);
    CHECK(parse_sweep_value(SweepParam::detector, "10x", base) ==
          doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(throws_code(ErrorCode::UsageError, [&] {
        parse_sweep_value(SweepParam::separation, "x", base);
    }));
}

TEST_CASE("signal csv carries metadata, header, and LF rows") {
    const std::string path = "/tmp/tof_test_signal.csv";
    write_curve_csv(path, signal_curve(small_signal(false)));
    const std::string body = slurp(path);

    CHECK(body.find('\r') == std::string::npos);
    CHECK(body.back() == '\n');

    const auto lines = split_lines(body);
    REQUIRE(lines.size() > 6);
    CHECK(lines[0] == "# schema=tof-signal-v1");
    CHECK(lines[1] == "# signal=quantum");
    CHECK(lines[2] == "# mass_kg=3.81754100215606e-26");

    std::size_t header = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].rfind("# ", 0) != 0) {
            header = i;
            break;
        }
    }
    CHECK(lines[header] == "t_s,pi_per_s");
    CHECK(lines.size() == header + 1 + 4);

    // Rows are exactly format_num renderings.
    const TofSignal sig = small_signal(false);
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(lines[header + 1 + r] ==
              format_num(sig.grid.at(r)) + "," + format_num(sig.pi[r]));
    }

    // Rewrites are byte-identical.
    write_curve_csv(path, signal_curve(small_signal(false)));
    CHECK(slurp(path) == body);
    std::remove(path.c_str());
}

TEST_CASE("channel columns appear when recorded") {
    const CurveFile bare = signal_curve(small_signal(false));
    CHECK(bare.columns ==
          std::vector<std::string>{"t_s", "pi_per_s"});
    const CurveFile full = signal_curve(small_signal(true));
    CHECK(full.columns ==
          std::vector<std::string>{"t_s", "pi_per_s", "j1", "j2", "cross",
                                   "p12", "delta"});
    REQUIRE(full.rows.size() == 4);
    CHECK(full.rows[0].size() == 7);
}

TEST_CASE("json mirror carries the same numbers as strings") {
    const std::string path = "/tmp/tof_test_signal.json";
    const CurveFile curve = signal_curve(small_signal(false));
    write_curve_json(path, curve);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j.at("meta").at("schema") == "tof-signal-v1");
    CHECK(j.at("columns").size() == 2);
    REQUIRE(j.at("rows").size() == curve.rows.size());
    for (std::size_t r = 0; r < curve.rows.size(); ++r) {
        CHECK(j.at("rows")[r][0].get<std::string>() ==
              format_num(curve.rows[r][0]));
        CHECK(j.at("rows")[r][1].get<std::string>() ==
              format_num(curve.rows[r][1]));
    }
    std::remove(path.c_str());
}

TEST_CASE("classical and histogram curves carry their parameters") {
    ThermalCloud cloud;
    cloud.particle = sodium();
    cloud.sigma0 = 1e-6;
    cloud.temperature = 1e-6;
    const TimeGrid grid = make_time_grid(0.040, 0.050, 5);
    const CurveFile curve = classical_curve(cloud, -0.01, 9.8, grid);
    bool saw_temperature = false;
    for (const auto& [k, v] : curve.meta.kv) {
        if (k == "signal") CHECK(v == "classical");
        if (k == "temperature_K") {
            saw_temperature = true;
            CHECK(v == format_num(1e-6));
        }
    }
    CHECK(saw_temperature);
    CHECK(curve.columns == std::vector<std::string>{"t_s", "pi_per_s"});
    REQUIRE(curve.rows.size() == 5);

    CHECK(throws_code(ErrorCode::NonPositiveTime, [&] {
        classical_curve(cloud, -0.01, 9.8, make_time_grid(0.0, 0.05, 5));
    }));

    const McHistogram hist =
        monte_carlo_tof(cloud, -0.01, 9.8, 100000, 11, 64, 0.040, 0.051);
    const CurveFile hc = histogram_curve(cloud, -0.01, 9.8, hist, 11);
    bool saw_seed = false, saw_ks = false;
    for (const auto& [k, v] : hc.meta.kv) {
        if (k == "signal") CHECK(v == "classical-mc");
        if (k == "seed") {
            saw_seed = true;
            CHECK(v == "11");
        }
        if (k == "ks") saw_ks = true;
    }
    CHECK(saw_seed);
    CHECK(saw_ks);
    REQUIRE(hc.rows.size() == 64);
    // Bin centers and per-draw densities.
    CHECK(hc.rows[0][0] ==
          doctest::Approx(0.040 + 0.5 * hist.bin_width()).epsilon(1e-12));
    CHECK(hc.rows[3][1] == doctest::Approx(hist.density(3)).epsilon(1e-12));
}

TEST_CASE("sweep writers emit one row per value") {
    const SweepTable table =
        sweep(reference_config(), SweepParam::separation, {1e-6, 2e-5});
    Metadata meta;
    meta.add("schema", "tof-sweep-v1");
    meta.add("param", "d");

    const std::string cpath = "/tmp/tof_test_sweep.csv";
    write_sweep_csv(cpath, table, meta);
    const auto lines = split_lines(slurp(cpath));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "# schema=tof-sweep-v1");
    CHECK(lines[1] == "# param=d");
    CHECK(lines[2] ==
          "param,value,n_maxima,n_fringes,visibility,peak_time_s,peak_per_s,"
          "mean_arrival_s,total_prob,status");
    CHECK(lines[3].rfind("d,1.00000000000000e-06,", 0) == 0);
    CHECK(lines[3].substr(lines[3].size() - 3) == ",ok");

    const std::string jpath = "/tmp/tof_test_sweep.json";
    write_sweep_json(jpath, table, meta);
    const auto j = nlohmann::json::parse(slurp(jpath));
    REQUIRE(j.at("rows").size() == 2);
    CHECK(j.at("rows")[1].at("status") == "ok");
    CHECK(j.at("rows")[1].at("n_fringes").get<std::uint64_t>() == 8);
    std::remove(cpath.c_str());
    std::remove(jpath.c_str());
}

TEST_CASE("run files reject unknown keys and contradictions") {
    const std::string path = "/tmp/tof_test_run.json";

    spit(path, R"({"sigma0": "2um", "d": "30um", "H": "-1cm",
                   "c1": 1.0, "c2": [0.5, 0.5], "seed": 7})");
    const RunFile run = load_run_file(path);
    CHECK(run.sigma0 == 2e-6);
    CHECK(*run.d == doctest::Approx(3e-5).epsilon(1e-15));
    CHECK(run.H == -0.01);
    REQUIRE(run.c1.has_value());
    CHECK(run.c1->real() == 1.0);
    CHECK(run.c1->imag() == 0.0);
    REQUIRE(run.c2.has_value());
    CHECK(run.c2->real() == 0.5);
    CHECK(run.c2->imag() == 0.5);
    CHECK(run.seed == 7);
    CHECK_FALSE(run.mass_kg.has_value());
    CHECK_FALSE(run.scenario.has_value());

    spit(path, R"({"c2": {"re": 0.3, "im": -0.4}, "mass_amu": 23})");
    const RunFile run2 = load_run_file(path);
    REQUIRE(run2.c2.has_value());
    CHECK(run2.c2->imag() == -0.4);
    CHECK(run2.mass_kg ==
          doctest::Approx(23.0 * constants::atomic_mass_unit).epsilon(1e-14));

    spit(path, R"({"mass": "3.9e-26"})");
    CHECK(load_run_file(path).mass_kg == 3.9e-26);

    spit(path, R"({"sigma": "2um"})");
    CHECK(throws_code(ErrorCode::UsageError, [&] { load_run_file(path); }));

    spit(path, R"({"mass_amu": 23, "mass": "1kg"})");
    CHECK(throws_code(ErrorCode::UsageError, [&] { load_run_file(path); }));

    spit(path, "not json");
    CHECK(throws_code(ErrorCode::UsageError, [&] { load_run_file(path); }));

    CHECK(throws_code(ErrorCode::UsageError,
                      [] { load_run_file("/tmp/tof_no_such_file.json"); }));
    std::remove(path.c_str());
}

TEST_CASE("snapshot files describe the stored state") {
    CatConfig cfg;
    cfg.particle = sodium();
    cfg.sigma0 = 2e-6;
    cfg.gravity.g = 0.0;
    const ValidatedConfig vc = validate_config(cfg);
    const Grid1D grid = make_grid1d(-1e-4, 1e-4, 1024);
    PropagateOptions opt;
    opt.snapshot_steps = {0, 4};
    const PropagationRun run = propagate(sample_state(grid, 0.0, vc), grid,
                                         vc.particle, 0.0, 1e-6, 4, opt);
    const std::string path = "/tmp/tof_test_snapshot.csv";
    write_snapshot_csv(path, run, 1);
    const auto lines = split_lines(slurp(path));
    CHECK(lines[0] == "# schema=tof-snapshot-v1");
    bool saw_step = false;
    std::size_t header = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i] == "# step=4") saw_step = true;
        if (lines[i].rfind("# ", 0) != 0) {
            header = i;
            break;
        }
    }
    CHECK(saw_step);
    CHECK(lines[header] == "z_m,re_psi,im_psi");
    CHECK(lines.size() == header + 1 + 1024);
    CHECK(throws_code(ErrorCode::UsageError,
                      [&] { write_snapshot_csv(path, run, 5); }));
    std::remove(path.c_str());
}
