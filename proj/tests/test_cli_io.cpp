#include <doctest.h>

#include "ohmwell/cli.hpp"
#include "ohmwell/config.hpp"
#include "ohmwell/errors.hpp"
#include "ohmwell/galerkin.hpp"
#include "ohmwell/results_io.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace ohmwell;
namespace fs = std::filesystem;

namespace {

const char* minimal_json = R"({
  "domain": {"length": 3.141592653589793},
  "modes": 2,
  "material": {"epsilon": {"kind": "constant", "value": 1.0},
               "mu": {"kind": "constant", "value": 1.0}},
  "ohm": {"kind": "zero"},
  "initial": {"e": {"kind": "modes", "coefficients": [1.0]},
              "h": {"kind": "zero"}},
  "time": {"horizon": 0.2, "dt": 0.001}
})";

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("ohmwell_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path file = dir / name;
    std::ofstream out(file, std::ios::binary);
    out << text;
    return file;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int dispatch(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"ohmwell"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string error_message(const std::string& json_text) {
    try {
        parse_config_text(json_text, "test");
    } catch (const config_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse_config_text: minimal document fills in documented defaults") {
    const auto cfg = parse_config_text(minimal_json, "test");
    CHECK(cfg.L == doctest::Approx(3.141592653589793));
    CHECK(cfg.modes == 2);
    CHECK(cfg.ohm.kind == OhmLaw::Kind::zero);
    CHECK(cfg.ohm.c1 == 0.0);
    CHECK(cfg.ohm.monotone);
    CHECK(cfg.ohm.j0.kind == SourceCurrent::Kind::zero);
    CHECK(cfg.e0.kind == InitialSpec::Kind::modes);
    CHECK(cfg.h0.kind == InitialSpec::Kind::zero);
    CHECK(cfg.time.scheme == OdeScheme::rk4);
    CHECK(cfg.time.output_stride == 10);
    CHECK(cfg.quadrature.points == 8);
    CHECK(cfg.quadrature.panels == 0);
    CHECK(cfg.output.directory.empty());
}

TEST_CASE("parse_config_text: tabulated defaults derive c1 and monotonicity from the table") {
    const char* text = R"({
      "domain": {"length": 1.0},
      "modes": 1,
      "material": {"epsilon": {"kind": "constant", "value": 1.0},
                   "mu": {"kind": "constant", "value": 1.0}},
      "ohm": {"kind": "tabulated", "table": {"r": [0.0, 1.0, 2.0], "m": [0.0, 0.5, 2.0]}},
      "initial": {"e": {"kind": "zero"}, "h": {"kind": "zero"}},
      "time": {"horizon": 1.0, "dt": 0.01}
    })";
    const auto cfg = parse_config_text(text, "test");
    CHECK(cfg.ohm.c1 == doctest::Approx(1.0));  // max(0.5/1, 2/2)
    CHECK(cfg.ohm.monotone);

    std::string falling = text;
    const auto pos = falling.find("[0.0, 0.5, 2.0]");
    falling.replace(pos, 15, "[0.0, -1.0, -2.0]");
    const auto cfg2 = parse_config_text(falling, "test");
    CHECK(cfg2.ohm.c1 == doctest::Approx(1.0));
    CHECK_FALSE(cfg2.ohm.monotone);
}

TEST_CASE("parse_config_text: failures name the offending key path") {
    std::string bad_dt = minimal_json;
    bad_dt.replace(bad_dt.find("\"dt\": 0.001"), 11, "\"dt\": 0.0");
    CHECK(contains(error_message(bad_dt), "time.dt"));

    std::string unknown = minimal_json;
    unknown.replace(unknown.find("\"modes\": 2"), 10, "\"modes\": 2, \"mode\": 3");
    CHECK(contains(error_message(unknown), "mode"));
    CHECK(contains(error_message(unknown), "unknown key"));

    std::string no_material = R"({
      "domain": {"length": 1.0},
      "modes": 1,
      "ohm": {"kind": "zero"},
      "initial": {"e": {"kind": "zero"}, "h": {"kind": "zero"}},
      "time": {"horizon": 1.0, "dt": 0.01}
    })";
    CHECK(contains(error_message(no_material), "material"));
    CHECK(contains(error_message(no_material), "missing required key"));

    // Syntax errors carry the origin and line number.
    CHECK(contains(error_message("{\n  \"domain\": {\n"), "test:"));
    CHECK(contains(error_message("{\n  \"domain\": {\n"), "syntax"));

    // sigma0 on a zero law is rejected rather than silently ignored.
    std::string stray = minimal_json;
    stray.replace(stray.find("\"kind\": \"zero\"},"), 16, "\"kind\": \"zero\", \"sigma0\": 1.0},");
    CHECK(contains(error_message(stray), "ohm.sigma0"));
}

TEST_CASE("serialize_config: canonical round trip and reorder-stable hash") {
    const auto cfg = parse_config_text(minimal_json, "test");
    const std::string canon = serialize_config(cfg);
    const auto reparsed = parse_config_text(canon, "canon");
    CHECK(serialize_config(reparsed) == canon);

    // The same document with the top-level keys permuted hashes identically.
    const char* reordered = R"({
      "time": {"horizon": 0.2, "dt": 0.001},
      "initial": {"h": {"kind": "zero"},
                  "e": {"kind": "modes", "coefficients": [1.0]}},
      "ohm": {"kind": "zero"},
      "material": {"mu": {"kind": "constant", "value": 1.0},
                   "epsilon": {"kind": "constant", "value": 1.0}},
      "modes": 2,
      "domain": {"length": 3.141592653589793}
    })";
    CHECK(config_hash(parse_config_text(reordered, "test")) == config_hash(cfg));

    auto other = cfg;
    other.time.dt = 0.002;
    CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("write_results: deterministic files that read_time_series can load back") {
    auto cfg = parse_config_text(minimal_json, "test");
    cfg.output.snapshot_times = {0.1};

    const auto res = run(cfg);
    const auto dir1 = fresh_dir("io1");
    const auto dir2 = fresh_dir("io2");
    const auto files = write_results(res, dir1);
    write_results(run(cfg), dir2);

    REQUIRE(files.size() == 4);
    CHECK(files[0] == "energy.csv");
    CHECK(files[1] == "coeffs.csv");
    CHECK(files[2] == "fields_000.csv");
    CHECK(files[3] == "manifest.json");
    for (const auto& f : files) CHECK(fs::exists(dir1 / f));

    // Rerun of the same config is byte-identical on the data files.
    for (const auto& name : {"energy.csv", "coeffs.csv", "fields_000.csv"})
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));

    const auto energy = read_time_series(dir1 / "energy.csv");
    CHECK(energy.instants() == res.times.size());
    CHECK(energy.dt == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(energy.components() == 5);  // energy, dissipation, residual, two fluxes
    CHECK(energy.values.front()[0] == doctest::Approx(res.ledger.energy.front()));

    const auto coeffs = read_time_series(dir1 / "coeffs.csv");
    CHECK(coeffs.components() == 4);  // a1, a2, b1, b2

    const auto manifest = slurp(dir1 / "manifest.json");
    CHECK(contains(manifest, config_hash(cfg)));
    CHECK(contains(manifest, "energy.csv"));
}

TEST_CASE("read_time_series: rejects malformed input with the file named") {
    const auto dir = fresh_dir("csv");

    const auto ok = write_file(dir, "ok.csv", "t,v\n0,1\n0.5,2\n1,3\n");
    const auto series = read_time_series(ok);
    CHECK(series.instants() == 3);
    CHECK(series.dt == doctest::Approx(0.5));
    CHECK(series.values[2][0] == 3.0);

    CHECK_THROWS_AS(read_time_series(write_file(dir, "ragged.csv", "0,1\n0.5\n")),
                    config_error);
    CHECK_THROWS_AS(read_time_series(write_file(dir, "jitter.csv", "0,1\n0.3,2\n1,3\n")),
                    config_error);
    CHECK_THROWS_AS(read_time_series(write_file(dir, "offset.csv", "1,1\n2,2\n")),
                    config_error);
    CHECK_THROWS_AS(read_time_series(write_file(dir, "empty.csv", "")), config_error);
    CHECK_THROWS_AS(read_time_series(dir / "no_such.csv"), config_error);
}

TEST_CASE("cli_dispatch: exit codes separate usage, config, and model failures") {
    const auto dir = fresh_dir("cli");
    const auto cavity = write_file(dir, "cavity.json", minimal_json);

    // Usage problems: 1.
    CHECK(dispatch({}) == 1);
    CHECK(dispatch({"no-such-command"}) == 1);
    CHECK(dispatch({"simulate"}) == 1);  // --config is required

    // Config problems: 1.
    CHECK(dispatch({"simulate", "--config", (dir / "missing.json").c_str()}) == 1);
    const auto broken = write_file(dir, "broken.json", "{\"domain\": {");
    CHECK(dispatch({"simulate", "--config", broken.c_str()}) == 1);

    // Healthy pipelines: 0.
    const auto out = (dir / "out").string();
    CHECK(dispatch({"simulate", "--config", cavity.c_str(), "--out", out.c_str()}) == 0);
    CHECK(fs::exists(dir / "out" / "energy.csv"));
    CHECK(dispatch({"verify-energy", "--config", cavity.c_str()}) == 0);
    CHECK(dispatch({"ode-demo", "--problem", "square-wave"}) == 0);

    const auto energy_csv = (dir / "out" / "energy.csv").string();
    CHECK(dispatch({"steklov-check", "--input", energy_csv.c_str()}) == 0);

    // Saturating law: both sampling certificates and contraction hold.
    std::string sat = minimal_json;
    sat.replace(sat.find("{\"kind\": \"zero\"},"), 17,
                "{\"kind\": \"saturating\", \"sigma0\": 1.0},");
    const auto sat_a = write_file(dir, "sat_a.json", sat);
    std::string sat_b_text = sat;
    sat_b_text.replace(sat_b_text.find("[1.0]"), 5, "[0.5]");
    const auto sat_b = write_file(dir, "sat_b.json", sat_b_text);
    CHECK(dispatch({"ohm-check", "--config", sat_a.c_str(), "--samples", "2000"}) == 0);
    CHECK(dispatch({"compare", "--config-a", sat_a.c_str(), "--config-b", sat_b.c_str()}) == 0);

    // Anti-dissipative tabulated law: the contraction gate must fail with 2.
    std::string bad = minimal_json;
    bad.replace(bad.find("{\"kind\": \"zero\"},"), 17,
                "{\"kind\": \"tabulated\", \"table\": {\"r\": [0.0, 1000.0], \"m\": [0.0, -1000.0]}},");
    const auto bad_a = write_file(dir, "bad_a.json", bad);
    std::string bad_b_text = bad;
    bad_b_text.replace(bad_b_text.find("[1.0]"), 5, "[0.5]");
    const auto bad_b = write_file(dir, "bad_b.json", bad_b_text);
    CHECK(dispatch({"compare", "--config-a", bad_a.c_str(), "--config-b", bad_b.c_str()}) == 2);
}
