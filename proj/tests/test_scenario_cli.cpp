#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qheat/cli.hpp"
#include "qheat/errors.hpp"
#include "qheat/scenario.hpp"

using namespace qheat;
namespace fs = std::filesystem;

namespace {

const fs::path scenarios = QHEAT_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qheat_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  double at(std::size_t row, const std::string& column) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j] == column) {
        return std::stod(rows.at(row).at(j));
      }
    }
    throw std::runtime_error("no column " + column);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    out.push_back(cell);
  }
  return out;
}

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  Table t;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("#")) {
      t.comments.push_back(line);
    } else if (t.columns.empty()) {
      t.columns = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Run run(F command, const cli::Options& o) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = command(o, out, err);
  return {code, out.str(), err.str()};
}

cli::Options with(const std::string& scenario, const fs::path& out) {
  cli::Options o;
  o.scenario = scenarios / scenario;
  o.out = out;
  return o;
}

}  // namespace

TEST_CASE("grid syntax") {
  const auto g = Grid::parse("1:3:5");
  CHECK(g.points() == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
  CHECK(Grid::parse("2:2:1").points() == std::vector<double>{2.0});
  CHECK_THROWS_AS(Grid::parse("1:3:0"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("1:3"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("a:3:4"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("1:3:-4"), ConfigError);
  CHECK_THROWS_AS(Grid::parse(""), ConfigError);
}

TEST_CASE("scenario parsing") {
  SUBCASE("all bath kinds") {
    const auto s = parse_scenario(R"(
baths:
  t: {type: thermal, temperature: 2, coupling: {power: {value: 1, exponent: 1}}}
  p: {type: population, coupling: 1, occupation: {table: {x: [0, 10], y: [1, 0.5]}}}
  f: {type: filtered, inner: t, filter: {notch: {center: 1, width: 0.2, depth: 0.9}}}
  d: {type: displaced, coupling: 1, z2: 0.3}
  s: {type: squeezed_thermal, coupling: 1, temperature: 1, squeezing: 0.2}
  c: {type: composite, parts: [t, {type: thermal, temperature: 1, coupling: 0.5}]}
)");
    CHECK(s.baths.size() == 6);
    CHECK(s.bath("f").kind() == BathKind::Filtered);
    CHECK(s.bath("c").kind() == BathKind::Composite);
    CHECK_FALSE(s.tls);
    CHECK_FALSE(s.floquet);
    CHECK(s.spectrum_baths.size() == 6);
    CHECK_THROWS_AS(s.bath("nope"), ConfigError);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_scenario("baths: {t: {type: thermal, temperature: 1, coupling: 1, extra: 2}}"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario("baths: {t: {type: lukewarm}}"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("baths: {t: {type: thermal, temperature: -1, coupling: 1}}"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario("baths: {f: {type: filtered, inner: ghost, filter: 1}}"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("baths: [1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("colour: red"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"(
baths: {t: {type: thermal, temperature: 1, coupling: 1}}
machine: {kind: tls, omega0: 1, modulation: {Omega: 0.3}, baths: [u]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"(
baths: {t: {type: thermal, temperature: 1, coupling: 1}}
machine: {kind: floquet, dimension: 2, Omega: 1, hamiltonian: [{m: 0, matrix: [[0, 1], [0, 0]]}],
          couplings: [{operator: [[0, 1], [1, 0]], bath: t}]})"),
                    ConfigError);
    CHECK_THROWS_AS(load_scenario(scenarios / "missing.yaml"), ConfigError);
  }
  SUBCASE("floquet machine with complex entries and completed harmonics") {
    const auto s = parse_scenario(R"(
baths: {t: {type: thermal, temperature: 1, coupling: 1}}
machine:
  kind: floquet
  dimension: 2
  Omega: 1.5
  hamiltonian:
    - {m: 0, matrix: [[0.5, 0], [0, -0.5]]}
    - {m: 1, matrix: [[0, [0.1, 0.2]], [0, 0]]}
  couplings: [{operator: [[0, 1], [1, 0]], bath: t}]
)");
    REQUIRE(s.floquet);
    const auto& terms = s.floquet->hamiltonian.terms();
    REQUIRE(terms.count(-1) == 1);
    CHECK(terms.at(-1)(1, 0) == Complex(0.1, -0.2));
    CHECK(s.couplings().size() == 1);
    CHECK(s.couplings()[0].label == "t");
  }
  SUBCASE("hash is content based") {
    const std::string text = "baths: {t: {type: thermal, temperature: 1, coupling: 1}}\n";
    CHECK(parse_scenario(text).hash == parse_scenario(text).hash);
    CHECK(parse_scenario(text).hash != parse_scenario(text + "# comment\n").hash);
    CHECK(parse_scenario(text).hash_hex().size() == 16);
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  }
  SUBCASE("shipped scenarios load") {
    for (const auto& entry : fs::directory_iterator(scenarios)) {
      if (entry.path().extension() == ".yaml") {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_scenario(entry.path()));
      }
    }
  }
}

TEST_CASE("spectrum command") {
  const auto dir = scratch("spectrum");
  auto o = with("sunlight.yaml", dir);
  const auto r = run(cli::run_spectrum, o);
  REQUIRE(r.code == 0);
  const auto thermal = read_csv(dir / "spectrum_blackbody.csv");
  const auto sun = read_csv(dir / "spectrum_sunlight.csv");
  CHECK(thermal.columns == std::vector<std::string>{"omega", "G_plus", "G_minus", "T_B", "f"});
  CHECK(sun.rows.size() == 300);
  bool hash = false;
  bool units = false;
  for (const auto& c : sun.comments) {
    hash = hash || c.starts_with("# scenario hash (fnv1a64): ");
    units = units || (c.starts_with("# units:") && c.find("K") != std::string::npos);
  }
  CHECK(hash);
  CHECK(units);
  for (std::size_t i = 0; i < thermal.rows.size(); ++i) {
    CHECK(thermal.at(i, "T_B") == doctest::Approx(6000.0).epsilon(1e-9));
    if (i > 0) {
      CHECK(sun.at(i, "T_B") > sun.at(i - 1, "T_B"));
    }
  }

  o.grid = "1e-4:11600:2";
  REQUIRE(run(cli::run_spectrum, o).code == 0);
  const auto two = read_csv(dir / "spectrum_sunlight.csv");
  CHECK(two.at(0, "T_B") == doctest::Approx(0.15).epsilon(1e-3));
  CHECK(std::abs(two.at(1, "T_B") - 937.5) < 0.5);

  o.grid = "0:10:3";  // omega = 0 is not a valid channel
  CHECK(run(cli::run_spectrum, o).code == 2);
  o.grid = "1:10:0";
  CHECK(run(cli::run_spectrum, o).code == 2);
  o.grid = "bad";
  CHECK(run(cli::run_spectrum, o).code == 2);
  CHECK(run(cli::run_spectrum, cli::Options{}).code == 2);
}

TEST_CASE("spectrum marks undefined local temperatures") {
  const auto dir = scratch("spectrum_nan");
  std::ofstream(dir / "holes.yaml") << R"(
baths:
  gap: {type: thermal, temperature: 1, coupling: {band: {lo: 1, hi: 2}}}
spectrum: {grid: "0.5:2.5:5"}
)";
  cli::Options o;
  o.scenario = dir / "holes.yaml";
  o.out = dir;
  const auto r = run(cli::run_spectrum, o);
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  const auto t = read_csv(dir / "spectrum_gap.csv");
  CHECK(std::isnan(t.at(0, "T_B")));
  CHECK(t.at(2, "T_B") == doctest::Approx(1.0));
}

TEST_CASE("tls command") {
  SUBCASE("equilibrium") {
    const auto dir = scratch("tls_eq");
    const auto r = run(cli::run_tls, with("equilibrium.yaml", dir));
    REQUIRE(r.code == 0);
    const auto sum = read_csv(dir / "tls_summary.csv");
    CHECK(std::abs(sum.at(0, "P")) < 1e-12);
    CHECK(sum.rows[0].back() == "n/a");
  }
  SUBCASE("notch engine") {
    const auto dir = scratch("tls_notch");
    REQUIRE(run(cli::run_tls, with("notch_engine.yaml", dir)).code == 0);
    const auto sum = read_csv(dir / "tls_summary.csv");
    CHECK(sum.at(0, "P") < 0.0);
    CHECK(sum.at(0, "eta") <= sum.at(0, "bound") + 1e-9);
    CHECK(sum.rows[0].back() == "pass");
    CHECK(read_csv(dir / "tls_channels.csv").rows.size() == 2);
  }
  SUBCASE("two-bath engine with sweep") {
    const auto dir = scratch("tls_two");
    REQUIRE(run(cli::run_tls, with("two_bath_engine.yaml", dir)).code == 0);
    const auto sum = read_csv(dir / "tls_summary.csv");
    CHECK(sum.at(0, "eta") == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(sum.at(0, "eta") <= 1.0 - 0.5 / 3.0);
    const auto sweep = read_csv(dir / "tls_sweep.csv");
    REQUIRE(sweep.rows.size() == 19);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
      const double omega = sweep.at(i, "Omega");
      if (sweep.at(i, "P") < 0.0) {
        CHECK(sweep.at(i, "eta") == doctest::Approx(1.0 - (2.0 - omega) / (2.0 + omega)).epsilon(1e-9));
      }
    }
    // identical inputs give identical bytes
    const auto again = scratch("tls_two_again");
    REQUIRE(run(cli::run_tls, with("two_bath_engine.yaml", again)).code == 0);
    CHECK(slurp(dir / "tls_sweep.csv") == slurp(again / "tls_sweep.csv"));
    CHECK(slurp(dir / "tls_channels.csv") == slurp(again / "tls_channels.csv"));
  }
  SUBCASE("regime errors") {
    const auto dir = scratch("tls_regime");
    std::ofstream(dir / "lonely.yaml") << R"(
baths: {b: {type: thermal, temperature: 1, coupling: {band: {lo: 5, hi: 6}}}}
machine: {kind: tls, omega0: 1, modulation: {Omega: 3, weights: {0: 0.5, 1: 0.5}}, baths: [b]}
)";
    cli::Options o;
    o.scenario = dir / "lonely.yaml";
    o.out = dir;
    const auto r = run(cli::run_tls, o);
    CHECK(r.code == 3);
    CHECK(run(cli::run_tls, with("three_level.yaml", dir)).code == 2);
  }
}

TEST_CASE("floquet command") {
  SUBCASE("matches the TLS formulation") {
    const auto dir = scratch("floquet_tls");
    const auto tls_dir = scratch("floquet_tls_ref");
    REQUIRE(run(cli::run_floquet, with("tls_floquet.yaml", dir)).code == 0);
    REQUIRE(run(cli::run_tls, with("tls_modulated.yaml", tls_dir)).code == 0);
    const auto fs_ = read_csv(dir / "floquet_summary.csv");
    const auto ts = read_csv(tls_dir / "tls_summary.csv");
    CHECK(std::abs(fs_.at(0, "P") - ts.at(0, "P")) < 1e-6);
    const auto fc = read_csv(dir / "floquet_channels.csv");
    const auto tc = read_csv(tls_dir / "tls_channels.csv");
    for (std::size_t i = 0; i < tc.rows.size(); ++i) {
      double matched = 0.0;
      for (std::size_t j = 0; j < fc.rows.size(); ++j) {
        if (fc.rows[j][0] == tc.rows[i][0] &&
            std::abs(std::abs(fc.at(j, "omega")) - std::abs(tc.at(i, "omega_q"))) < 1e-9) {
          matched += fc.at(j, "J");
        }
      }
      CHECK(std::abs(matched - tc.at(i, "J")) < 1e-6);
    }
  }
  SUBCASE("three-level maser") {
    const auto dir = scratch("floquet_3");
    const auto r = run(cli::run_floquet, with("three_level.yaml", dir));
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    const auto laws = slurp(dir / "floquet_laws.txt");
    CHECK(laws.find("FAIL") == std::string::npos);
    CHECK(laws.find("PASS second law") != std::string::npos);
    CHECK(read_csv(dir / "floquet_summary.csv").at(0, "P") < 0.0);
  }
  SUBCASE("overrides and failures") {
    const auto dir = scratch("floquet_bad");
    CHECK(run(cli::run_floquet, with("zero_coupling.yaml", dir)).code == 4);
    CHECK(run(cli::run_floquet, with("notch_engine.yaml", dir)).code == 2);
    auto o = with("tls_floquet.yaml", dir);
    o.samples = 100;
    CHECK(run(cli::run_floquet, o).code == 2);
    o.samples = 256;
    o.q_max = 200;
    CHECK(run(cli::run_floquet, o).code == 2);
  }
}

TEST_CASE("verify command") {
  cli::Options o;
  o.count = 10;
  auto r = run(cli::run_verify, o);
  CHECK(r.code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(r.out.find("all suites passed") != std::string::npos);
  CHECK(run(cli::run_verify, o).out == r.out);

  o.inject_fault = "rate-sign";
  r = run(cli::run_verify, o);
  CHECK(r.code == 1);
  CHECK(r.out.find("Spohn violation") != std::string::npos);

  o.inject_fault = "gremlins";
  CHECK(run(cli::run_verify, o).code == 2);
  o.inject_fault.clear();
  o.count = 0;
  CHECK(run(cli::run_verify, o).code == 2);

  o.count = 3;
  o.scenario = scenarios / "three_level.yaml";
  r = run(cli::run_verify, o);
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] scenario law checks") != std::string::npos);
}
