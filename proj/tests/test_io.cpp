#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "vplat/io.hpp"

using namespace vplat;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("vplat_test_" + std::to_string(::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kCensusDemo = R"({
  "kind": "schrodinger",
  "N": 32,
  "lambda": 0.1,
  "mass": 0.5,
  "mode": "integer",
  "steps": 3,
  "initial": {"shape": "delta", "site": 8}
})";

}  // namespace

TEST_CASE("minimal photon config parses") {
  const auto cfg = parse_config(
      R"({"kind": "photon", "N": 64, "lambda": 0.1, "steps": 10})");
  CHECK(cfg.kind == ProcessKind::Photon);
  CHECK(cfg.n_sites == 64);
  CHECK(cfg.lambda == 0.1);
  CHECK(cfg.has_steps);
  CHECK(cfg.n_steps == 10);
  CHECK_FALSE(cfg.has_horizon);
  CHECK(cfg.mode == NumericMode::Float);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"kind": "photon", "N": 64, "lambda": 0.1,
                       "steps": 1, "Lambda": 2})"),
      "unknown key \"Lambda\"", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"kind": "photon", "N": 64, "lambda": 0.1, "steps": 1,
                       "initial": {"shape": "delta", "sight": 0}})"),
      "initial: unknown key \"sight\"", ConfigError);
}

TEST_CASE("constraint violations name the violated relation") {
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"kind": "schrodinger", "N": 16, "lambda": 0.1, "mass": 1.0,
              "k": 0.3, "steps": 1})"),
      "k: k != 1/(2m)", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"kind": "dirac", "N": 16, "lambda": 0.1, "mass": 1.0,
              "k": 0.2, "steps": 1})"),
      "k: k != m*lambda", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"kind": "dirac", "N": 16, "lambda": 0.1, "mass": 1.0,
              "mode": "integer", "steps": 1})"),
      "mode: integer mode requires integer k", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"kind": "schrodinger", "N": 16, "lambda": 0.1, "mass": 1.0,
              "scaling": "ballistic", "steps": 1})"),
      "scaling: schrodinger requires diffusive scaling (tau = lambda^2)",
      ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"kind": "photon", "N": 15, "lambda": 0.1, "steps": 1})"),
      "N: n_sites must be even and >= 4", ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"kind": "photon", "N": 16, "lambda": 0.1, "steps": 1, "T": 2.0})"),
      ConfigError);
  // an explicit k that agrees with the derived value is accepted
  CHECK_NOTHROW(parse_config(
      R"({"kind": "schrodinger", "N": 16, "lambda": 0.1, "mass": 1.0,
          "k": 0.5, "steps": 1})"));
}

TEST_CASE("load_config reports missing files as I/O errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("census command reproduces the walker count demo") {
  TempDir tmp;
  const auto cfg = parse_config(kCensusDemo);
  CHECK(run_command("census", cfg, tmp.path) == kExitOk);
  const json summary = json::parse(slurp(tmp.path / "summary.json"));
  CHECK(summary.at("census").get<long>() == 110);
  CHECK(summary.at("occupied_sites").get<long>() == 7);
  CHECK(summary.at("step").get<long>() == 3);
  CHECK(summary.at("species").at("A").at("abs_sum").get<long>() == 99);
  CHECK(summary.at("species").at("B").at("abs_sum").get<long>() == 11);
  // the summary is self-describing: resolved spec is embedded
  CHECK(summary.at("spec").at("k").get<double>() == 1.0);
  CHECK(summary.at("spec").at("tau").get<double>() ==
        doctest::Approx(0.01));
  // emit-then-parse round-trip reproduces identical values
  const json again = json::parse(summary.dump(2));
  CHECK(again == summary);
}

TEST_CASE("simulate output is byte-stable and fully populated") {
  TempDir a, b;
  const auto cfg = parse_config(
      R"({"kind": "photon", "N": 8, "lambda": 0.5, "steps": 10, "cadence": 2,
          "initial": {"shape": "delta", "site": 3}})");
  CHECK(run_command("simulate", cfg, a.path) == kExitOk);
  CHECK(run_command("simulate", cfg, b.path) == kExitOk);
  const std::string csv = slurp(a.path / "trajectory.csv");
  CHECK(csv == slurp(b.path / "trajectory.csv"));
  CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
  // header + (t = 0 plus 5 observations) * 8 sites * 2 species
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 6 * 8 * 2);
  CHECK(csv.rfind("t,site,species,value\n", 0) == 0);
}

TEST_CASE("dispersion command emits the documented columns") {
  TempDir tmp;
  const auto cfg = parse_config(
      R"({"kind": "dirac", "N": 64, "lambda": 0.05, "mass": 1.0,
          "steps": 1, "q_modes": [1, 2, 3, 4]})");
  CHECK(run_command("dispersion", cfg, tmp.path) == kExitOk);
  const std::string csv = slurp(tmp.path / "dispersion.csv");
  CHECK(csv.rfind("q,branch,omega_lattice,growth,omega_continuum,deviation\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 4);
  const json summary = json::parse(slurp(tmp.path / "summary.json"));
  CHECK(summary.at("modes").get<int>() == 4);
}

TEST_CASE("converge command flags the photon as exact") {
  TempDir tmp;
  const auto cfg = parse_config(
      R"({"kind": "photon", "N": 64, "lambda": 0.25, "T": 2.0,
          "ring_length": 16.0, "lambda_list": [0.25, 0.125, 0.0625],
          "initial": {"shape": "gaussian", "center": 8.0, "width": 1.0}})");
  CHECK(run_command("converge", cfg, tmp.path) == kExitOk);
  const json summary = json::parse(slurp(tmp.path / "summary.json"));
  CHECK(summary.at("order").get<std::string>() == "exact");
  const std::string csv = slurp(tmp.path / "convergence.csv");
  CHECK(csv.rfind("lambda,error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3);
}

TEST_CASE("failures map to documented exit codes and an error record") {
  TempDir tmp;
  // integer overflow mid-run -> numeric error
  auto cfg = parse_config(kCensusDemo);
  cfg.n_steps = 200;
  CHECK(run_command("census", cfg, tmp.path) == kExitNumericError);
  const json err = json::parse(slurp(tmp.path / "error.json"));
  CHECK(err.at("type").get<std::string>() == "numeric");

  // unknown command -> config error
  CHECK(run_command("summon", cfg, tmp.path) == kExitConfigError);

  // missing required block -> config error
  const auto no_ring = parse_config(
      R"({"kind": "photon", "N": 64, "lambda": 0.25, "T": 2.0,
          "lambda_list": [0.25, 0.125, 0.0625],
          "initial": {"shape": "gaussian", "center": 8.0, "width": 1.0}})");
  CHECK(run_command("converge", no_ring, tmp.path) == kExitConfigError);
}

TEST_CASE("format_double round-trips shortest decimal forms") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.0) == "-2");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(1e-300)) == 1e-300);
}
