#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vplat/types.hpp"

namespace vplat {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;
inline constexpr int kExitIoError = 4;

// Initial-condition description as written in a config file. Momentum is
// given as an integer mode index n; the actual momentum 2 pi n / L is
// resolved against the lattice when the command runs.
struct IcSpec {
  enum class Shape { Delta, Gaussian, Plane, Custom };
  Shape shape = Shape::Delta;
  std::size_t site = 0;
  double center = 0.0;
  double width = 1.0;
  long momentum_mode = 0;
  Branch branch = Branch::Positive;
  std::vector<std::vector<double>> arrays;
};

struct RunConfig {
  ProcessKind kind = ProcessKind::Photon;
  std::size_t n_sites = 0;
  double lambda = 0.0;
  double mass = 0.0;
  NumericMode mode = NumericMode::Float;
  bool has_steps = false;
  long n_steps = 0;
  bool has_horizon = false;
  double horizon = 0.0;
  long cadence = 1;
  IcSpec ic;
  // converge only
  double ring_length = 0.0;
  std::vector<double> lambda_list;
  // dispersion only; empty means modes 1 .. N/2
  std::vector<long> q_modes;
};

// Parses and validates the JSON run configuration. Unknown keys are
// rejected; every LatticeSpec constraint is checked here with a message
// naming the violated relation. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& file);

// Commands write their CSV outputs plus summary.json into out_dir and
// return an exit code. Output is deterministic and byte-stable for a
// fixed config.
int command_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);
int command_converge(const RunConfig& cfg, const std::filesystem::path& out_dir);
int command_dispersion(const RunConfig& cfg, const std::filesystem::path& out_dir);
int command_census(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Dispatches by command name and maps exceptions to exit codes
// (2 config, 3 numeric, 4 I/O), writing a machine-readable error record
// to out_dir/error.json on failure.
int run_command(std::string_view command, const RunConfig& cfg,
                const std::filesystem::path& out_dir);

// Shortest round-trip decimal formatting used for all CSV output.
std::string format_double(double x);

}  // namespace vplat
