#include "vplat/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vplat/analysis.hpp"
#include "vplat/lattice.hpp"
#include "vplat/oracle.hpp"
#include "vplat/process.hpp"

namespace vplat {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void cfg_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path.empty() ? msg : path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) cfg_fail(path, "unknown key \"" + key + "\"");
  }
}

ProcessKind parse_kind(const std::string& s) {
  if (s == "schrodinger") return ProcessKind::Schrodinger;
  if (s == "dirac") return ProcessKind::Dirac;
  if (s == "kleingordon") return ProcessKind::KleinGordon;
  if (s == "photon") return ProcessKind::Photon;
  cfg_fail("kind", "unknown process \"" + s + "\"");
}

Branch parse_branch(const std::string& s) {
  if (s == "positive") return Branch::Positive;
  if (s == "negative") return Branch::Negative;
  if (s == "right") return Branch::Right;
  if (s == "left") return Branch::Left;
  cfg_fail("initial.branch", "unknown branch \"" + s + "\"");
}

IcSpec parse_ic(const json& obj) {
  check_keys(obj, "initial",
             {"shape", "site", "center", "width", "momentum_mode", "branch",
              "arrays"});
  IcSpec ic;
  const std::string shape = obj.value("shape", "delta");
  if (shape == "delta") {
    ic.shape = IcSpec::Shape::Delta;
  } else if (shape == "gaussian") {
    ic.shape = IcSpec::Shape::Gaussian;
  } else if (shape == "plane") {
    ic.shape = IcSpec::Shape::Plane;
  } else if (shape == "custom") {
    ic.shape = IcSpec::Shape::Custom;
  } else {
    cfg_fail("initial.shape", "unknown shape \"" + shape + "\"");
  }
  if (obj.contains("site")) ic.site = obj.at("site").get<std::size_t>();
  if (obj.contains("center")) ic.center = obj.at("center").get<double>();
  if (obj.contains("width")) {
    ic.width = obj.at("width").get<double>();
    if (!(ic.width > 0.0)) cfg_fail("initial.width", "must be positive");
  }
  if (obj.contains("momentum_mode"))
    ic.momentum_mode = obj.at("momentum_mode").get<long>();
  if (obj.contains("branch"))
    ic.branch = parse_branch(obj.at("branch").get<std::string>());
  if (obj.contains("arrays")) {
    if (ic.shape != IcSpec::Shape::Custom)
      cfg_fail("initial.arrays", "only valid with shape \"custom\"");
    ic.arrays = obj.at("arrays").get<std::vector<std::vector<double>>>();
  }
  if (ic.shape == IcSpec::Shape::Custom && ic.arrays.empty())
    cfg_fail("initial.arrays", "required for shape \"custom\"");
  return ic;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(root, "",
             {"kind", "N", "lambda", "mass", "mode", "steps", "T", "cadence",
              "k", "scaling", "initial", "ring_length", "lambda_list",
              "q_modes"});

  RunConfig cfg;
  if (!root.contains("kind")) throw ConfigError("missing key \"kind\"");
  cfg.kind = parse_kind(root.at("kind").get<std::string>());

  if (root.contains("N")) {
    cfg.n_sites = root.at("N").get<std::size_t>();
    if (cfg.n_sites < 4 || cfg.n_sites % 2 != 0)
      cfg_fail("N", "n_sites must be even and >= 4");
  }
  if (root.contains("lambda")) {
    cfg.lambda = root.at("lambda").get<double>();
    if (!(cfg.lambda > 0.0)) cfg_fail("lambda", "must be positive");
  }
  if (root.contains("mass")) {
    cfg.mass = root.at("mass").get<double>();
    if (cfg.mass < 0.0) cfg_fail("mass", "must be nonnegative");
  }
  if (cfg.kind == ProcessKind::Schrodinger && root.contains("mass") &&
      !(cfg.mass > 0.0))
    cfg_fail("mass", "schrodinger requires mass > 0");

  if (root.contains("mode")) {
    const std::string m = root.at("mode").get<std::string>();
    if (m == "float")
      cfg.mode = NumericMode::Float;
    else if (m == "integer")
      cfg.mode = NumericMode::Integer;
    else
      cfg_fail("mode", "must be \"float\" or \"integer\"");
  }

  if (root.contains("steps") && root.contains("T"))
    throw ConfigError("exactly one of \"steps\" / \"T\" may be given");
  if (root.contains("steps")) {
    cfg.has_steps = true;
    cfg.n_steps = root.at("steps").get<long>();
    if (cfg.n_steps < 0) cfg_fail("steps", "must be nonnegative");
  }
  if (root.contains("T")) {
    cfg.has_horizon = true;
    cfg.horizon = root.at("T").get<double>();
    if (!(cfg.horizon > 0.0)) cfg_fail("T", "must be positive");
  }
  if (root.contains("cadence")) {
    cfg.cadence = root.at("cadence").get<long>();
    if (cfg.cadence < 1) cfg_fail("cadence", "must be positive");
  }

  if (root.contains("scaling")) {
    const std::string s = root.at("scaling").get<std::string>();
    Scaling given;
    if (s == "diffusive")
      given = Scaling::Diffusive;
    else if (s == "ballistic")
      given = Scaling::Ballistic;
    else
      cfg_fail("scaling", "must be \"diffusive\" or \"ballistic\"");
    if (given != scaling_for(cfg.kind))
      cfg_fail("scaling",
               scaling_for(cfg.kind) == Scaling::Diffusive
                   ? "schrodinger requires diffusive scaling (tau = lambda^2)"
                   : std::string(kind_name(cfg.kind)) +
                         " requires ballistic scaling (tau = lambda)");
  }

  // k is always derived; an explicit value must agree with the formula.
  if (root.contains("k")) {
    const double k_given = root.at("k").get<double>();
    const bool needs_lambda = cfg.kind == ProcessKind::Dirac ||
                              cfg.kind == ProcessKind::KleinGordon;
    if (root.contains("mass") && (!needs_lambda || root.contains("lambda"))) {
      const double k_want = coupling_for(cfg.kind, cfg.mass, cfg.lambda);
      if (std::fabs(k_given - k_want) >
          1e-12 * std::max({std::fabs(k_given), std::fabs(k_want), 1.0})) {
        switch (cfg.kind) {
          case ProcessKind::Schrodinger: cfg_fail("k", "k != 1/(2m)");
          case ProcessKind::Dirac: cfg_fail("k", "k != m*lambda");
          case ProcessKind::KleinGordon: cfg_fail("k", "k != m^2*lambda^2");
          case ProcessKind::Photon: cfg_fail("k", "k != 0");
        }
      }
    }
  }

  if (cfg.mode == NumericMode::Integer && cfg.kind != ProcessKind::Photon) {
    const bool needs_lambda = cfg.kind != ProcessKind::Schrodinger;
    if (root.contains("mass") && (!needs_lambda || root.contains("lambda"))) {
      const double k = coupling_for(cfg.kind, cfg.mass, cfg.lambda);
      if (std::fabs(k - std::round(k)) > 1e-12 * std::max(1.0, std::fabs(k)))
        cfg_fail("mode", "integer mode requires integer k");
    }
  }

  if (root.contains("initial")) cfg.ic = parse_ic(root.at("initial"));

  if (root.contains("ring_length")) {
    cfg.ring_length = root.at("ring_length").get<double>();
    if (!(cfg.ring_length > 0.0)) cfg_fail("ring_length", "must be positive");
  }
  if (root.contains("lambda_list")) {
    cfg.lambda_list = root.at("lambda_list").get<std::vector<double>>();
    for (double l : cfg.lambda_list)
      if (!(l > 0.0)) cfg_fail("lambda_list", "entries must be positive");
  }
  if (root.contains("q_modes")) {
    cfg.q_modes = root.at("q_modes").get<std::vector<long>>();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

namespace {

LatticeSpec spec_from(const RunConfig& cfg) {
  if (cfg.n_sites == 0) throw ConfigError("missing key \"N\"");
  if (!(cfg.lambda > 0.0)) throw ConfigError("missing key \"lambda\"");
  try {
    return make_spec(cfg.kind, cfg.n_sites, cfg.lambda, cfg.mass);
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
}

InitialCondition ic_from(const IcSpec& ic, double ring_length) {
  const double p = 2.0 * kPi * static_cast<double>(ic.momentum_mode) / ring_length;
  switch (ic.shape) {
    case IcSpec::Shape::Delta:
      return DeltaPair{ic.site};
    case IcSpec::Shape::Gaussian:
      return GaussianPacket{ic.center, ic.width, p};
    case IcSpec::Shape::Plane:
      return PlaneWave{p, ic.branch};
    case IcSpec::Shape::Custom:
      return Custom{ic.arrays};
  }
  throw ConfigError("unknown initial-condition shape");
}

long resolve_steps(const RunConfig& cfg, const LatticeSpec& spec) {
  if (cfg.has_steps == cfg.has_horizon)
    throw ConfigError("exactly one of \"steps\" / \"T\" must be given");
  if (cfg.has_steps) return cfg.n_steps;
  const double steps_real = cfg.horizon / spec.tau;
  const long n = std::lround(steps_real);
  if (std::fabs(steps_real - double(n)) > 1e-9 * std::max(1.0, steps_real))
    throw ConfigError("T / tau is not an integer step count");
  return n;
}

json spec_json(const LatticeSpec& spec, ProcessKind kind, NumericMode mode) {
  json j;
  j["kind"] = std::string(kind_name(kind));
  j["N"] = spec.n_sites;
  j["lambda"] = spec.lambda;
  j["tau"] = spec.tau;
  j["k"] = spec.k;
  j["mass"] = spec.mass;
  j["scaling"] =
      spec.scaling == Scaling::Diffusive ? "diffusive" : "ballistic";
  j["mode"] = mode == NumericMode::Float ? "float" : "integer";
  return j;
}

std::vector<Species> species_of(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::Schrodinger: return {Species::A, Species::B};
    case ProcessKind::Dirac:
      return {Species::A, Species::B, Species::C, Species::D};
    case ProcessKind::KleinGordon: return {Species::A, Species::A};
    case ProcessKind::Photon: return {Species::R, Species::L};
  }
  return {};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void append_state_rows(std::string& csv, const ProcessState& st) {
  const auto species = species_of(st.kind);
  for (std::size_t f = 0; f < species.size(); ++f) {
    // the KG history level is reported as species A- (level t-1)
    const std::string name =
        st.kind == ProcessKind::KleinGordon && f == 1
            ? "A-"
            : std::string(species_name(species[f]));
    for (std::size_t s = 0; s < st.n_sites(); ++s) {
      csv += std::to_string(st.step_index);
      csv += ',';
      csv += std::to_string(s);
      csv += ',';
      csv += name;
      csv += ',';
      if (st.mode() == NumericMode::Integer)
        csv += std::to_string(st.idata().fields[f][s].v);
      else
        csv += format_double(st.fdata().fields[f][s]);
      csv += '\n';
    }
  }
}

json census_json(const StepReport& rep, ProcessKind kind) {
  json j;
  j["step"] = rep.step_index;
  j["occupied_sites"] = rep.occupied_sites;
  const auto species = species_of(kind);
  json per;
  if (rep.mode == NumericMode::Integer) {
    j["census"] = rep.census_exact();
    for (std::size_t f = 0; f < species.size(); ++f) {
      const std::string name = kind == ProcessKind::KleinGordon && f == 1
                                   ? "A-"
                                   : std::string(species_name(species[f]));
      per[name] = {{"sum", rep.site_sum_exact[f]},
                   {"abs_sum", rep.abs_sum_exact[f]}};
    }
  } else {
    j["census"] = rep.census();
    for (std::size_t f = 0; f < species.size(); ++f) {
      const std::string name = kind == ProcessKind::KleinGordon && f == 1
                                   ? "A-"
                                   : std::string(species_name(species[f]));
      per[name] = {{"sum", rep.site_sum[f]}, {"abs_sum", rep.abs_sum[f]}};
    }
  }
  j["species"] = per;
  return j;
}

ContinuumSolution solution_from(const RunConfig& cfg, double ring_length) {
  const IcSpec& ic = cfg.ic;
  const double p =
      2.0 * kPi * static_cast<double>(ic.momentum_mode) / ring_length;
  switch (cfg.kind) {
    case ProcessKind::Schrodinger:
      if (ic.shape == IcSpec::Shape::Gaussian)
        return schrodinger_gaussian(cfg.mass, p, ic.center, ic.width,
                                    ring_length);
      if (ic.shape == IcSpec::Shape::Plane)
        return schrodinger_plane_wave(cfg.mass, p);
      break;
    case ProcessKind::Dirac:
      if (ic.shape == IcSpec::Shape::Plane)
        return dirac_solution(cfg.mass, p, ic.branch);
      break;
    case ProcessKind::KleinGordon:
      if (ic.shape == IcSpec::Shape::Plane)
        return kleingordon_solution(cfg.mass, p);
      break;
    case ProcessKind::Photon: {
      if (ic.shape == IcSpec::Shape::Plane)
        return photon_solution([p](double x) { return std::cos(p * x); },
                               ic.branch == Branch::Left ? Branch::Left
                                                         : Branch::Right);
      if (ic.shape == IcSpec::Shape::Gaussian) {
        const double c = ic.center, w = ic.width, L = ring_length;
        return photon_solution(
            [c, w, p, L](double x) {
              double u = x - c;
              u -= L * std::round(u / L);
              return std::exp(-u * u / (4.0 * w * w)) * std::cos(p * (u + c));
            },
            Branch::Right);
      }
      break;
    }
  }
  throw ConfigError(
      "no continuum reference for this kind/initial-condition combination");
}

}  // namespace

int command_simulate(const RunConfig& cfg,
                     const std::filesystem::path& out_dir) {
  const LatticeSpec spec = spec_from(cfg);
  const long n_steps = resolve_steps(cfg, spec);
  ProcessState st =
      make_state(spec, cfg.kind, ic_from(cfg.ic, spec.ring_length()), cfg.mode);

  std::string csv = "t,site,species,value\n";
  append_state_rows(csv, st);
  const auto reports =
      run(st, n_steps, cfg.cadence,
          [&csv](const ProcessState& s) { append_state_rows(csv, s); });

  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", csv);

  json summary;
  summary["spec"] = spec_json(spec, cfg.kind, cfg.mode);
  summary["steps"] = n_steps;
  summary["cadence"] = cfg.cadence;
  summary["observations"] = reports.size() + 1;  // includes t = 0
  summary["final"] = census_json(census(st), cfg.kind);
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int command_census(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const LatticeSpec spec = spec_from(cfg);
  const long n_steps = resolve_steps(cfg, spec);
  ProcessState st =
      make_state(spec, cfg.kind, ic_from(cfg.ic, spec.ring_length()), cfg.mode);
  run(st, n_steps, std::max<long>(n_steps, 1));

  json summary = census_json(census(st), cfg.kind);
  summary["spec"] = spec_json(spec, cfg.kind, cfg.mode);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int command_dispersion(const RunConfig& cfg,
                       const std::filesystem::path& out_dir) {
  const LatticeSpec spec = spec_from(cfg);
  std::vector<long> modes = cfg.q_modes;
  if (modes.empty())
    for (long n = 1; n <= static_cast<long>(spec.n_sites) / 2; ++n)
      modes.push_back(n);
  std::vector<double> q_list;
  q_list.reserve(modes.size());
  for (long n : modes)
    q_list.push_back(2.0 * kPi * static_cast<double>(n) / spec.ring_length());

  const auto samples = lattice_dispersion(cfg.kind, spec, q_list);

  std::string csv = "q,branch,omega_lattice,growth,omega_continuum,deviation\n";
  for (const auto& s : samples) {
    csv += format_double(s.q);
    csv += ',';
    csv += std::to_string(s.branch);
    csv += ',';
    csv += format_double(s.omega_lattice);
    csv += ',';
    csv += format_double(s.growth);
    csv += ',';
    csv += format_double(s.omega_continuum);
    csv += ',';
    csv += format_double(s.deviation);
    csv += '\n';
  }
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "dispersion.csv", csv);

  double max_rel_dev_small_q = 0.0;
  std::size_t defective = 0;
  for (const auto& s : samples) {
    if (s.defective) ++defective;
    if (s.branch == 0 && s.q * spec.lambda <= 0.1 && s.omega_continuum != 0.0)
      max_rel_dev_small_q =
          std::max(max_rel_dev_small_q,
                   std::fabs(s.deviation / s.omega_continuum));
  }
  json summary;
  summary["spec"] = spec_json(spec, cfg.kind, cfg.mode);
  summary["modes"] = modes.size();
  summary["defective_modes"] = defective;
  summary["max_relative_deviation_qlambda_le_0.1"] = max_rel_dev_small_q;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int command_converge(const RunConfig& cfg,
                     const std::filesystem::path& out_dir) {
  if (!(cfg.ring_length > 0.0))
    throw ConfigError("converge requires \"ring_length\"");
  if (cfg.lambda_list.size() < 3)
    throw ConfigError("converge requires a \"lambda_list\" with >= 3 entries");
  if (!cfg.has_horizon) throw ConfigError("converge requires \"T\"");

  ConvergenceCase c;
  c.kind = cfg.kind;
  c.ring_length = cfg.ring_length;
  c.mass = cfg.mass;
  c.ic = ic_from(cfg.ic, cfg.ring_length);
  c.solution = solution_from(cfg, cfg.ring_length);
  c.lambdas = cfg.lambda_list;
  c.horizon = cfg.horizon;

  const ConvergenceReport rep = convergence_study(c);

  std::string csv = "lambda,error\n";
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    csv += format_double(rep.lambdas[i]);
    csv += ',';
    csv += format_double(rep.errors[i]);
    csv += '\n';
  }
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "convergence.csv", csv);

  json summary;
  summary["kind"] = std::string(kind_name(cfg.kind));
  summary["T"] = rep.horizon;
  summary["lambda"] = rep.lambdas;
  summary["error"] = rep.errors;
  summary["used_in_fit"] = rep.used;
  if (rep.exact) {
    summary["order"] = "exact";
  } else {
    summary["order"] = rep.order;
    summary["fit_residual"] = rep.fit_residual;
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int run_command(std::string_view command, const RunConfig& cfg,
                const std::filesystem::path& out_dir) {
  auto record_error = [&out_dir](const std::string& type,
                                 const std::string& msg) {
    try {
      std::filesystem::create_directories(out_dir);
      json j;
      j["error"] = msg;
      j["type"] = type;
      write_file(out_dir / "error.json", j.dump(2) + "\n");
    } catch (...) {
      // error record is best effort
    }
  };
  try {
    if (command == "simulate") return command_simulate(cfg, out_dir);
    if (command == "converge") return command_converge(cfg, out_dir);
    if (command == "dispersion") return command_dispersion(cfg, out_dir);
    if (command == "census") return command_census(cfg, out_dir);
    throw ConfigError("unknown command \"" + std::string(command) + "\"");
  } catch (const ConfigError& e) {
    record_error("config", e.what());
    return kExitConfigError;
  } catch (const SpecError& e) {
    record_error("config", e.what());
    return kExitConfigError;
  } catch (const OverflowError& e) {
    record_error("numeric", e.what());
    return kExitNumericError;
  } catch (const IoError& e) {
    record_error("io", e.what());
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    record_error("io", e.what());
    return kExitIoError;
  } catch (const std::exception& e) {
    record_error("numeric", e.what());
    return kExitNumericError;
  }
}

}  // namespace vplat
