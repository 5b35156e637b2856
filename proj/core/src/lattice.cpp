#include "vplat/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vplat/oracle.hpp"

namespace vplat {

namespace {

constexpr double kRelTol = 1e-12;

bool rel_close(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) <= kRelTol * scale;
}

[[noreturn]] void fail(const std::string& msg) { throw SpecError(msg); }

}  // namespace

Scaling scaling_for(ProcessKind kind) {
  return kind == ProcessKind::Schrodinger ? Scaling::Diffusive
                                          : Scaling::Ballistic;
}

double coupling_for(ProcessKind kind, double mass, double lambda) {
  switch (kind) {
    case ProcessKind::Schrodinger:
      if (mass <= 0.0) fail("schrodinger requires mass > 0");
      return 1.0 / (2.0 * mass);
    case ProcessKind::Dirac:
      return mass * lambda;
    case ProcessKind::KleinGordon:
      return mass * mass * lambda * lambda;
    case ProcessKind::Photon:
      return 0.0;
  }
  fail("unknown process kind");
}

LatticeSpec make_spec(ProcessKind kind, std::size_t n_sites, double lambda,
                      double mass) {
  LatticeSpec spec;
  spec.n_sites = n_sites;
  spec.lambda = lambda;
  spec.scaling = scaling_for(kind);
  spec.tau = spec.scaling == Scaling::Diffusive ? lambda * lambda : lambda;
  spec.mass = mass;
  spec.k = coupling_for(kind, mass, lambda);
  validate_spec(spec, kind);
  return spec;
}

void validate_spec(const LatticeSpec& spec, ProcessKind kind) {
  if (spec.n_sites < 4 || spec.n_sites % 2 != 0)
    fail("n_sites must be even and >= 4");
  if (!(spec.lambda > 0.0)) fail("lambda must be positive");
  if (spec.mass < 0.0) fail("mass must be nonnegative");
  if (spec.scaling != scaling_for(kind))
    fail(std::string("scaling does not match process: ") +
         std::string(kind_name(kind)) +
         (scaling_for(kind) == Scaling::Diffusive ? " requires tau/lambda^2 = 1"
                                                  : " requires tau/lambda = 1"));
  const double want_tau = spec.scaling == Scaling::Diffusive
                              ? spec.lambda * spec.lambda
                              : spec.lambda;
  if (!rel_close(spec.tau, want_tau))
    fail(spec.scaling == Scaling::Diffusive ? "tau != lambda^2"
                                            : "tau != lambda");
  const double want_k = coupling_for(kind, spec.mass, spec.lambda);
  if (!rel_close(spec.k, want_k)) {
    switch (kind) {
      case ProcessKind::Schrodinger: fail("k != 1/(2m)");
      case ProcessKind::Dirac: fail("k != m*lambda");
      case ProcessKind::KleinGordon: fail("k != m^2*lambda^2");
      case ProcessKind::Photon: fail("k != 0");
    }
  }
}

std::size_t species_index(ProcessKind kind, Species sp) {
  switch (kind) {
    case ProcessKind::Schrodinger:
      if (sp == Species::A) return 0;
      if (sp == Species::B) return 1;
      break;
    case ProcessKind::Dirac:
      if (sp == Species::A) return 0;
      if (sp == Species::B) return 1;
      if (sp == Species::C) return 2;
      if (sp == Species::D) return 3;
      break;
    case ProcessKind::KleinGordon:
      if (sp == Species::A) return 0;  // current level; previous is field 1
      break;
    case ProcessKind::Photon:
      if (sp == Species::R) return 0;
      if (sp == Species::L) return 1;
      break;
  }
  std::ostringstream os;
  os << "species " << species_name(sp) << " not present in "
     << kind_name(kind) << " process";
  throw SpecError(os.str());
}

bool is_lattice_mode(double momentum, const LatticeSpec& spec) {
  const double n = momentum * spec.ring_length() / (2.0 * std::numbers::pi);
  return std::fabs(n - std::round(n)) <= 1e-9;
}

namespace {

template <class T>
StateData<T> zero_data(ProcessKind kind, std::size_t n) {
  StateData<T> d;
  d.fields.assign(field_count(kind), std::vector<T>(n, T{}));
  return d;
}

void require_float(NumericMode mode, const char* what) {
  if (mode != NumericMode::Float)
    throw SpecError(std::string(what) +
                    " initial conditions are float-mode only");
}

}  // namespace

ProcessState make_state(const LatticeSpec& spec, ProcessKind kind,
                        const InitialCondition& ic, NumericMode mode) {
  validate_spec(spec, kind);
  const std::size_t n = spec.n_sites;
  ProcessState st;
  st.spec = spec;
  st.kind = kind;
  st.step_index = 0;
  if (mode == NumericMode::Float)
    st.data = zero_data<double>(kind, n);
  else
    st.data = zero_data<CheckedInt64>(kind, n);

  std::visit(
      [&](auto&& init) {
        using IC = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<IC, DeltaPair>) {
          if (init.site >= n) throw SpecError("delta site out of range");
          // Klein-Gordon: unit count in the current level, empty history.
          const std::size_t count =
              kind == ProcessKind::KleinGordon ? 1 : field_count(kind);
          for (std::size_t f = 0; f < count; ++f) {
            if (mode == NumericMode::Float)
              st.fdata().fields[f][init.site] = 1.0;
            else
              st.idata().fields[f][init.site] = CheckedInt64{1};
          }
        } else if constexpr (std::is_same_v<IC, GaussianPacket>) {
          require_float(mode, "gaussian");
          if (!(init.width > 0.0)) throw SpecError("gaussian width must be > 0");
          auto& fields = st.fdata().fields;
          if (kind == ProcessKind::Schrodinger) {
            auto sol = schrodinger_gaussian(spec.mass, init.momentum,
                                            init.center, init.width,
                                            spec.ring_length());
            for (std::size_t s = 0; s < n; ++s) {
              const auto v = sol(static_cast<double>(s) * spec.lambda, 0.0)[0];
              fields[0][s] = v.real();
              fields[1][s] = v.imag();
            }
          } else if (kind == ProcessKind::Photon) {
            const double ring = spec.ring_length();
            for (std::size_t s = 0; s < n; ++s) {
              const double x = static_cast<double>(s) * spec.lambda;
              double u = x - init.center;
              u -= ring * std::round(u / ring);  // periodic envelope
              fields[0][s] =
                  std::exp(-u * u / (4.0 * init.width * init.width)) *
                  std::cos(init.momentum * (u + init.center));
            }
          } else {
            throw SpecError(
                "gaussian initial condition is only defined for the "
                "schrodinger and photon processes");
          }
        } else if constexpr (std::is_same_v<IC, PlaneWave>) {
          require_float(mode, "plane-wave");
          if (!is_lattice_mode(init.momentum, spec))
            throw SpecError("plane-wave momentum is not a lattice mode");
          const double p = init.momentum;
          auto& fields = st.fdata().fields;
          switch (kind) {
            case ProcessKind::Schrodinger:
              for (std::size_t s = 0; s < n; ++s) {
                const double x = static_cast<double>(s) * spec.lambda;
                fields[0][s] = std::cos(p * x);
                fields[1][s] = std::sin(p * x);
              }
              break;
            case ProcessKind::Dirac: {
              const auto u = dirac_spinor(spec.mass, p, init.branch);
              for (std::size_t s = 0; s < n; ++s) {
                const double x = static_cast<double>(s) * spec.lambda;
                const auto phase = std::polar(1.0, p * x);
                fields[0][s] = (u[0] * phase).real();
                fields[1][s] = (u[0] * phase).imag();
                fields[2][s] = (u[1] * phase).real();
                fields[3][s] = (u[1] * phase).imag();
              }
              break;
            }
            case ProcessKind::KleinGordon: {
              const double e = std::sqrt(p * p + spec.mass * spec.mass) *
                               (init.branch == Branch::Negative ? -1.0 : 1.0);
              for (std::size_t s = 0; s < n; ++s) {
                const double x = static_cast<double>(s) * spec.lambda;
                fields[0][s] = std::cos(p * x);
                fields[1][s] = std::cos(p * x + e * spec.tau);  // t = -tau
              }
              break;
            }
            case ProcessKind::Photon: {
              const std::size_t f = init.branch == Branch::Left ? 1 : 0;
              for (std::size_t s = 0; s < n; ++s) {
                const double x = static_cast<double>(s) * spec.lambda;
                fields[f][s] = std::cos(p * x);
              }
              break;
            }
          }
        } else if constexpr (std::is_same_v<IC, Custom>) {
          if (init.arrays.size() != field_count(kind))
            throw SpecError("custom initial condition: wrong field count");
          for (const auto& arr : init.arrays)
            if (arr.size() != n)
              throw SpecError("custom initial condition: wrong array length");
          for (std::size_t f = 0; f < init.arrays.size(); ++f) {
            for (std::size_t s = 0; s < n; ++s) {
              const double v = init.arrays[f][s];
              if (mode == NumericMode::Float) {
                st.fdata().fields[f][s] = v;
              } else {
                if (v != std::floor(v) || std::fabs(v) > 9.0e18)
                  throw SpecError(
                      "integer mode requires integral custom entries");
                st.idata().fields[f][s] =
                    CheckedInt64{static_cast<std::int64_t>(v)};
              }
            }
          }
        }
      },
      ic);
  return st;
}

double site_value(const ProcessState& state, Species sp, std::size_t s) {
  const std::size_t f = species_index(state.kind, sp);
  if (s >= state.n_sites()) throw SpecError("site index out of range");
  if (state.mode() == NumericMode::Float) return state.fdata().fields[f][s];
  return static_cast<double>(state.idata().fields[f][s].v);
}

std::int64_t site_count(const ProcessState& state, Species sp, std::size_t s) {
  if (state.mode() != NumericMode::Integer)
    throw SpecError("site_count requires integer mode");
  const std::size_t f = species_index(state.kind, sp);
  if (s >= state.n_sites()) throw SpecError("site index out of range");
  return state.idata().fields[f][s].v;
}

double field_sum(const ProcessState& state, Species sp) {
  const std::size_t f = species_index(state.kind, sp);
  if (state.mode() == NumericMode::Integer)
    return static_cast<double>(field_sum_exact(state, sp));
  double total = 0.0;
  for (double v : state.fdata().fields[f]) total += v;
  return total;
}

std::int64_t field_sum_exact(const ProcessState& state, Species sp) {
  if (state.mode() != NumericMode::Integer)
    throw SpecError("field_sum_exact requires integer mode");
  const std::size_t f = species_index(state.kind, sp);
  CheckedInt64 total{0};
  for (CheckedInt64 v : state.idata().fields[f]) total += v;
  return total.v;
}

}  // namespace vplat
