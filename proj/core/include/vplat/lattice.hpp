#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "vplat/checked_int.hpp"
#include "vplat/types.hpp"

namespace vplat {

// Ring geometry and per-step coefficients, units with hbar = c = 1.
// tau and k are always derived from (kind, lambda, mass):
//   Schrodinger: tau = lambda^2, k = 1/(2 mass)      (diffusive)
//   Dirac:       tau = lambda,   k = mass * lambda   (ballistic)
//   KleinGordon: tau = lambda,   k = mass^2 lambda^2 (ballistic)
//   Photon:      tau = lambda,   k = 0               (ballistic)
struct LatticeSpec {
  std::size_t n_sites = 0;
  double lambda = 0.0;
  double tau = 0.0;
  Scaling scaling = Scaling::Ballistic;
  double k = 0.0;
  double mass = 0.0;

  double ring_length() const { return static_cast<double>(n_sites) * lambda; }
};

Scaling scaling_for(ProcessKind kind);
double coupling_for(ProcessKind kind, double mass, double lambda);

LatticeSpec make_spec(ProcessKind kind, std::size_t n_sites, double lambda,
                      double mass);

// Enforces the LatticeSpec invariants for the given process kind
// (even n_sites >= 4, scaling relation, coupling formula, mass domain).
// Throws SpecError naming the violated relation.
void validate_spec(const LatticeSpec& spec, ProcessKind kind);

template <class T>
struct StateData {
  std::vector<std::vector<T>> fields;
};

struct ProcessState {
  LatticeSpec spec;
  ProcessKind kind = ProcessKind::Photon;
  long step_index = 0;
  std::variant<StateData<double>, StateData<CheckedInt64>> data;

  NumericMode mode() const {
    return data.index() == 0 ? NumericMode::Float : NumericMode::Integer;
  }
  std::size_t n_sites() const { return spec.n_sites; }
  double time() const { return static_cast<double>(step_index) * spec.tau; }

  StateData<double>& fdata() { return std::get<0>(data); }
  const StateData<double>& fdata() const { return std::get<0>(data); }
  StateData<CheckedInt64>& idata() { return std::get<1>(data); }
  const StateData<CheckedInt64>& idata() const { return std::get<1>(data); }
};

// Unit counts at one site, in every species of the process.
struct DeltaPair {
  std::size_t site = 0;
};

// Gaussian packet exp(-(x-center)^2/(4 width^2)) with carrier momentum.
// Supported for Schrodinger (complex packet, a = Re, b = Im) and photon
// (real envelope times cos(p x) placed in the R species).
struct GaussianPacket {
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;
};

// Exact lattice mode, momentum = 2 pi n / (N lambda) for integer n.
struct PlaneWave {
  double momentum = 0.0;
  Branch branch = Branch::Positive;
};

struct Custom {
  std::vector<std::vector<double>> arrays;
};

using InitialCondition = std::variant<DeltaPair, GaussianPacket, PlaneWave, Custom>;

// Builds the state at step 0. For Klein-Gordon plane waves the t = -tau
// level is sampled from the closed-form solution; for Dirac plane waves
// the spinor is the requested energy eigenvector. Integer mode accepts
// only DeltaPair and Custom with integral entries.
ProcessState make_state(const LatticeSpec& spec, ProcessKind kind,
                        const InitialCondition& ic,
                        NumericMode mode = NumericMode::Float);

// Index of a species' site array within a state of this kind.
// Throws SpecError if the species does not belong to the process.
std::size_t species_index(ProcessKind kind, Species sp);

double site_value(const ProcessState& state, Species sp, std::size_t s);
std::int64_t site_count(const ProcessState& state, Species sp, std::size_t s);

double field_sum(const ProcessState& state, Species sp);
std::int64_t field_sum_exact(const ProcessState& state, Species sp);

// True when |p| N lambda / (2 pi) is an integer (to 1e-9 absolute).
bool is_lattice_mode(double momentum, const LatticeSpec& spec);

}  // namespace vplat
