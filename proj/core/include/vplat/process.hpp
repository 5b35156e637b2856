#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vplat/lattice.hpp"
#include "vplat/types.hpp"

namespace vplat {

// Census of a state: signed site sums, absolute-count totals and the
// number of sites occupied by any species. In integer mode the *_exact
// vectors carry the exact values; the double vectors are filled in both
// modes for convenience.
struct StepReport {
  long step_index = 0;
  NumericMode mode = NumericMode::Float;
  std::vector<double> site_sum;
  std::vector<double> abs_sum;
  std::vector<std::int64_t> site_sum_exact;
  std::vector<std::int64_t> abs_sum_exact;
  std::size_t occupied_sites = 0;

  double census() const;
  std::int64_t census_exact() const;
};

StepReport census(const ProcessState& state);

// One step of the kind-specific master equation. All right-hand sides are
// read from the old level; updates are never in place within a level.
void step(ProcessState& state);

// a_s <- a_s - k (b_{s-1} - 2 b_s + b_{s+1});  b_s <- b_s + k (lap a)_s
void step_schrodinger(ProcessState& state);

// a_s <- a_{s+1} + k d_s;  b_s <- b_{s+1} - k c_s;
// c_s <- c_{s-1} + k b_s;  d_s <- d_{s-1} - k a_s   (all old values)
void step_dirac(ProcessState& state);

// a_s(t+1) = a_{s+1}(t) + a_{s-1}(t) - k a_s(t) - a_s(t-1); levels rotate.
void step_kleingordon(ProcessState& state);

// r shifts one site toward +x, l one site toward -x, bit-identically.
void step_photon(ProcessState& state);

// F[a]_s = (a_{s+1} + a_{s-1} - k a_s) / 2, the map shared by the causal
// and reverse-causal half-processes. Exposed for the identity
// a(t+1) + a(t-1) = 2 F[a(t)]; as a standalone forward map it is a damped
// diffusion, not a Klein-Gordon evolution.
std::vector<double> kg_forward_branch(std::span<const double> level, double k);

// The coupling as an exact integer; throws SpecError when the spec's k is
// not integral (integer mode requires integer k).
std::int64_t exact_coupling(const LatticeSpec& spec);

// Applies the kind's stepper n_steps times. A census report is collected
// after every cadence-th step (and after the final step); the optional
// observer sees the state at the same instants.
std::vector<StepReport> run(
    ProcessState& state, long n_steps, long cadence = 1,
    const std::function<void(const ProcessState&)>& observer = {});

}  // namespace vplat
