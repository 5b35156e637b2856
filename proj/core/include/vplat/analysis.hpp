#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vplat/lattice.hpp"
#include "vplat/oracle.hpp"
#include "vplat/process.hpp"
#include "vplat/types.hpp"

namespace vplat {

using complexd = std::complex<double>;

// 2x2 complex matrix, row major.
struct Mat2 {
  std::array<complexd, 4> m{};
  complexd& operator()(int r, int c) { return m[2 * r + c]; }
  const complexd& operator()(int r, int c) const { return m[2 * r + c]; }
};

// Exact one-step update matrix on the Fourier coefficients of mode q:
//   Schrodinger (a^, b^):      [[1, k mu], [-k mu, 1]], mu = 4 sin^2(q l/2)
//   Dirac (psi1^, psi2^):      [[e^{iql}, -ik], [-ik, e^{-iql}]]
//   KleinGordon (a^_t, a^_{t-1}) companion: [[2 cos(ql) - k, -1], [1, 0]]
//   Photon (r^, l^):           diag(e^{-iql}, e^{+iql})
Mat2 mode_matrix(ProcessKind kind, const LatticeSpec& spec, double q);

struct Eig2 {
  std::array<complexd, 2> values{};
  bool defective = false;  // repeated eigenvalue without full eigenspace
};
Eig2 eigenvalues_2x2(const Mat2& m);

struct DispersionSample {
  double q = 0.0;
  int branch = 0;  // 0 = matched to +omega_continuum, 1 = opposite branch
  double omega_lattice = 0.0;   // -arg(eigenvalue)/tau, e^{-i omega tau}
  double growth = 1.0;          // |eigenvalue|
  double omega_continuum = 0.0; // signed, per branch
  double deviation = 0.0;       // omega_lattice - omega_continuum
  bool defective = false;
};

// Eigen-decomposes mode_matrix per q. Branches are matched to the
// continuum by phase at the smallest |q| and tracked by continuity along
// the (ascending) q list. Defective matrices (KG band edges) are flagged,
// not fatal.
std::vector<DispersionSample> lattice_dispersion(ProcessKind kind,
                                                 const LatticeSpec& spec,
                                                 std::span<const double> q_list);

// sqrt(lambda sum_s |assembled_field(s) - solution(s lambda, time)|^2)
// over all components, with the standard complex assemblies
// (psi = a + ib, psi1/psi2, current KG level, (r, l)).
double l2_error(const ProcessState& state, const ContinuumSolution& solution,
                double time);

struct ConvergenceCase {
  ProcessKind kind = ProcessKind::Photon;
  double ring_length = 0.0;
  double mass = 0.0;
  InitialCondition ic;
  ContinuumSolution solution;
  std::vector<double> lambdas;
  double horizon = 0.0;
};

struct ConvergenceReport {
  ProcessKind kind = ProcessKind::Photon;
  double horizon = 0.0;
  std::vector<double> lambdas;
  std::vector<double> errors;
  std::vector<bool> used;  // point entered the fit
  double order = 0.0;
  double fit_residual = 0.0;
  bool exact = false;  // all errors at the floor; no order fitted
};

// Runs each resolution to the fixed physical horizon, records the L2
// error and fits log(error) against log(lambda). Points with error below
// 1e-13 are skipped; resolutions violating the Schrodinger growth bound
// (accumulated top-band amplification above 1e6 * machine epsilon
// relative to the signal) are excluded from the fit.
ConvergenceReport convergence_study(const ConvergenceCase& c);

// Circular mean of the |field|^2 intensity on the ring. resultant is the
// magnitude of the mean phasor; near zero the angle is ill-defined.
struct CenterSample {
  double angle = 0.0;  // in [0, 2 pi)
  double resultant = 0.0;
};
CenterSample intensity_center(const ProcessState& state);

struct DriftReport {
  double velocity = 0.0;
  double v_first = 0.0;
  double v_second = 0.0;
  double invariance_ratio = 0.0;  // |v_second / v_first - 1|
  bool well_defined = true;
  std::string issue;
};

// Least-squares center velocity from (time, angle) samples; angles are
// unwrapped before fitting. Needs at least 10 samples.
DriftReport drift_velocity(std::span<const double> times,
                           std::span<const double> angles,
                           double ring_length);

// max over t,s of |a_s(t+1) + a_s(t-1) - 2 F[a(t)]_s| for a recorded
// Klein-Gordon level trajectory (levels[t] = level at step t, >= 3).
double reverse_causality_defect(std::span<const std::vector<double>> levels,
                                double k);
std::int64_t reverse_causality_defect_exact(
    std::span<const std::vector<std::int64_t>> levels, std::int64_t k);

// Least-squares slope and residual of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of fit residuals
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace vplat
