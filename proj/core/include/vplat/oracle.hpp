#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "vplat/lattice.hpp"
#include "vplat/types.hpp"

namespace vplat {

// Closed-form continuum solution used as ground truth. components is 1 for
// Schrodinger and Klein-Gordon (complex scalar / real scalar), 2 for Dirac
// (spinor) and photon (Psi_R, Psi_L).
struct ContinuumSolution {
  ProcessKind kind = ProcessKind::Photon;
  std::size_t components = 1;
  std::function<std::array<std::complex<double>, 2>(double x, double t)> eval;

  std::array<std::complex<double>, 2> operator()(double x, double t) const {
    return eval(x, t);
  }
};

// Plane wave e^{i(px - Et)}, E = p^2/(2m). Requires m > 0.
ContinuumSolution schrodinger_plane_wave(double mass, double momentum);

// Free Gaussian packet with complex-width spreading,
//   psi(x,t) = sqrt(sigma^2/beta) exp((2 sigma^2 p + iu)^2/(4 beta) - sigma^2 p^2),
//   beta = sigma^2 + it/(2m), u = x - x0.
// Normalized so psi(x0 + p t/m, ...) matches the t = 0 envelope shape.
// ring_length > 0 evaluates u at the image nearest the moving center.
ContinuumSolution schrodinger_gaussian(double mass, double momentum,
                                       double center, double width,
                                       double ring_length = 0.0);

// Energy eigenvector of the 2x2 momentum-space symbol of the 1+1D Dirac
// system, normalized with the first nonzero component real-positive.
std::array<std::complex<double>, 2> dirac_spinor(double mass, double momentum,
                                                 Branch branch);

// Spinor plane wave u e^{i(px - Et)}, E = +-sqrt(p^2 + m^2).
ContinuumSolution dirac_solution(double mass, double momentum, Branch branch);

// Real traveling wave cos(px - Et), E = sqrt(p^2 + m^2).
ContinuumSolution kleingordon_solution(double mass, double momentum);

// Transported profile: Psi_R(x,t) = f(x - t) or Psi_L(x,t) = f(x + t).
// The other component is zero.
ContinuumSolution photon_solution(std::function<double(double)> profile,
                                  Branch direction);
// Both chiralities at once.
ContinuumSolution photon_solution(std::function<double(double)> profile_r,
                                  std::function<double(double)> profile_l);

// Continuum dispersion: Schrodinger q^2/(2m); Dirac/KG sqrt(q^2 + m^2);
// photon q.
double continuum_dispersion(ProcessKind kind, double mass, double q);

// Electric and magnetic fields from the photon chirality pair:
// E = (r + l)/2, B = (l - r)/2 (i.e. E = Psi_2, B = i Psi_3 with
// Psi_R = Psi_2 - i Psi_3, Psi_L = Psi_2 + i Psi_3).
struct MaxwellFields {
  std::vector<double> electric;
  std::vector<double> magnetic;
};
MaxwellFields maxwell_fields(const std::vector<double>& r,
                             const std::vector<double>& l);
MaxwellFields maxwell_fields(const ProcessState& photon_state);

}  // namespace vplat
