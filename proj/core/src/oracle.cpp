#include "vplat/oracle.hpp"

#include <cmath>
#include <utility>

namespace vplat {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

}  // namespace

ContinuumSolution schrodinger_plane_wave(double mass, double momentum) {
  if (!(mass > 0.0)) throw SpecError("schrodinger solution requires mass > 0");
  const double energy = momentum * momentum / (2.0 * mass);
  ContinuumSolution sol;
  sol.kind = ProcessKind::Schrodinger;
  sol.components = 1;
  sol.eval = [momentum, energy](double x, double t) {
    return std::array<cd, 2>{std::exp(kI * (momentum * x - energy * t)), cd{}};
  };
  return sol;
}

ContinuumSolution schrodinger_gaussian(double mass, double momentum,
                                       double center, double width,
                                       double ring_length) {
  if (!(mass > 0.0)) throw SpecError("schrodinger solution requires mass > 0");
  if (!(width > 0.0)) throw SpecError("gaussian width must be > 0");
  ContinuumSolution sol;
  sol.kind = ProcessKind::Schrodinger;
  sol.components = 1;
  const double s2 = width * width;
  sol.eval = [mass, momentum, center, s2, ring_length](double x, double t) {
    const double drift = momentum / mass * t;
    double d = x - center - drift;
    if (ring_length > 0.0)  // nearest periodic image of the moving center
      d -= ring_length * std::round(d / ring_length);
    const double u = d + drift;  // x - center at that image
    const cd beta = s2 + kI * t / (2.0 * mass);
    const cd z = 2.0 * s2 * momentum + kI * u;
    const cd arg = z * z / (4.0 * beta) - s2 * momentum * momentum;
    return std::array<cd, 2>{std::sqrt(s2 / beta) * std::exp(arg), cd{}};
  };
  return sol;
}

std::array<cd, 2> dirac_spinor(double mass, double momentum, Branch branch) {
  if (mass < 0.0) throw SpecError("mass must be nonnegative");
  const double p = momentum;
  const double e = std::sqrt(p * p + mass * mass) *
                   (branch == Branch::Negative ? -1.0 : 1.0);
  // Symbol H = [[-p, m], [m, p]] acting on (psi1, psi2); H u = E u.
  std::array<cd, 2> u{cd{mass, 0.0}, cd{e + p, 0.0}};
  const double norm = std::hypot(std::abs(u[0]), std::abs(u[1]));
  if (norm == 0.0) {
    // massless with e + p = 0: pure first component
    u = {cd{1.0, 0.0}, cd{0.0, 0.0}};
    return u;
  }
  u[0] /= norm;
  u[1] /= norm;
  // first nonzero component real-positive; components are already real,
  // flip the overall sign if needed
  const double lead = u[0].real() != 0.0 ? u[0].real() : u[1].real();
  if (lead < 0.0) {
    u[0] = -u[0];
    u[1] = -u[1];
  }
  return u;
}

ContinuumSolution dirac_solution(double mass, double momentum, Branch branch) {
  const double e = std::sqrt(momentum * momentum + mass * mass) *
                   (branch == Branch::Negative ? -1.0 : 1.0);
  const auto u = dirac_spinor(mass, momentum, branch);
  ContinuumSolution sol;
  sol.kind = ProcessKind::Dirac;
  sol.components = 2;
  sol.eval = [u, momentum, e](double x, double t) {
    const cd phase = std::exp(kI * (momentum * x - e * t));
    return std::array<cd, 2>{u[0] * phase, u[1] * phase};
  };
  return sol;
}

ContinuumSolution kleingordon_solution(double mass, double momentum) {
  if (mass < 0.0) throw SpecError("mass must be nonnegative");
  const double e = std::sqrt(momentum * momentum + mass * mass);
  ContinuumSolution sol;
  sol.kind = ProcessKind::KleinGordon;
  sol.components = 1;
  sol.eval = [momentum, e](double x, double t) {
    return std::array<cd, 2>{cd{std::cos(momentum * x - e * t), 0.0}, cd{}};
  };
  return sol;
}

ContinuumSolution photon_solution(std::function<double(double)> profile,
                                  Branch direction) {
  if (direction == Branch::Right)
    return photon_solution(std::move(profile), nullptr);
  if (direction == Branch::Left)
    return photon_solution(nullptr, std::move(profile));
  throw SpecError("photon direction must be Right or Left");
}

ContinuumSolution photon_solution(std::function<double(double)> profile_r,
                                  std::function<double(double)> profile_l) {
  ContinuumSolution sol;
  sol.kind = ProcessKind::Photon;
  sol.components = 2;
  sol.eval = [fr = std::move(profile_r), fl = std::move(profile_l)](double x,
                                                                    double t) {
    return std::array<cd, 2>{cd{fr ? fr(x - t) : 0.0, 0.0},
                             cd{fl ? fl(x + t) : 0.0, 0.0}};
  };
  return sol;
}

double continuum_dispersion(ProcessKind kind, double mass, double q) {
  switch (kind) {
    case ProcessKind::Schrodinger:
      if (!(mass > 0.0)) throw SpecError("schrodinger requires mass > 0");
      return q * q / (2.0 * mass);
    case ProcessKind::Dirac:
    case ProcessKind::KleinGordon:
      return std::sqrt(q * q + mass * mass);
    case ProcessKind::Photon:
      return q;
  }
  throw SpecError("unknown process kind");
}

MaxwellFields maxwell_fields(const std::vector<double>& r,
                             const std::vector<double>& l) {
  if (r.size() != l.size()) throw SpecError("r/l size mismatch");
  MaxwellFields out;
  out.electric.resize(r.size());
  out.magnetic.resize(r.size());
  for (std::size_t s = 0; s < r.size(); ++s) {
    out.electric[s] = 0.5 * (r[s] + l[s]);
    out.magnetic[s] = 0.5 * (l[s] - r[s]);
  }
  return out;
}

MaxwellFields maxwell_fields(const ProcessState& photon_state) {
  if (photon_state.kind != ProcessKind::Photon)
    throw SpecError("maxwell_fields requires a photon state");
  if (photon_state.mode() != NumericMode::Float) {
    const auto& f = photon_state.idata().fields;
    std::vector<double> r(f[0].size()), l(f[1].size());
    for (std::size_t s = 0; s < r.size(); ++s) {
      r[s] = static_cast<double>(f[0][s].v);
      l[s] = static_cast<double>(f[1][s].v);
    }
    return maxwell_fields(r, l);
  }
  return maxwell_fields(photon_state.fdata().fields[0],
                        photon_state.fdata().fields[1]);
}

}  // namespace vplat
