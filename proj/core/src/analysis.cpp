#include "vplat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vplat {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Complex field assembly per the fixed conventions: psi = a + ib,
// (psi1, psi2) = (a + ib, c + id), KG current level, (r, l).
std::vector<std::vector<cd>> assembled_fields(const ProcessState& st) {
  const std::size_t n = st.n_sites();
  std::vector<std::vector<double>> f(field_count(st.kind),
                                     std::vector<double>(n));
  std::visit(
      [&](const auto& d) {
        for (std::size_t i = 0; i < d.fields.size(); ++i)
          for (std::size_t s = 0; s < n; ++s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(d.fields[i][s])>,
                                         CheckedInt64>)
              f[i][s] = static_cast<double>(d.fields[i][s].v);
            else
              f[i][s] = d.fields[i][s];
          }
      },
      st.data);

  std::vector<std::vector<cd>> out;
  auto pair = [&](std::size_t re, std::size_t im) {
    std::vector<cd> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = cd{f[re][s], f[im][s]};
    return v;
  };
  auto real_only = [&](std::size_t i) {
    std::vector<cd> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = cd{f[i][s], 0.0};
    return v;
  };
  switch (st.kind) {
    case ProcessKind::Schrodinger:
      out.push_back(pair(0, 1));
      break;
    case ProcessKind::Dirac:
      out.push_back(pair(0, 1));
      out.push_back(pair(2, 3));
      break;
    case ProcessKind::KleinGordon:
      out.push_back(real_only(0));
      break;
    case ProcessKind::Photon:
      out.push_back(real_only(0));
      out.push_back(real_only(1));
      break;
  }
  return out;
}

// Plain O(N^2) DFT; only used at setup time for the growth-bound check.
std::vector<cd> dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cd acc{};
    for (std::size_t s = 0; s < n; ++s)
      acc += x[s] * std::polar(1.0, -2.0 * kPi * double(j) * double(s) / n);
    out[j] = acc;
  }
  return out;
}

double schrodinger_mode_growth(double k, double qlambda) {
  const double mu = 4.0 * std::pow(std::sin(0.5 * qlambda), 2);
  return std::sqrt(1.0 + k * k * mu * mu);
}

}  // namespace

Mat2 mode_matrix(ProcessKind kind, const LatticeSpec& spec, double q) {
  if (!is_lattice_mode(q, spec))
    throw SpecError("q is not a lattice mode of this ring");
  const double ql = q * spec.lambda;
  Mat2 m;
  switch (kind) {
    case ProcessKind::Schrodinger: {
      const double mu = 4.0 * std::pow(std::sin(0.5 * ql), 2);
      m(0, 0) = 1.0;
      m(0, 1) = spec.k * mu;
      m(1, 0) = -spec.k * mu;
      m(1, 1) = 1.0;
      break;
    }
    case ProcessKind::Dirac:
      m(0, 0) = std::polar(1.0, ql);
      m(0, 1) = -kI * spec.k;
      m(1, 0) = -kI * spec.k;
      m(1, 1) = std::polar(1.0, -ql);
      break;
    case ProcessKind::KleinGordon:
      m(0, 0) = 2.0 * std::cos(ql) - spec.k;
      m(0, 1) = -1.0;
      m(1, 0) = 1.0;
      m(1, 1) = 0.0;
      break;
    case ProcessKind::Photon:
      m(0, 0) = std::polar(1.0, -ql);
      m(1, 1) = std::polar(1.0, ql);
      break;
  }
  return m;
}

Eig2 eigenvalues_2x2(const Mat2& m) {
  const cd tr = m(0, 0) + m(1, 1);
  const cd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const cd disc = std::sqrt(tr * tr - 4.0 * det);
  Eig2 e;
  e.values = {0.5 * (tr + disc), 0.5 * (tr - disc)};
  if (std::abs(disc) <= 1e-12 * std::max(1.0, std::abs(tr))) {
    // repeated eigenvalue; defective unless the matrix is scalar
    const double off = std::abs(m(0, 1)) + std::abs(m(1, 0)) +
                       std::abs(m(0, 0) - m(1, 1));
    e.defective = off > 1e-12 * std::max(1.0, std::abs(tr));
  }
  return e;
}

std::vector<DispersionSample> lattice_dispersion(ProcessKind kind,
                                                 const LatticeSpec& spec,
                                                 std::span<const double> q_list) {
  std::vector<DispersionSample> out;
  out.reserve(2 * q_list.size());
  // previous assignment, for continuity tracking along the list
  std::array<cd, 2> prev{};
  bool have_prev = false;
  for (double q : q_list) {
    const Mat2 m = mode_matrix(kind, spec, q);
    Eig2 eig = eigenvalues_2x2(m);
    const double omega_pos = continuum_dispersion(kind, spec.mass, q);
    // branch 0 target: e^{-i omega tau}; branch 1: the opposite sign
    std::array<cd, 2> target;
    if (have_prev) {
      target = prev;
    } else {
      target = {std::polar(1.0, -omega_pos * spec.tau),
                std::polar(1.0, omega_pos * spec.tau)};
    }
    auto phase = [](cd g) { return std::abs(g) > 0 ? g / std::abs(g) : cd{1.0}; };
    const double d_keep = std::abs(phase(eig.values[0]) - phase(target[0])) +
                          std::abs(phase(eig.values[1]) - phase(target[1]));
    const double d_swap = std::abs(phase(eig.values[1]) - phase(target[0])) +
                          std::abs(phase(eig.values[0]) - phase(target[1]));
    if (d_swap < d_keep) std::swap(eig.values[0], eig.values[1]);
    prev = eig.values;
    have_prev = true;

    for (int branch = 0; branch < 2; ++branch) {
      DispersionSample s;
      s.q = q;
      s.branch = branch;
      const cd g = eig.values[branch];
      s.growth = std::abs(g);
      s.omega_lattice = -std::arg(g) / spec.tau;
      s.omega_continuum = branch == 0 ? omega_pos : -omega_pos;
      s.deviation = s.omega_lattice - s.omega_continuum;
      s.defective = eig.defective;
      out.push_back(s);
    }
  }
  return out;
}

double l2_error(const ProcessState& state, const ContinuumSolution& solution,
                double time) {
  if (state.kind != solution.kind)
    throw SpecError("state/solution process kind mismatch");
  if (std::fabs(time - state.time()) >
      1e-9 * std::max(1.0, std::fabs(state.time())))
    throw SpecError("time does not equal step_index * tau");
  const auto fields = assembled_fields(state);
  const std::size_t n = state.n_sites();
  double acc = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double x = static_cast<double>(s) * state.spec.lambda;
    const auto ref = solution(x, time);
    for (std::size_t c = 0; c < fields.size(); ++c)
      acc += std::norm(fields[c][s] - ref[c]);
  }
  return std::sqrt(state.spec.lambda * acc);
}

ConvergenceReport convergence_study(const ConvergenceCase& c) {
  if (c.lambdas.size() < 3)
    throw SpecError("convergence study needs >= 3 resolutions");
  ConvergenceReport rep;
  rep.kind = c.kind;
  rep.horizon = c.horizon;

  for (double lambda : c.lambdas) {
    const double n_real = c.ring_length / lambda;
    const auto n = static_cast<std::size_t>(std::llround(n_real));
    if (std::fabs(n_real - double(n)) > 1e-9 * n_real)
      throw SpecError("ring_length / lambda is not an integer site count");
    const LatticeSpec spec = make_spec(c.kind, n, lambda, c.mass);
    const double steps_real = c.horizon / spec.tau;
    const long n_steps = std::lround(steps_real);
    if (std::fabs(steps_real - double(n_steps)) > 1e-9 * std::max(1.0, steps_real))
      throw SpecError("horizon / tau is not an integer step count");

    ProcessState st = make_state(spec, c.kind, c.ic);

    bool growth_ok = true;
    if (c.kind == ProcessKind::Schrodinger) {
      // Accumulated amplification of top-band content, measured on the
      // initial spectrum, must stay below 1e6 * eps relative to the signal.
      // Top-band noise is seeded at no less than machine epsilon by
      // roundoff even when the initial spectrum is cleaner than that.
      const double eps = std::numeric_limits<double>::epsilon();
      const auto psi_hat = dft(assembled_fields(st)[0]);
      double norm = 0.0;
      for (const cd& v : psi_hat) norm += std::norm(v);
      norm = std::sqrt(norm);
      double worst = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double ql = 2.0 * kPi * double(j) / double(n);
        if (std::sin(0.5 * ql) * std::sin(0.5 * ql) <= 0.5) continue;
        const double g = schrodinger_mode_growth(spec.k, ql);
        const double amplified = std::max(std::abs(psi_hat[j]) / norm, eps) *
                                 std::pow(g, double(n_steps));
        worst = std::max(worst, amplified);
      }
      growth_ok = worst < 1e6 * eps;
    }

    run(st, n_steps, n_steps);
    rep.lambdas.push_back(lambda);
    rep.errors.push_back(l2_error(st, c.solution, c.horizon));
    rep.used.push_back(growth_ok);
  }

  bool all_exact = true;
  for (double e : rep.errors) all_exact = all_exact && e <= 1e-12;
  if (all_exact) {
    rep.exact = true;
    rep.order = std::numeric_limits<double>::quiet_NaN();
    for (auto&& u : rep.used) u = false;
    return rep;
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.errors.size(); ++i) {
    const bool usable = rep.used[i] && rep.errors[i] > 1e-13;
    rep.used[i] = usable;
    if (usable) {
      lx.push_back(std::log(rep.lambdas[i]));
      ly.push_back(std::log(rep.errors[i]));
    }
  }
  if (lx.size() < 3)
    throw SpecError("fewer than 3 usable resolutions in convergence fit");
  const LineFit fit = fit_line(lx, ly);
  rep.order = fit.slope;
  rep.fit_residual = fit.residual;
  return rep;
}

CenterSample intensity_center(const ProcessState& state) {
  const auto fields = assembled_fields(state);
  const std::size_t n = state.n_sites();
  cd mean{};
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double w = 0.0;
    for (const auto& f : fields) w += std::norm(f[s]);
    total += w;
    mean += w * std::polar(1.0, 2.0 * kPi * double(s) / double(n));
  }
  CenterSample out;
  if (total <= 0.0) return out;
  mean /= total;
  out.resultant = std::abs(mean);
  out.angle = std::arg(mean);
  if (out.angle < 0.0) out.angle += 2.0 * kPi;
  return out;
}

DriftReport drift_velocity(std::span<const double> times,
                           std::span<const double> angles,
                           double ring_length) {
  if (times.size() != angles.size())
    throw SpecError("times/angles size mismatch");
  if (times.size() < 10)
    throw SpecError("drift fit needs at least 10 center samples");

  // unwrap, then convert angle -> position on the ring
  std::vector<double> pos(angles.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i > 0) {
      const double jump = angles[i] - angles[i - 1];
      if (jump > kPi) offset -= 2.0 * kPi;
      if (jump < -kPi) offset += 2.0 * kPi;
    }
    pos[i] = (angles[i] + offset) * ring_length / (2.0 * kPi);
  }

  const std::size_t half = times.size() / 2;
  const auto fit_range = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> t(times.begin() + lo, times.begin() + hi);
    std::vector<double> x(pos.begin() + lo, pos.begin() + hi);
    return fit_line(t, x).slope;
  };
  DriftReport rep;
  rep.velocity = fit_range(0, times.size());
  rep.v_first = fit_range(0, half);
  rep.v_second = fit_range(half, times.size());
  // The half-to-half ratio is meaningless for a packet that barely moves.
  const double tiny = 1e-9 * ring_length /
                      std::max(times.back() - times.front(), 1e-300);
  if (std::fabs(rep.v_first) <= tiny) {
    rep.well_defined = std::fabs(rep.v_second) <= tiny;
    rep.issue = rep.well_defined ? "" : "near-zero first-half velocity";
    rep.invariance_ratio =
        rep.well_defined ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    rep.invariance_ratio = std::fabs(rep.v_second / rep.v_first - 1.0);
  }
  return rep;
}

double reverse_causality_defect(std::span<const std::vector<double>> levels,
                                double k) {
  if (levels.size() < 3)
    throw SpecError("reverse-causality check needs >= 3 recorded levels");
  double worst = 0.0;
  for (std::size_t t = 1; t + 1 < levels.size(); ++t) {
    const auto f = kg_forward_branch(levels[t], k);
    for (std::size_t s = 0; s < f.size(); ++s)
      worst = std::max(worst,
                       std::fabs(levels[t + 1][s] + levels[t - 1][s] - 2.0 * f[s]));
  }
  return worst;
}

std::int64_t reverse_causality_defect_exact(
    std::span<const std::vector<std::int64_t>> levels, std::int64_t k) {
  if (levels.size() < 3)
    throw SpecError("reverse-causality check needs >= 3 recorded levels");
  CheckedInt64 worst{0};
  const CheckedInt64 ck{k};
  for (std::size_t t = 1; t + 1 < levels.size(); ++t) {
    const auto& cur = levels[t];
    const std::size_t n = cur.size();
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t sm = (s + n - 1) % n;
      const std::size_t sp = (s + 1) % n;
      // 2 F[a(t)]_s, kept in exact integers
      const CheckedInt64 two_f =
          (CheckedInt64{cur[sp]} + CheckedInt64{cur[sm]}) - ck * CheckedInt64{cur[s]};
      const CheckedInt64 defect = abs(
          (CheckedInt64{levels[t + 1][s]} + CheckedInt64{levels[t - 1][s]}) - two_f);
      worst = std::max(worst, defect);
    }
  }
  return worst.v;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw SpecError("line fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw SpecError("degenerate abscissae in line fit");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

}  // namespace vplat
