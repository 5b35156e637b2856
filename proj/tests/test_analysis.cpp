#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "vplat/analysis.hpp"
#include "vplat/lattice.hpp"
#include "vplat/oracle.hpp"
#include "vplat/process.hpp"

using namespace vplat;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

std::vector<cd> dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t s = 0; s < n; ++s)
      out[j] += x[s] * std::polar(1.0, -2.0 * kPi * double(j) * double(s) / n);
  return out;
}

std::vector<cd> idft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < n; ++j)
      out[s] += x[j] * std::polar(1.0, 2.0 * kPi * double(j) * double(s) / n);
    out[s] /= double(n);
  }
  return out;
}

Custom random_fill(ProcessKind kind, std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Custom ic;
  for (std::size_t f = 0; f < field_count(kind); ++f) {
    std::vector<double> arr(n);
    for (auto& v : arr) v = dist(rng);
    ic.arrays.push_back(std::move(arr));
  }
  return ic;
}

// The per-mode vector the mode matrix acts on, assembled from a state.
std::array<std::vector<cd>, 2> mode_vectors(const ProcessState& st) {
  const std::size_t n = st.n_sites();
  const auto& f = st.fdata().fields;
  std::array<std::vector<cd>, 2> out;
  auto complex_of = [&](std::size_t re, std::size_t im) {
    std::vector<cd> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = cd{f[re][s], f[im][s]};
    return v;
  };
  auto real_of = [&](std::size_t i) {
    std::vector<cd> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = cd{f[i][s], 0.0};
    return v;
  };
  switch (st.kind) {
    case ProcessKind::Schrodinger:
      out = {real_of(0), real_of(1)};  // (a^, b^)
      break;
    case ProcessKind::Dirac:
      out = {complex_of(0, 1), complex_of(2, 3)};  // (psi1^, psi2^)
      break;
    case ProcessKind::KleinGordon:
      out = {real_of(0), real_of(1)};  // (current, previous)
      break;
    case ProcessKind::Photon:
      out = {real_of(0), real_of(1)};  // (r^, l^)
      break;
  }
  return out;
}

// Advances a state one step through the Fourier-side matrices and
// compares with the real-space stepper.
void check_spectral_spatial(ProcessKind kind, std::size_t n, double lambda,
                            double mass, unsigned seed) {
  const auto spec = make_spec(kind, n, lambda, mass);
  auto st = make_state(spec, kind, random_fill(kind, n, seed));

  auto before = mode_vectors(st);
  std::array<std::vector<cd>, 2> hat{dft(before[0]), dft(before[1])};
  for (std::size_t j = 0; j < n; ++j) {
    // DFT bin j carries momentum 2 pi j / (N lambda)
    const double q = 2.0 * kPi * double(j) / spec.ring_length();
    const Mat2 m = mode_matrix(kind, spec, q);
    const cd u = hat[0][j], v = hat[1][j];
    hat[0][j] = m(0, 0) * u + m(0, 1) * v;
    hat[1][j] = m(1, 0) * u + m(1, 1) * v;
  }
  const std::array<std::vector<cd>, 2> want{idft(hat[0]), idft(hat[1])};

  step(st);
  const auto after = mode_vectors(st);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t s = 0; s < n; ++s)
      worst = std::max(worst, std::abs(after[c][s] - want[c][s]));
  CHECK(worst < 1e-12);
}

}  // namespace

TEST_CASE("mode matrices at q = 0") {
  const auto sp = make_spec(ProcessKind::Schrodinger, 8, 0.5, 1.0);
  const Mat2 m = mode_matrix(ProcessKind::Schrodinger, sp, 0.0);
  CHECK(m(0, 0) == cd{1.0});
  CHECK(m(0, 1) == cd{0.0});
  CHECK(m(1, 0) == cd{0.0});
  CHECK(m(1, 1) == cd{1.0});
  const auto ph = make_spec(ProcessKind::Photon, 8, 0.5, 0.0);
  const Mat2 pm = mode_matrix(ProcessKind::Photon, ph, 0.0);
  CHECK(std::abs(pm(0, 0) - cd{1.0}) < 1e-15);
  CHECK(std::abs(pm(1, 1) - cd{1.0}) < 1e-15);
  CHECK_THROWS_AS(mode_matrix(ProcessKind::Photon, ph, 0.1), SpecError);
}

TEST_CASE("Schrodinger top mode grows by sqrt(1 + k^2 mu^2)") {
  // q lambda = pi: mu = 4, k = 1/2 -> |g| = sqrt(5)
  const auto sp = make_spec(ProcessKind::Schrodinger, 8, 0.5, 1.0);
  const double q = kPi / sp.lambda;
  const auto eig = eigenvalues_2x2(mode_matrix(ProcessKind::Schrodinger, sp, q));
  CHECK(std::abs(eig.values[0]) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK(std::abs(eig.values[1]) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  CHECK_FALSE(eig.defective);
}

TEST_CASE("Dirac mode matrix has |det| = 1 + k^2") {
  const auto sp = make_spec(ProcessKind::Dirac, 16, 0.25, 1.5);
  for (int n = 0; n <= 8; ++n) {
    const double q = 2.0 * kPi * n / sp.ring_length();
    const Mat2 m = mode_matrix(ProcessKind::Dirac, sp, q);
    const cd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    CHECK(std::abs(det) ==
          doctest::Approx(1.0 + sp.k * sp.k).epsilon(1e-14));
  }
}

TEST_CASE("eigenvalues_2x2 on known matrices") {
  Mat2 m;
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  const auto eig = eigenvalues_2x2(m);
  CHECK(eig.values[0].real() == doctest::Approx(3.0));
  CHECK(eig.values[1].real() == doctest::Approx(1.0));
  CHECK_FALSE(eig.defective);

  Mat2 jordan;
  jordan(0, 0) = 1.0;
  jordan(0, 1) = 1.0;
  jordan(1, 1) = 1.0;
  CHECK(eigenvalues_2x2(jordan).defective);

  Mat2 scalar;
  scalar(0, 0) = 2.0;
  scalar(1, 1) = 2.0;
  CHECK_FALSE(eigenvalues_2x2(scalar).defective);
}

TEST_CASE("one matrix step per mode reproduces the real-space stepper") {
  check_spectral_spatial(ProcessKind::Schrodinger, 16, 0.25, 1.0, 21);
  check_spectral_spatial(ProcessKind::Dirac, 16, 0.25, 1.0, 22);
  check_spectral_spatial(ProcessKind::KleinGordon, 16, 0.25, 1.0, 23);
  check_spectral_spatial(ProcessKind::Photon, 16, 0.25, 0.0, 24);
}

TEST_CASE("photon dispersion deviation is identically zero") {
  const auto sp = make_spec(ProcessKind::Photon, 64, 0.1, 0.0);
  std::vector<double> qs;
  for (int n = 1; n <= 16; ++n) qs.push_back(2.0 * kPi * n / sp.ring_length());
  for (const auto& s : lattice_dispersion(ProcessKind::Photon, sp, qs)) {
    CHECK(std::fabs(s.deviation) < 1e-12);
    CHECK(s.growth == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("massive dispersion deviations grow with |q|") {
  for (ProcessKind kind : {ProcessKind::Schrodinger, ProcessKind::Dirac,
                           ProcessKind::KleinGordon}) {
    const auto sp = make_spec(kind, 64, 0.05, 1.0);
    std::vector<double> qs;
    for (int n = 1; n <= 10; ++n)
      qs.push_back(2.0 * kPi * n / sp.ring_length());
    const auto samples = lattice_dispersion(kind, sp, qs);
    double prev = 0.0;
    for (const auto& s : samples) {
      if (s.branch != 0) continue;
      const double dev = std::fabs(s.deviation);
      CHECK(dev >= prev);
      prev = dev;
    }
  }
}

TEST_CASE("Schrodinger lattice growth matches the closed form") {
  const auto sp = make_spec(ProcessKind::Schrodinger, 32, 0.2, 1.0);
  std::vector<double> qs;
  for (int n = 1; n <= 16; ++n) qs.push_back(2.0 * kPi * n / sp.ring_length());
  for (const auto& s : lattice_dispersion(ProcessKind::Schrodinger, sp, qs)) {
    const double mu = 4.0 * std::pow(std::sin(0.5 * s.q * sp.lambda), 2);
    CHECK(s.growth ==
          doctest::Approx(std::sqrt(1.0 + sp.k * sp.k * mu * mu))
              .epsilon(1e-12));
  }
}

TEST_CASE("l2_error vanishes on a state sampled from its own solution") {
  const auto sp = make_spec(ProcessKind::Schrodinger, 64, 0.25, 1.0);
  const auto st = make_state(sp, ProcessKind::Schrodinger,
                             GaussianPacket{8.0, 1.0, 0.0});
  const auto sol = schrodinger_gaussian(1.0, 0.0, 8.0, 1.0, sp.ring_length());
  CHECK(l2_error(st, sol, 0.0) < 1e-14);
  CHECK_THROWS_AS(l2_error(st, sol, 0.5), SpecError);  // wrong time
  const auto wrong = kleingordon_solution(1.0, 0.0);
  CHECK_THROWS_AS(l2_error(st, wrong, 0.0), SpecError);
}

TEST_CASE("photon transport stays on the oracle after many steps") {
  const auto sp = make_spec(ProcessKind::Photon, 64, 0.25, 0.0);
  auto st = make_state(sp, ProcessKind::Photon, GaussianPacket{8.0, 1.0, 0.0});
  const double L = sp.ring_length();
  auto profile = [L](double x) {
    double u = x - 8.0;
    u -= L * std::round(u / L);
    return std::exp(-u * u / 4.0);
  };
  const auto sol = photon_solution(profile, Branch::Right);
  run(st, 37);
  CHECK(l2_error(st, sol, st.time()) < 1e-12);
}

TEST_CASE("convergence study flags the photon as exact") {
  ConvergenceCase c;
  c.kind = ProcessKind::Photon;
  c.ring_length = 16.0;
  c.mass = 0.0;
  c.ic = GaussianPacket{8.0, 1.0, 0.0};
  const double L = c.ring_length;
  c.solution = photon_solution(
      [L](double x) {
        double u = x - 8.0;
        u -= L * std::round(u / L);
        return std::exp(-u * u / 4.0);
      },
      Branch::Right);
  c.lambdas = {0.25, 0.125, 0.0625};
  c.horizon = 2.0;
  const auto rep = convergence_study(c);
  CHECK(rep.exact);
  for (double e : rep.errors) CHECK(e <= 1e-12);
  ConvergenceCase too_few = c;
  too_few.lambdas = {0.25, 0.125};
  CHECK_THROWS_AS(convergence_study(too_few), SpecError);
}

TEST_CASE("intensity center of a concentrated packet") {
  const auto sp = make_spec(ProcessKind::Photon, 16, 1.0, 0.0);
  const auto st = make_state(sp, ProcessKind::Photon, DeltaPair{12});
  const auto c = intensity_center(st);
  CHECK(c.angle == doctest::Approx(2.0 * kPi * 12.0 / 16.0));
  CHECK(c.resultant == doctest::Approx(1.0));
  // a uniform state has no center
  const auto flat = make_state(
      sp, ProcessKind::Photon,
      Custom{{std::vector<double>(16, 1.0), std::vector<double>(16, 0.0)}});
  CHECK(intensity_center(flat).resultant < 1e-12);
}

TEST_CASE("drift velocity recovers a synthetic linear motion") {
  std::vector<double> times, angles;
  const double L = 10.0, v = 0.7;
  for (int i = 0; i < 40; ++i) {
    const double t = 0.1 * i;
    times.push_back(t);
    double ang = 2.0 * kPi * (0.2 + v * t / L);
    ang -= 2.0 * kPi * std::floor(ang / (2.0 * kPi));  // wrapped samples
    angles.push_back(ang);
  }
  const auto rep = drift_velocity(times, angles, L);
  CHECK(rep.well_defined);
  CHECK(rep.velocity == doctest::Approx(v).epsilon(1e-12));
  CHECK(rep.invariance_ratio < 1e-10);
  std::vector<double> few(times.begin(), times.begin() + 5);
  std::vector<double> few_a(angles.begin(), angles.begin() + 5);
  CHECK_THROWS_AS(drift_velocity(few, few_a, L), SpecError);
}

TEST_CASE("reverse-causality defect is zero along a trajectory") {
  const auto sp = make_spec(ProcessKind::KleinGordon, 16, 0.5, 2.0);
  auto st = make_state(sp, ProcessKind::KleinGordon, DeltaPair{5},
                       NumericMode::Integer);
  std::vector<std::vector<std::int64_t>> levels;
  auto snap = [&] {
    std::vector<std::int64_t> lvl(16);
    for (std::size_t s = 0; s < 16; ++s) lvl[s] = st.idata().fields[0][s].v;
    levels.push_back(std::move(lvl));
  };
  std::vector<std::int64_t> prev(16, 0);
  levels.push_back(prev);
  snap();
  for (int i = 0; i < 12; ++i) {
    step(st);
    snap();
  }
  CHECK(reverse_causality_defect_exact(levels, 1) == 0);
  CHECK_THROWS_AS(reverse_causality_defect_exact(
                      std::span(levels.data(), 2), 1),
                  SpecError);
}

TEST_CASE("fit_line is exact on affine data") {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.residual < 1e-14);
  std::vector<double> same{1, 1, 1}, yy{0, 1, 2};
  CHECK_THROWS_AS(fit_line(same, yy), SpecError);
}
