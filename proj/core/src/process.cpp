#include "vplat/process.hpp"

#include <cmath>
#include <cstdlib>

namespace vplat {

namespace {

template <class T>
double to_double(T v) {
  if constexpr (std::is_same_v<T, CheckedInt64>)
    return static_cast<double>(v.v);
  else
    return v;
}

template <class T>
void schro_step(StateData<T>& d, T k, std::size_t n) {
  const auto& a = d.fields[0];
  const auto& b = d.fields[1];
  std::vector<T> na(n), nb(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm = (s + n - 1) % n;
    const std::size_t sp = (s + 1) % n;
    const T lap_b = (b[sm] + b[sp]) - (b[s] + b[s]);
    const T lap_a = (a[sm] + a[sp]) - (a[s] + a[s]);
    na[s] = a[s] - k * lap_b;
    nb[s] = b[s] + k * lap_a;
  }
  d.fields[0] = std::move(na);
  d.fields[1] = std::move(nb);
}

template <class T>
void dirac_step(StateData<T>& d, T k, std::size_t n) {
  const auto& a = d.fields[0];
  const auto& b = d.fields[1];
  const auto& c = d.fields[2];
  const auto& e = d.fields[3];  // species D
  std::vector<T> na(n), nb(n), nc(n), nd(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm = (s + n - 1) % n;
    const std::size_t sp = (s + 1) % n;
    na[s] = a[sp] + k * e[s];
    nb[s] = b[sp] - k * c[s];
    nc[s] = c[sm] + k * b[s];
    nd[s] = e[sm] - k * a[s];
  }
  d.fields[0] = std::move(na);
  d.fields[1] = std::move(nb);
  d.fields[2] = std::move(nc);
  d.fields[3] = std::move(nd);
}

template <class T>
void kg_step(StateData<T>& d, T k, std::size_t n) {
  const auto& cur = d.fields[0];
  const auto& prev = d.fields[1];
  std::vector<T> next(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm = (s + n - 1) % n;
    const std::size_t sp = (s + 1) % n;
    next[s] = (cur[sp] + cur[sm]) - k * cur[s] - prev[s];
  }
  d.fields[1] = std::move(d.fields[0]);
  d.fields[0] = std::move(next);
}

template <class T>
void photon_step(StateData<T>& d) {
  auto& r = d.fields[0];
  auto& l = d.fields[1];
  std::rotate(r.rbegin(), r.rbegin() + 1, r.rend());  // r_s(t+1) = r_{s-1}(t)
  std::rotate(l.begin(), l.begin() + 1, l.end());     // l_s(t+1) = l_{s+1}(t)
}

void require_kind(const ProcessState& st, ProcessKind kind, const char* op) {
  if (st.kind != kind)
    throw SpecError(std::string(op) + " applied to a " +
                    std::string(kind_name(st.kind)) + " state");
}

}  // namespace

std::int64_t exact_coupling(const LatticeSpec& spec) {
  const double r = std::round(spec.k);
  if (std::fabs(spec.k - r) > 1e-12 * std::max(1.0, std::fabs(spec.k)) ||
      std::fabs(r) > 9.0e18)
    throw SpecError("integer mode requires integer k");
  return static_cast<std::int64_t>(r);
}

void step_schrodinger(ProcessState& st) {
  require_kind(st, ProcessKind::Schrodinger, "step_schrodinger");
  if (st.mode() == NumericMode::Float)
    schro_step(st.fdata(), st.spec.k, st.n_sites());
  else
    schro_step(st.idata(), CheckedInt64{exact_coupling(st.spec)}, st.n_sites());
  ++st.step_index;
}

void step_dirac(ProcessState& st) {
  require_kind(st, ProcessKind::Dirac, "step_dirac");
  if (st.mode() == NumericMode::Float)
    dirac_step(st.fdata(), st.spec.k, st.n_sites());
  else
    dirac_step(st.idata(), CheckedInt64{exact_coupling(st.spec)}, st.n_sites());
  ++st.step_index;
}

void step_kleingordon(ProcessState& st) {
  require_kind(st, ProcessKind::KleinGordon, "step_kleingordon");
  if (st.mode() == NumericMode::Float)
    kg_step(st.fdata(), st.spec.k, st.n_sites());
  else
    kg_step(st.idata(), CheckedInt64{exact_coupling(st.spec)}, st.n_sites());
  ++st.step_index;
}

void step_photon(ProcessState& st) {
  require_kind(st, ProcessKind::Photon, "step_photon");
  if (st.mode() == NumericMode::Float)
    photon_step(st.fdata());
  else
    photon_step(st.idata());
  ++st.step_index;
}

void step(ProcessState& st) {
  switch (st.kind) {
    case ProcessKind::Schrodinger: step_schrodinger(st); return;
    case ProcessKind::Dirac: step_dirac(st); return;
    case ProcessKind::KleinGordon: step_kleingordon(st); return;
    case ProcessKind::Photon: step_photon(st); return;
  }
}

std::vector<double> kg_forward_branch(std::span<const double> level, double k) {
  const std::size_t n = level.size();
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm = (s + n - 1) % n;
    const std::size_t sp = (s + 1) % n;
    out[s] = 0.5 * level[sp] + 0.5 * level[sm] - 0.5 * k * level[s];
  }
  return out;
}

double StepReport::census() const {
  double total = 0.0;
  for (double v : abs_sum) total += v;
  return total;
}

std::int64_t StepReport::census_exact() const {
  CheckedInt64 total{0};
  for (std::int64_t v : abs_sum_exact) total += CheckedInt64{v};
  return total.v;
}

StepReport census(const ProcessState& state) {
  StepReport rep;
  rep.step_index = state.step_index;
  rep.mode = state.mode();
  const std::size_t n = state.n_sites();

  auto tally = [&](const auto& fields) {
    std::vector<bool> occupied(n, false);
    for (const auto& f : fields) {
      using T = std::decay_t<decltype(f[0])>;
      T sum{}, abss{};
      for (std::size_t s = 0; s < n; ++s) {
        sum += f[s];
        using std::abs;
        abss += abs(f[s]);
        if (to_double(f[s]) != 0.0) occupied[s] = true;
      }
      rep.site_sum.push_back(to_double(sum));
      rep.abs_sum.push_back(to_double(abss));
      if constexpr (std::is_same_v<T, CheckedInt64>) {
        rep.site_sum_exact.push_back(sum.v);
        rep.abs_sum_exact.push_back(abss.v);
      }
    }
    for (bool o : occupied)
      if (o) ++rep.occupied_sites;
  };
  std::visit([&](const auto& d) { tally(d.fields); }, state.data);
  return rep;
}

std::vector<StepReport> run(
    ProcessState& state, long n_steps, long cadence,
    const std::function<void(const ProcessState&)>& observer) {
  if (n_steps < 0) throw SpecError("n_steps must be nonnegative");
  if (cadence < 1) throw SpecError("cadence must be positive");
  std::vector<StepReport> reports;
  for (long i = 1; i <= n_steps; ++i) {
    step(state);
    if (i % cadence == 0 || i == n_steps) {
      reports.push_back(census(state));
      if (observer) observer(state);
    }
  }
  return reports;
}

}  // namespace vplat
