// Throughput of the four master-equation steppers at various ring sizes.

#include <benchmark/benchmark.h>

#include "vplat/lattice.hpp"
#include "vplat/process.hpp"

namespace {

using namespace vplat;

ProcessState random_state(ProcessKind kind, std::size_t n) {
  const double mass = kind == ProcessKind::Photon ? 0.0 : 1.0;
  const LatticeSpec spec = make_spec(kind, n, 0.01, mass);
  Custom ic;
  // cheap deterministic pseudo-random fill
  std::uint64_t x = 0x9e3779b97f4a7c15ull;
  for (std::size_t f = 0; f < field_count(kind); ++f) {
    std::vector<double> arr(n);
    for (auto& v : arr) {
      x ^= x << 13;
      x ^= x >> 7;
      x ^= x << 17;
      v = static_cast<double>(x % 1000) / 1000.0 - 0.5;
    }
    ic.arrays.push_back(std::move(arr));
  }
  return make_state(spec, kind, ic);
}

void bench_kind(benchmark::State& state, ProcessKind kind) {
  auto st = random_state(kind, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    step(st);
    benchmark::DoNotOptimize(st);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(bench_kind, schrodinger, vplat::ProcessKind::Schrodinger)
    ->Range(64, 4096);
BENCHMARK_CAPTURE(bench_kind, dirac, vplat::ProcessKind::Dirac)
    ->Range(64, 4096);
BENCHMARK_CAPTURE(bench_kind, kleingordon, vplat::ProcessKind::KleinGordon)
    ->Range(64, 4096);
BENCHMARK_CAPTURE(bench_kind, photon, vplat::ProcessKind::Photon)
    ->Range(64, 4096);

BENCHMARK_MAIN();
