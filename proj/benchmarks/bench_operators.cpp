#include <benchmark/benchmark.h>

#include "rittlab/families.hpp"
#include "rittlab/opcalc.hpp"

namespace {

using namespace rittlab;

void bm_resolvent_scan(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const DenseOp t = volterra_op(d);
  ContourParams params;
  params.j_max = 6;
  params.angles = 64;
  for (auto _ : state) {
    ResolventScan scan = resolvent_scan(t, ResolventKind::ritt, params);
    benchmark::DoNotOptimize(scan.constant);
  }
}

void bm_psi_op(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const ProbSeq f = make_alpha_frac(0.5, 4096);
  const DenseOp t = make_random_normal_contraction(d, 7);
  for (auto _ : state) {
    OpWithError r = psi_op(f, t);
    benchmark::DoNotOptimize(r.op.data());
  }
}

void bm_frac_power_tri(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const DenseOp t = volterra_op(d);
  for (auto _ : state) {
    FracPowerResult r = frac_power(t, 0.5);
    benchmark::DoNotOptimize(r.op.data());
  }
}

}  // namespace

BENCHMARK(bm_resolvent_scan)->RangeMultiplier(2)->Range(16, 128);
BENCHMARK(bm_psi_op)->RangeMultiplier(2)->Range(4, 16);
BENCHMARK(bm_frac_power_tri)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
