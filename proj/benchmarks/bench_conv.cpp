#include <benchmark/benchmark.h>

#include "rittlab/families.hpp"
#include "rittlab/trunc_seq.hpp"

namespace {

using namespace rittlab;

void bm_convolve(benchmark::State& state, ConvMethod method) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const ProbSeq f = make_alpha_frac(0.5, len);
  ConvOptions opt;
  opt.method = method;
  opt.cap = len;
  for (auto _ : state) {
    ProbSeq h = convolve(f, f, opt);
    benchmark::DoNotOptimize(h.coeffs.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_conv_power(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const ProbSeq f = make_alpha_frac(0.5, len);
  ConvOptions opt;
  opt.cap = len;
  for (auto _ : state) {
    ProbSeq h = conv_power(f, 64, opt);
    benchmark::DoNotOptimize(h.coeffs.data());
  }
}

void bm_conv_exp(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const ProbSeq f = make_alpha_frac(0.5, len);
  ConvExpOptions opt;
  opt.conv.cap = len;
  for (auto _ : state) {
    ProbSeq h = conv_exp(f, 16.0, opt);
    benchmark::DoNotOptimize(h.coeffs.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_convolve, direct, rittlab::ConvMethod::direct)
    ->RangeMultiplier(4)
    ->Range(1 << 8, 1 << 12)
    ->Complexity();
BENCHMARK_CAPTURE(bm_convolve, fft, rittlab::ConvMethod::fft)
    ->RangeMultiplier(4)
    ->Range(1 << 8, 1 << 16)
    ->Complexity();
BENCHMARK(bm_conv_power)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);
BENCHMARK(bm_conv_exp)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

BENCHMARK_MAIN();
