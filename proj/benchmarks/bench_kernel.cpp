#include <benchmark/benchmark.h>

#include "kp/kernel.hpp"

namespace {

void BM_DensityDirect(benchmark::State& state) {
  const kp::KernelParams P = kp::KernelParams::mixed(1.5, 1.2, 1.0, 1);
  kp::MixedStableKernel k(P);
  double t = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.density(t, 1.3));
    t = t < 2.0 ? t + 1e-6 : 0.5;  // defeat any caching
  }
}
BENCHMARK(BM_DensityDirect);

void BM_DensityFastSelfSimilar(benchmark::State& state) {
  const kp::KernelParams P = kp::KernelParams::pure(1.5, 1);
  kp::KernelOptions opts;
  opts.fast = true;
  kp::MixedStableKernel k(P, opts);
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.density(0.37, r));
    r = r < 20.0 ? r + 1e-5 : 0.0;
  }
}
BENCHMARK(BM_DensityFastSelfSimilar);

void BM_DensityFastSlice(benchmark::State& state) {
  const kp::KernelParams P = kp::KernelParams::mixed(1.5, 1.2, 1.0, 1);
  kp::KernelOptions opts;
  opts.fast = true;
  kp::MixedStableKernel k(P, opts);
  k.density(0.37, 0.0);  // build the slice outside the loop
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.density(0.37, r));
    r = r < 20.0 ? r + 1e-5 : 0.0;
  }
}
BENCHMARK(BM_DensityFastSlice);

void BM_GradientFast(benchmark::State& state) {
  const kp::KernelParams P = kp::KernelParams::pure(1.5, 1);
  kp::KernelOptions opts;
  opts.fast = true;
  kp::MixedStableKernel k(P, opts);
  double x = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.gradient_signed(0.8, x));
    x = x < 10.0 ? x + 1e-5 : -10.0;
  }
}
BENCHMARK(BM_GradientFast);

}  // namespace
