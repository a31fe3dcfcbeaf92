#include <benchmark/benchmark.h>

#include "kp/bounds.hpp"
#include "kp/series.hpp"

namespace {

kp::GridSpec small_grid() {
  kp::GridSpec g;
  g.n_time = 16;
  g.n_space = 24;
  g.L = 8.0;
  return g;
}

void BM_SeriesFirstOrder(benchmark::State& state) {
  const kp::KernelParams P =
      kp::KernelParams::pure(1.5, 1, kp::ParamGrade::kPerturbation);
  kp::SeriesEngine engine(P, kp::DriftField::constant(0.3), small_grid(), 0.0,
                          0.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.term_at(1, 0.4));
  }
}
BENCHMARK(BM_SeriesFirstOrder);

void BM_SeriesFieldOrder2(benchmark::State& state) {
  const kp::KernelParams P =
      kp::KernelParams::pure(1.5, 1, kp::ParamGrade::kPerturbation);
  for (auto _ : state) {
    kp::SeriesEngine engine(P, kp::DriftField::constant(0.3), small_grid(),
                            0.0, 0.0, 0.5);
    engine.ensure_orders(2);
    benchmark::DoNotOptimize(engine.term_at(2, 0.4));
  }
}
BENCHMARK(BM_SeriesFieldOrder2);

void BM_GreedyPartition(benchmark::State& state) {
  std::vector<double> nodes, values;
  for (int i = 1; i <= 64; ++i) {
    nodes.push_back(i / 65.0);
    values.push_back(0.05 * i);
  }
  kp::StepFn F(nodes, values, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kp::greedy_partition(F, 0.0, 1.0, 0.3));
  }
}
BENCHMARK(BM_GreedyPartition);

}  // namespace
