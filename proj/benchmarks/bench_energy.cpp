#include <benchmark/benchmark.h>

#include "affsob/affine_energy.hpp"
#include "affsob/seminorms.hpp"
#include "affsob/sl_opt.hpp"

using namespace affsob;

namespace {

AnalyticField aniso() {
  Eigen::Matrix2d A;
  A << 9, 4, 4, 2;
  return AnalyticField::gaussian(A);
}

const QuadratureBundle& bundle(int N) {
  static const QuadratureBundle b2(2), b3(3);
  return N == 2 ? b2 : b3;
}

}  // namespace

// args: s*2, p*2
static void BM_AffineEnergy2D(benchmark::State& state) {
  const auto P = SmoothnessParams::make(state.range(0) / 2.0, state.range(1) / 2.0);
  const AnalyticField f = aniso();
  for (auto _ : state) benchmark::DoNotOptimize(affine_energy(f, P, bundle(2)).value);
}
BENCHMARK(BM_AffineEnergy2D)->Args({2, 4})->Args({2, 2})->Args({4, 4})->Args({1, 4})->Unit(benchmark::kMillisecond);

static void BM_AffineEnergy3D(benchmark::State& state) {
  const auto P = SmoothnessParams::make(1, 2);
  const AnalyticField f = AnalyticField::standard_gaussian(3);
  for (auto _ : state) benchmark::DoNotOptimize(affine_energy(f, P, bundle(3)).value);
}
BENCHMARK(BM_AffineEnergy3D)->Unit(benchmark::kMillisecond);

static void BM_Seminorm(benchmark::State& state) {
  const auto P = SmoothnessParams::make(state.range(0) / 2.0, state.range(1) / 2.0);
  const AnalyticField f = aniso();
  for (auto _ : state) benchmark::DoNotOptimize(seminorm(f, P, bundle(2)));
}
BENCHMARK(BM_Seminorm)->Args({2, 4})->Args({1, 4})->Unit(benchmark::kMillisecond);

static void BM_ExactGradient(benchmark::State& state) {
  const AnalyticField f = aniso();
  const UnimodularTransform T(2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_gradient_s1(f, T, 2.0, bundle(2)));
}
BENCHMARK(BM_ExactGradient)->Unit(benchmark::kMillisecond);

static void BM_Minimize(benchmark::State& state) {
  const auto P = SmoothnessParams::make(1, 2);
  const AnalyticField f = aniso();
  OptimizerOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(f, P, opts, bundle(2)).value);
}
BENCHMARK(BM_Minimize)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
