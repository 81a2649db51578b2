// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "rearr/gradient.hpp"
#include "rearr/measure.hpp"

namespace {

rearr::GridFunction sample(int dimension, int cells) {
  auto space = rearr::share(rearr::MeasureSpace::unit_cube(dimension, cells));
  return rearr::GridFunction::sample(space, [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(3.0 * x[i] + static_cast<double>(i));
    return s;
  });
}

void BM_GradientSerial(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::serial::gradient_modulus(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

void BM_GradientParallel(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::gradient_modulus(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}

void BM_SecondDerivativeSerial(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::serial::kth_derivative_modulus(f, 2));
}

void BM_SecondDerivativeParallel(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::kth_derivative_modulus(f, 2));
}

void BM_ModulusSerial(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::serial::shift_norms(f, 2.0, 0.25));
}

void BM_ModulusParallel(benchmark::State& state) {
  const auto f = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rearr::ModulusTable(f, 2.0, 0.25));
}

}  // namespace

BENCHMARK(BM_GradientSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_GradientParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_SecondDerivativeSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_SecondDerivativeParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_ModulusSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModulusParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
