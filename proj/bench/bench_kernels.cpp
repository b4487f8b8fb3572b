#include "parashear/continued_fraction.hpp"
#include "parashear/kernels.hpp"
#include "parashear/roof.hpp"
#include "parashear/torus.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

namespace {

using namespace parashear;

struct Setup {
  torus::SkewShift ss = torus::make_skew_shift(cf::golden(), 0.0);
  roof::RoofFunction f = roof::default_roof();
  torus::TorusPoint p{torus::Phase::from_double(0.1), torus::Phase::from_double(0.2)};
  torus::TorusPoint q{p.x, p.y + torus::Phase::from_double(1e-3)};
};

const Setup& setup() {
  static const Setup s;
  return s;
}

void BM_OrbitSumSerial(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::orbit_sum_serial(s.ss, s.f, s.p, 0, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OrbitSumParallel(benchmark::State& state) {
  const auto& s = setup();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::orbit_sum(s.ss, s.f, s.p, 0, state.range(0), kernels::Accumulation::Double));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DifferencePrefixSerial(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::difference_prefix_serial(s.ss, s.f, s.p, s.q, 0, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DifferencePrefixParallel(benchmark::State& state) {
  const auto& s = setup();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernels::difference_prefix(s.ss, s.f, s.p, s.q, 0, state.range(0), kernels::Accumulation::Double));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_OrbitSumSerial)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrbitSumParallel)->Args({1 << 22, 1})->Args({1 << 22, 2})->Args({1 << 22, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DifferencePrefixSerial)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DifferencePrefixParallel)->Args({1 << 22, 1})->Args({1 << 22, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
