#include <benchmark/benchmark.h>

#include "spadfit/em.hpp"
#include "spadfit/mixture.hpp"
#include "spadfit/random.hpp"

using namespace spadfit;

namespace {

GummParams bench_truth() {
  GummParams params;
  params.cycle_length = 10.0;
  params.uniform_weight = 0.2;
  params.components = {{0.4, 3.0, 0.3}, {0.4, 7.0, 0.3}};
  return params;
}

}  // namespace

static void BM_pdf(benchmark::State& state) {
  const GummParams params = bench_truth();
  double y = 0.0;
  for (auto _ : state) {
    y += 0.001;
    if (y >= 10.0) y = 0.0;
    benchmark::DoNotOptimize(pdf(params, y));
  }
}
BENCHMARK(BM_pdf);

static void BM_posterior(benchmark::State& state) {
  const GummParams params = bench_truth();
  double y = 0.0;
  for (auto _ : state) {
    y += 0.001;
    if (y >= 10.0) y = 0.0;
    benchmark::DoNotOptimize(posterior(params, y));
  }
}
BENCHMARK(BM_posterior);

static void BM_e_step(benchmark::State& state) {
  const GummParams params = bench_truth();
  RandomStream rng(1, StreamDomain::mixture_sampling);
  const TimestampSet data = sample(params, state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e_step(data, params));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_e_step)->Arg(10000)->Arg(100000);

static void BM_fit(benchmark::State& state) {
  const GummParams truth = bench_truth();
  RandomStream rng(2, StreamDomain::mixture_sampling);
  const TimestampSet data = sample(truth, state.range(0), rng);
  FitOptions options;
  options.max_iters = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(data, 2, true, options));
  }
}
BENCHMARK(BM_fit)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_sample_mixture(benchmark::State& state) {
  const GummParams params = bench_truth();
  std::uint32_t lane = 0;
  for (auto _ : state) {
    RandomStream rng(7, StreamDomain::mixture_sampling, 0, lane++);
    benchmark::DoNotOptimize(sample(params, state.range(0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sample_mixture)->Arg(10000);

BENCHMARK_MAIN();
