#include <benchmark/benchmark.h>

#include <vector>

#include "spadfit/evaluate.hpp"
#include "spadfit/histogram.hpp"
#include "spadfit/random.hpp"
#include "spadfit/simulate.hpp"

using namespace spadfit;

static void BM_philox_block(benchmark::State& state) {
  Philox4x32::Counter counter{1, 2, 3, 4};
  const Philox4x32::Key key{5, 6};
  for (auto _ : state) {
    counter = Philox4x32::block(counter, key);
    benchmark::DoNotOptimize(counter);
  }
}
BENCHMARK(BM_philox_block);

static void BM_sample_arrivals(benchmark::State& state) {
  ScenarioConfig config = scenario_preset("high_noise");
  std::uint32_t cycle = 0;
  for (auto _ : state) {
    RandomStream rng(1, StreamDomain::arrivals, 0, cycle++);
    benchmark::DoNotOptimize(sample_arrivals(config, 0, rng));
  }
}
BENCHMARK(BM_sample_arrivals);

static void BM_censor(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  TimestampSet arrivals{{}, Frame::absolute, 10.0};
  RandomStream rng(3, StreamDomain::arrivals);
  double t = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    t += rng.uniform(0.01, 5.0);
    arrivals.values.push_back(t);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(censor_dead_time(arrivals, 7.5));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_censor)->Arg(1000)->Arg(100000);

static void BM_simulate_replication(benchmark::State& state) {
  ScenarioConfig config = scenario_preset("single_pulse");
  config.num_cycles = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_replication(config, 0, 1));
  }
  state.SetItemsProcessed(state.iterations() * config.num_cycles);
}
BENCHMARK(BM_simulate_replication)->Arg(500)->Arg(5000);

static void BM_build_histogram(benchmark::State& state) {
  ScenarioConfig config = scenario_preset("single_pulse");
  const TimestampSet data = simulate_replication(config, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_histogram(data, config.bin_width));
  }
  state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_build_histogram);

BENCHMARK_MAIN();
