#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "spadfit/errors.hpp"
#include "spadfit/evaluate.hpp"

using namespace spadfit;

TEST_CASE("mse") {
  Histogram hist;
  hist.cycle_length = 10.0;
  hist.bin_width = 0.05;
  hist.densities.assign(200, 0.1);
  hist.sample_count = 1000;

  GummParams uniform;
  uniform.cycle_length = 10.0;
  uniform.uniform_weight = 1.0;
  const PaddingPlan plan{0.0, 10.0};

  SUBCASE("uniform model against the uniform histogram is zero") {
    CHECK(mse(uniform, plan, hist) < 1e-12);
  }

  SUBCASE("model equal to the histogram is exactly zero") {
    GummParams params;
    params.cycle_length = 10.0;
    params.uniform_weight = 0.4;
    params.components = {{0.6, 4.0, 0.3}};
    Histogram exact = hist;
    for (std::size_t i = 0; i < exact.bin_count(); ++i) {
      exact.densities[i] = pdf(params, exact.bin_center(i));
    }
    CHECK(mse(params, plan, exact) == 0.0);
  }

  SUBCASE("constant offset squares") {
    Histogram shifted = hist;
    for (double& d : shifted.densities) d += 0.03;
    CHECK(mse(uniform, plan, shifted) == doctest::Approx(0.0009));
  }

  SUBCASE("mismatched cycle length is a shape error") {
    Histogram other = hist;
    other.cycle_length = 8.0;
    other.bin_width = 0.04;
    CHECK_THROWS_AS(mse(uniform, plan, other), ShapeError);
  }
}

TEST_CASE("scenario presets") {
  for (const std::string& name : scenario_names()) {
    const ScenarioConfig config = scenario_preset(name);
    CHECK_NOTHROW(config.validate());
    CHECK(config.num_replications == 20);
    CHECK(config.dead_time == 7.5);
    CHECK(config.pulse_delay == 4.0);
    CHECK(config.pulse_half_width == 0.2);
    CHECK(config.bin_width == 0.05);
  }
  CHECK_THROWS_AS(scenario_preset("nope"), ConfigError);
}

TEST_CASE("pooled estimation input of the benchmark scenarios stays sane") {
  // Pooled sizes should remain within one order of the reference experiment
  // (roughly 10^3 to 10^5 registrations).
  for (const std::string& name : scenario_names()) {
    ScenarioConfig config = scenario_preset(name);
    config.rng_seed = 1;
    const ScenarioData data = simulate_scenario(config, 2);
    CHECK(data.pooled_timestamps.size() >= 1000);
    CHECK(data.pooled_timestamps.size() <= 100000);
  }
}

TEST_CASE("standard acquisition pools around ten thousand registrations") {
  // The default acquisition budget (20 x 500 cycles) at the four fluxes.
  for (const std::string& name : scenario_names()) {
    ScenarioConfig config = scenario_preset(name);
    config.num_cycles = 500;
    config.rng_seed = 3;
    const ScenarioData data = simulate_scenario(config, 2);
    CHECK(data.pooled_timestamps.size() >= 8000);
    CHECK(data.pooled_timestamps.size() <= 13000);
  }
}

TEST_CASE("run_scenario produces a coherent report") {
  ScenarioConfig config = scenario_preset("high_noise");
  config.num_cycles = 40;  // keep the unit test quick
  config.rng_seed = 7;
  const ScenarioReport report =
      run_scenario("high_noise", config, ModelKind::gumm, 2, true, 0, 2);
  CHECK(report.mse >= 0.0);
  CHECK(report.num_gaussians == 2);
  CHECK(report.padded);
  CHECK(report.fit.iterations_run >= 1);
  CHECK(report.fit.iterations_run <= 50);
  CHECK(report.histogram.bin_count() == 200);
  CHECK(report.fit.params.num_gaussians() == 2);
  CHECK(report.fit.padding_offset >= 0.0);
  CHECK(report.fit.padding_offset < config.cycle_length);
  // log-likelihood trace monotone when no rescue events fired
  if (report.fit.clamp_events == 0 && report.fit.reinit_events == 0) {
    for (std::size_t i = 1; i < report.fit.loglik_trace.size(); ++i) {
      CHECK(report.fit.loglik_trace[i] >=
            report.fit.loglik_trace[i - 1] - 1e-8);
    }
  }
}

TEST_CASE("model scored against its own large sample is near zero") {
  GummParams params;
  params.cycle_length = 10.0;
  params.uniform_weight = 0.25;
  params.components = {{0.45, 4.0, 0.35}, {0.3, 7.5, 0.5}};
  RandomStream rng(31337, StreamDomain::mixture_sampling);
  const TimestampSet draws = sample(params, 1000000, rng);
  const Histogram hist = build_histogram(draws, 0.05);
  CHECK(mse(params, PaddingPlan{0.0, 10.0}, hist) < 1e-3);
}

TEST_CASE("padded fit records a nonzero cut for a shape with a vacancy") {
  ScenarioConfig config = scenario_preset("high_noise");
  config.num_cycles = 40;
  config.rng_seed = 2;
  const ScenarioReport report =
      run_scenario("high_noise", config, ModelKind::gumm, 2, true, 0, 2);
  CHECK(report.fit.padding_offset > 0.0);
}

TEST_CASE("simulation is independent of the worker count") {
  ScenarioConfig config = scenario_preset("bump");
  config.num_cycles = 30;
  config.rng_seed = 11;
  const ScenarioData serial = simulate_scenario(config, 1);
  const ScenarioData threaded = simulate_scenario(config, 4);
  CHECK(serial.pooled_timestamps.values == threaded.pooled_timestamps.values);
  CHECK(serial.averaged_histogram.densities ==
        threaded.averaged_histogram.densities);
}

TEST_CASE("report table pivots scenarios by component count") {
  ScenarioConfig config = scenario_preset("high_noise");
  config.num_cycles = 25;
  config.rng_seed = 3;
  const ScenarioData data = simulate_scenario(config, 2);
  std::vector<ScenarioReport> reports;
  reports.push_back(
      fit_and_score("high_noise", config, data, ModelKind::gumm, 2, false));
  reports.push_back(
      fit_and_score("high_noise", config, data, ModelKind::gumm, 3, false));
  const std::string table = render_report_table(reports);
  CHECK(table.find("high_noise") != std::string::npos);
  CHECK(table.find("gumm") != std::string::npos);
  CHECK(table.find("M=2") != std::string::npos);
  CHECK(table.find("M=3") != std::string::npos);
}
