#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spadfit/config.hpp"
#include "spadfit/em.hpp"
#include "spadfit/histogram.hpp"
#include "spadfit/padding.hpp"

namespace spadfit {

enum class ModelKind { gmm, gumm };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// Everything one benchmark run produces: the fitted model, the averaged
/// histogram it was scored against, and the score itself.
struct ScenarioReport {
  std::string scenario_name;
  ScenarioConfig config;
  ModelKind model_kind = ModelKind::gmm;
  int num_gaussians = 0;
  bool padded = false;
  double mse = 0.0;
  FitResult fit;
  Histogram histogram;
};

/// Mean squared difference between the model density at the bin centers
/// (mapped through the padding plan) and the histogram densities.
double mse(const GummParams& params, const PaddingPlan& plan,
           const Histogram& hist);

/// Built-in benchmark scenarios: single_pulse, high_noise, bump, bump_noise.
/// All share the pulse at 4 with half width 0.2, dead time 7.5, 0.05 bins
/// and 20 replications; flux levels, cycle length and acquisition size are
/// per-scenario calibrations (see the source for the rationale).
ScenarioConfig scenario_preset(std::string_view name);
std::vector<std::string> scenario_names();

/// Simulated raw material of one scenario: per-replication registrations and
/// histograms, the averaged histogram, and every registration pooled
/// (sorted) for estimation.
struct ScenarioData {
  std::vector<TimestampSet> replication_timestamps;
  std::vector<Histogram> replication_histograms;
  Histogram averaged_histogram;
  TimestampSet pooled_timestamps;
};

ScenarioData simulate_scenario(const ScenarioConfig& config, int threads = 1);

/// Fit + score on already simulated data; lets callers reuse one simulation
/// across model variants. em_iters <= 0 picks the default budget for M;
/// forced_offset >= 0 overrides the automatic cut selection.
ScenarioReport fit_and_score(std::string scenario_name,
                             const ScenarioConfig& config,
                             const ScenarioData& data, ModelKind model_kind,
                             int num_gaussians, bool padded, int em_iters = 0,
                             double forced_offset = -1.0);

/// Full pipeline: simulate, average, optionally pad, fit, score.
ScenarioReport run_scenario(std::string scenario_name,
                            const ScenarioConfig& config, ModelKind model_kind,
                            int num_gaussians, bool padded, int em_iters = 0,
                            int threads = 1);

/// Aligned text table of MSE by (scenario, model, padding) rows and
/// Gaussian-count columns.
std::string render_report_table(const std::vector<ScenarioReport>& reports);

}  // namespace spadfit
