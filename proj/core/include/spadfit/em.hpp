#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spadfit/mixture.hpp"
#include "spadfit/random.hpp"
#include "spadfit/timestamps.hpp"

namespace spadfit {

/// Expected sufficient statistics of one E-step. Label 0 is the uniform
/// plateau; Gaussian component m owns label m+1. Moments exist only for the
/// Gaussian labels.
struct SufficientStats {
  std::vector<double> label_counts;    // expected count per label, size M+1
  std::vector<double> first_moments;   // sum of y * responsibility, size M
  std::vector<double> second_moments;  // sum of y^2 * responsibility, size M
  std::uint64_t total_count = 0;

  std::size_t num_gaussians() const { return first_moments.size(); }
};

struct FitOptions {
  int max_iters = 50;
  /// Stop early once the log-likelihood gain of an iteration drops below
  /// this absolute threshold.
  double tol = 1e-8;
  /// Lower bound applied to every fitted stddev; half of the default
  /// histogram resolution, so a component cannot collapse onto one bin.
  double sigma_floor = 0.025;
  /// A Gaussian whose expected count falls below this fraction of N is
  /// considered dead and is re-seeded at the worst-covered data point.
  double empty_rel_threshold = 1e-6;
  /// Extra random restarts; the best final likelihood wins. 0 keeps the
  /// deterministic quantile initialization only.
  int restarts = 0;
};

struct FitResult {
  GummParams params;
  /// Log-likelihood after each completed iteration's update.
  std::vector<double> loglik_trace;
  int iterations_run = 0;
  /// Cyclic shift the training data was fitted under; 0 when unpadded.
  double padding_offset = 0.0;
  bool converged = false;
  /// Counts of stddev-floor clamps and dead-component re-seeds; iterations
  /// touched by either are exempt from the monotone-likelihood guarantee.
  int clamp_events = 0;
  int reinit_events = 0;
};

/// Iteration budget matching the reference experiments: 50, raised to 80
/// once four or more Gaussians are requested.
int default_em_iters(int num_gaussians);

/// Posterior label probabilities for one observation, size M+1, label 0 the
/// uniform plateau. Computed in the log domain and exactly normalized, so
/// the result sums to 1 and never degenerates to an all-zero vector.
std::vector<double> posterior(const GummParams& params, double y);

/// Accumulates expected sufficient statistics over the data in data order.
SufficientStats e_step(const TimestampSet& data, const GummParams& params);

struct MStepResult {
  GummParams params;
  int clamped = 0;        // stddevs raised to the floor
  int reinitialized = 0;  // dead components re-seeded
};

/// Maximization update: weights from expected counts, means and variances
/// from the moment ratios, then the stddev floor. Dead components are
/// re-seeded at the data point with the lowest density under `previous`
/// (weights renormalized afterwards). Throws EstimationError when every
/// Gaussian is dead.
MStepResult m_step(const SufficientStats& stats, const GummParams& previous,
                   std::span<const double> data,
                   const FitOptions& options = {});

/// Deterministic starting point: means at the (k + 0.5)/M data quantiles,
/// common stddev cycle_length / (4M), uniform weight 0.1 when requested.
GummParams init_params(const TimestampSet& data, int num_gaussians,
                       bool with_uniform);

/// Full EM loop. `rng` is consumed only when options.restarts > 0.
FitResult fit(const TimestampSet& data, int num_gaussians, bool with_uniform,
              const FitOptions& options = {}, RandomStream* rng = nullptr);

}  // namespace spadfit
