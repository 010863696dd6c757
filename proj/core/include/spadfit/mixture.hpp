#pragma once

#include <cstddef>
#include <vector>

#include "spadfit/random.hpp"
#include "spadfit/timestamps.hpp"

namespace spadfit {

struct GaussianComponent {
  double weight = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mixture of M Gaussians plus one uniform plateau over [0, cycle_length).
/// A plain Gaussian mixture is the uniform_weight == 0 special case. The
/// Gaussian terms are evaluated over the whole real line, untruncated; the
/// padding module owns any boundary handling.
struct GummParams {
  double cycle_length = 0.0;
  double uniform_weight = 0.0;  // weight of the uniform plateau
  std::vector<GaussianComponent> components;

  std::size_t num_gaussians() const { return components.size(); }

  /// Throws EstimationError when weights do not form a distribution or a
  /// stddev is non-positive.
  void validate() const;
};

double normal_pdf(double y, double mean, double stddev);
double normal_log_pdf(double y, double mean, double stddev);

/// Mixture density at y. The uniform term contributes only on
/// [0, cycle_length); the Gaussian terms everywhere.
double pdf(const GummParams& params, double y);

/// log pdf computed with a stable log-sum of exponentials; -infinity when
/// the density is exactly zero.
double log_pdf(const GummParams& params, double y);

/// Sum of log_pdf over the data in data order. Returns -infinity if any
/// point has zero density. Data must be relative and inside [0, t_r).
double log_likelihood(const GummParams& params, const TimestampSet& data);

/// Ancestral sampling: choose a component by weight, then draw from it.
/// Gaussian draws are folded into [0, cycle_length) so the output stays in
/// the relative frame.
TimestampSet sample(const GummParams& params, std::size_t count,
                    RandomStream& rng);

}  // namespace spadfit
