#include "spadfit/mixture.hpp"

#include <cmath>
#include <limits>

#include "spadfit/errors.hpp"

namespace spadfit {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void GummParams::validate() const {
  if (!(cycle_length > 0.0)) {
    throw EstimationError("mixture: cycle_length must be positive");
  }
  if (uniform_weight < 0.0) {
    throw EstimationError("mixture: negative uniform weight");
  }
  double total = uniform_weight;
  for (const GaussianComponent& c : components) {
    if (c.weight < 0.0) throw EstimationError("mixture: negative weight");
    if (!(c.stddev > 0.0)) {
      throw EstimationError("mixture: stddev must be positive");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw EstimationError("mixture: weights must sum to 1");
  }
  if (components.empty() && uniform_weight < 1.0) {
    throw EstimationError("mixture: no components and uniform_weight < 1");
  }
}

double normal_pdf(double y, double mean, double stddev) {
  const double z = (y - mean) / stddev;
  return kInvSqrt2Pi / stddev * std::exp(-0.5 * z * z);
}

double normal_log_pdf(double y, double mean, double stddev) {
  const double z = (y - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) - kLogSqrt2Pi;
}

double pdf(const GummParams& params, double y) {
  double density = 0.0;
  if (params.uniform_weight > 0.0 && y >= 0.0 && y < params.cycle_length) {
    density += params.uniform_weight / params.cycle_length;
  }
  for (const GaussianComponent& c : params.components) {
    if (c.weight > 0.0) density += c.weight * normal_pdf(y, c.mean, c.stddev);
  }
  return density;
}

double log_pdf(const GummParams& params, double y) {
  // Fixed scratch keeps this allocation-free; 32 Gaussians is far past the
  // intended model orders.
  if (params.components.size() > 32) {
    throw EstimationError("log_pdf: more than 32 Gaussian components");
  }
  double peak = kNegInf;
  double terms[33];
  std::size_t n = 0;
  if (params.uniform_weight > 0.0 && y >= 0.0 && y < params.cycle_length) {
    terms[n++] = std::log(params.uniform_weight) - std::log(params.cycle_length);
  }
  for (const GaussianComponent& c : params.components) {
    if (c.weight <= 0.0) continue;
    terms[n++] = std::log(c.weight) + normal_log_pdf(y, c.mean, c.stddev);
  }
  if (n == 0) return kNegInf;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, terms[i]);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(terms[i] - peak);
  return peak + std::log(sum);
}

double log_likelihood(const GummParams& params, const TimestampSet& data) {
  if (data.frame != Frame::relative) {
    throw FrameError("log_likelihood expects relative timestamps");
  }
  double total = 0.0;
  for (double y : data.values) {
    if (y < 0.0 || y >= params.cycle_length) {
      throw DomainError("log_likelihood: data outside [0, cycle_length)");
    }
    const double lp = log_pdf(params, y);
    if (lp == kNegInf) return kNegInf;
    total += lp;
  }
  return total;
}

TimestampSet sample(const GummParams& params, std::size_t count,
                    RandomStream& rng) {
  params.validate();
  TimestampSet out;
  out.frame = Frame::relative;
  out.cycle_length = params.cycle_length;
  out.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double pick = rng.uniform();
    double y;
    if (pick < params.uniform_weight) {
      y = rng.uniform(0.0, params.cycle_length);
    } else {
      pick -= params.uniform_weight;
      std::size_t chosen = params.components.size() - 1;
      for (std::size_t m = 0; m < params.components.size(); ++m) {
        if (pick < params.components[m].weight) {
          chosen = m;
          break;
        }
        pick -= params.components[m].weight;
      }
      const GaussianComponent& c = params.components[chosen];
      y = rng.normal(c.mean, c.stddev);
      y = std::fmod(y, params.cycle_length);
      if (y < 0.0) y += params.cycle_length;
      if (y >= params.cycle_length) y = 0.0;
    }
    out.values.push_back(y);
  }
  return out;
}

}  // namespace spadfit
