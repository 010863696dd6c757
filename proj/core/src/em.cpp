#include "spadfit/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spadfit/errors.hpp"

namespace spadfit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Writes the posterior over labels 0..M into `out` and returns log pdf(y).
/// Everything runs in the log domain; the final exact normalization keeps
/// row sums at 1 to machine precision.
double posterior_into(const GummParams& params, double y,
                      std::span<double> out) {
  const std::size_t labels = params.num_gaussians() + 1;
  double peak = kNegInf;
  out[0] = (params.uniform_weight > 0.0 && y >= 0.0 && y < params.cycle_length)
               ? std::log(params.uniform_weight) - std::log(params.cycle_length)
               : kNegInf;
  peak = out[0];
  for (std::size_t m = 0; m < params.num_gaussians(); ++m) {
    const GaussianComponent& c = params.components[m];
    out[m + 1] = c.weight > 0.0
                     ? std::log(c.weight) + normal_log_pdf(y, c.mean, c.stddev)
                     : kNegInf;
    peak = std::max(peak, out[m + 1]);
  }
  if (!std::isfinite(peak)) {
    // Zero density under every label: hand the point to the nearest mean so
    // the posterior stays a distribution.
    std::size_t nearest = params.num_gaussians() > 0 ? 1 : 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < params.num_gaussians(); ++m) {
      const double d = std::fabs(y - params.components[m].mean);
      if (d < best) {
        best = d;
        nearest = m + 1;
      }
    }
    for (std::size_t l = 0; l < labels; ++l) out[l] = l == nearest ? 1.0 : 0.0;
    return kNegInf;
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < labels; ++l) {
    out[l] = std::exp(out[l] - peak);
    sum += out[l];
  }
  const double log_density = peak + std::log(sum);
  const double inv = 1.0 / sum;
  for (std::size_t l = 0; l < labels; ++l) out[l] *= inv;
  return log_density;
}

void check_fit_data(const TimestampSet& data, const GummParams& params) {
  if (data.frame != Frame::relative) {
    throw FrameError("EM expects relative timestamps");
  }
  if (data.empty()) throw EstimationError("EM: empty data");
  for (double y : data.values) {
    if (y < 0.0 || y >= params.cycle_length) {
      throw DomainError("EM: data outside [0, cycle_length)");
    }
  }
}

/// One pass over the data: sufficient statistics plus the log-likelihood of
/// `params`, both accumulated in data order.
double accumulate_stats(const TimestampSet& data, const GummParams& params,
                        SufficientStats& stats) {
  const std::size_t gaussians = params.num_gaussians();
  stats.label_counts.assign(gaussians + 1, 0.0);
  stats.first_moments.assign(gaussians, 0.0);
  stats.second_moments.assign(gaussians, 0.0);
  stats.total_count = data.size();

  std::vector<double> resp(gaussians + 1);
  double loglik = 0.0;
  for (double y : data.values) {
    loglik += posterior_into(params, y, resp);
    stats.label_counts[0] += resp[0];
    for (std::size_t m = 0; m < gaussians; ++m) {
      const double r = resp[m + 1];
      stats.label_counts[m + 1] += r;
      stats.first_moments[m] += y * r;
      stats.second_moments[m] += y * y * r;
    }
  }
  return loglik;
}

GummParams random_init(const TimestampSet& data, int num_gaussians,
                       bool with_uniform, RandomStream& rng) {
  GummParams params;
  params.cycle_length = data.cycle_length;
  params.uniform_weight = with_uniform ? 0.1 : 0.0;
  params.components.resize(static_cast<std::size_t>(num_gaussians));
  const double weight =
      (1.0 - params.uniform_weight) / static_cast<double>(num_gaussians);
  const double spread =
      data.cycle_length / (4.0 * static_cast<double>(num_gaussians));
  for (GaussianComponent& c : params.components) {
    const std::size_t pick = static_cast<std::size_t>(
        rng.uniform() * static_cast<double>(data.size()));
    c.weight = weight;
    c.mean = data.values[std::min(pick, data.size() - 1)];
    c.stddev = spread;
  }
  return params;
}

}  // namespace

int default_em_iters(int num_gaussians) { return num_gaussians >= 4 ? 80 : 50; }

std::vector<double> posterior(const GummParams& params, double y) {
  if (y < 0.0 || y >= params.cycle_length) {
    throw DomainError("posterior: point outside [0, cycle_length)");
  }
  std::vector<double> out(params.num_gaussians() + 1);
  posterior_into(params, y, out);
  return out;
}

SufficientStats e_step(const TimestampSet& data, const GummParams& params) {
  check_fit_data(data, params);
  SufficientStats stats;
  accumulate_stats(data, params, stats);
  return stats;
}

MStepResult m_step(const SufficientStats& stats, const GummParams& previous,
                   std::span<const double> data, const FitOptions& options) {
  if (stats.total_count == 0) throw EstimationError("m_step: no data");
  const std::size_t gaussians = stats.num_gaussians();
  if (stats.label_counts.size() != gaussians + 1 ||
      stats.second_moments.size() != gaussians) {
    throw EstimationError("m_step: inconsistent statistics shape");
  }
  const double total = static_cast<double>(stats.total_count);
  const double empty_threshold = options.empty_rel_threshold * total;

  MStepResult result;
  result.params.cycle_length = previous.cycle_length;
  result.params.uniform_weight = stats.label_counts[0] / total;
  result.params.components.resize(gaussians);

  std::size_t alive = 0;
  for (std::size_t m = 0; m < gaussians; ++m) {
    GaussianComponent& c = result.params.components[m];
    const double count = stats.label_counts[m + 1];
    if (count < empty_threshold) {
      c.weight = 0.0;  // re-seeded below
      continue;
    }
    ++alive;
    c.weight = count / total;
    c.mean = stats.first_moments[m] / count;
    const double variance =
        stats.second_moments[m] / count - c.mean * c.mean;
    c.stddev = std::sqrt(std::max(variance, 0.0));
    if (c.stddev < options.sigma_floor) {
      c.stddev = options.sigma_floor;
      ++result.clamped;
    }
  }

  if (gaussians > 0 && alive == 0) {
    throw EstimationError("m_step: every Gaussian component is empty");
  }

  for (std::size_t m = 0; m < gaussians; ++m) {
    GaussianComponent& c = result.params.components[m];
    if (stats.label_counts[m + 1] >= empty_threshold) continue;
    if (data.empty()) {
      throw EstimationError(
          "m_step: empty component but no data to re-seed it from");
    }
    double worst = std::numeric_limits<double>::infinity();
    double seed_point = data.front();
    for (double y : data) {
      const double density = pdf(previous, y);
      if (density < worst) {
        worst = density;
        seed_point = y;
      }
    }
    c.mean = seed_point;
    c.stddev = std::max(previous.cycle_length /
                            (4.0 * static_cast<double>(gaussians)),
                        options.sigma_floor);
    c.weight = 1.0 / static_cast<double>(gaussians);
    ++result.reinitialized;
  }

  if (result.reinitialized > 0) {
    double sum = result.params.uniform_weight;
    for (const GaussianComponent& c : result.params.components) {
      sum += c.weight;
    }
    result.params.uniform_weight /= sum;
    for (GaussianComponent& c : result.params.components) c.weight /= sum;
  }
  return result;
}

GummParams init_params(const TimestampSet& data, int num_gaussians,
                       bool with_uniform) {
  if (data.frame != Frame::relative) {
    throw FrameError("init_params expects relative timestamps");
  }
  if (num_gaussians < 1) {
    throw EstimationError("init_params: need at least one Gaussian");
  }
  if (data.size() < static_cast<std::size_t>(num_gaussians)) {
    throw EstimationError("init_params: fewer data points than components");
  }
  std::vector<double> sorted = data.values;
  std::sort(sorted.begin(), sorted.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] != sorted[i - 1]) ++distinct;
  }
  if (distinct < static_cast<std::size_t>(num_gaussians)) {
    throw EstimationError(
        "init_params: fewer distinct values than components");
  }

  GummParams params;
  params.cycle_length = data.cycle_length;
  params.uniform_weight = with_uniform ? 0.1 : 0.0;
  params.components.resize(static_cast<std::size_t>(num_gaussians));
  const double weight =
      (1.0 - params.uniform_weight) / static_cast<double>(num_gaussians);
  const double spread =
      data.cycle_length / (4.0 * static_cast<double>(num_gaussians));
  const double last = static_cast<double>(sorted.size() - 1);
  for (int k = 0; k < num_gaussians; ++k) {
    const double q = (static_cast<double>(k) + 0.5) /
                     static_cast<double>(num_gaussians);
    const double position = q * last;
    const std::size_t lo = static_cast<std::size_t>(position);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = position - static_cast<double>(lo);
    GaussianComponent& c = params.components[static_cast<std::size_t>(k)];
    c.weight = weight;
    c.mean = sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    c.stddev = spread;
  }
  return params;
}

FitResult fit(const TimestampSet& data, int num_gaussians, bool with_uniform,
              const FitOptions& options, RandomStream* rng) {
  if (options.max_iters < 1) {
    throw EstimationError("fit: max_iters must be at least 1");
  }
  const int attempts = std::max(0, options.restarts) + 1;
  if (attempts > 1 && rng == nullptr) {
    throw EstimationError("fit: restarts require a random stream");
  }

  FitResult best;
  double best_final = kNegInf;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    GummParams params =
        attempt == 0 ? init_params(data, num_gaussians, with_uniform)
                     : random_init(data, num_gaussians, with_uniform, *rng);
    check_fit_data(data, params);

    FitResult result;
    SufficientStats stats;
    double loglik = accumulate_stats(data, params, stats);
    for (int iter = 0; iter < options.max_iters; ++iter) {
      MStepResult update = m_step(stats, params, data.values, options);
      params = std::move(update.params);
      result.clamp_events += update.clamped;
      result.reinit_events += update.reinitialized;
      // This pass doubles as the next iteration's E-step.
      const double updated_loglik = accumulate_stats(data, params, stats);
      result.loglik_trace.push_back(updated_loglik);
      const double gain = updated_loglik - loglik;
      loglik = updated_loglik;
      if (gain < options.tol && iter > 0) {
        result.converged = true;
        break;
      }
    }
    result.params = std::move(params);
    result.iterations_run = static_cast<int>(result.loglik_trace.size());
    if (result.loglik_trace.back() > best_final || attempt == 0) {
      best_final = result.loglik_trace.back();
      best = std::move(result);
    }
  }
  return best;
}

}  // namespace spadfit
