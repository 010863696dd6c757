#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written the slow, direct way and must not
// call into the code paths it verifies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Nonparalyzable censor, O(n^2): an arrival is rejected if it falls inside
// (r, r + dead_time] of ANY already-registered arrival. For sorted input and
// a nonparalyzable detector this is equivalent to the streaming single-pass
// rule, which is exactly the point of the cross-check.
inline std::vector<double> censor(const std::vector<double>& arrivals,
                                  double dead_time) {
  std::vector<double> registered;
  for (double t : arrivals) {
    bool blocked = false;
    for (double r : registered) {
      if (t > r && t <= r + dead_time) {
        blocked = true;
        break;
      }
    }
    if (!blocked) registered.push_back(t);
  }
  return registered;
}

inline double gauss_density(double y, double mean, double sigma) {
  const double z = (y - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

struct MixtureSpec {
  double cycle_length;
  double uniform_weight;
  std::vector<double> weights;  // per Gaussian
  std::vector<double> means;
  std::vector<double> sigmas;
};

// Dense responsibility matrix in plain linear arithmetic.
inline std::vector<std::vector<double>> responsibilities(
    const MixtureSpec& mix, const std::vector<double>& data) {
  const std::size_t labels = mix.weights.size() + 1;
  std::vector<std::vector<double>> resp(data.size(),
                                        std::vector<double>(labels, 0.0));
  for (std::size_t n = 0; n < data.size(); ++n) {
    const double y = data[n];
    double total = 0.0;
    resp[n][0] = (y >= 0.0 && y < mix.cycle_length)
                     ? mix.uniform_weight / mix.cycle_length
                     : 0.0;
    total += resp[n][0];
    for (std::size_t m = 0; m < mix.weights.size(); ++m) {
      resp[n][m + 1] =
          mix.weights[m] * gauss_density(y, mix.means[m], mix.sigmas[m]);
      total += resp[n][m + 1];
    }
    for (std::size_t l = 0; l < labels; ++l) resp[n][l] /= total;
  }
  return resp;
}

struct Stats {
  std::vector<double> counts;   // per label, uniform first
  std::vector<double> moment1;  // per Gaussian
  std::vector<double> moment2;  // per Gaussian
};

inline Stats expected_stats(const MixtureSpec& mix,
                            const std::vector<double>& data) {
  const auto resp = responsibilities(mix, data);
  Stats stats;
  stats.counts.assign(mix.weights.size() + 1, 0.0);
  stats.moment1.assign(mix.weights.size(), 0.0);
  stats.moment2.assign(mix.weights.size(), 0.0);
  for (std::size_t n = 0; n < data.size(); ++n) {
    for (std::size_t l = 0; l < stats.counts.size(); ++l) {
      stats.counts[l] += resp[n][l];
    }
    for (std::size_t m = 0; m < mix.weights.size(); ++m) {
      stats.moment1[m] += data[n] * resp[n][m + 1];
      stats.moment2[m] += data[n] * data[n] * resp[n][m + 1];
    }
  }
  return stats;
}

// Maximization update straight from the moment ratios; no floors or rescues.
struct Updated {
  double uniform_weight;
  std::vector<double> weights, means, sigmas;
};

inline Updated update(const Stats& stats, std::size_t total_count) {
  Updated out;
  const double total = static_cast<double>(total_count);
  out.uniform_weight = stats.counts[0] / total;
  for (std::size_t m = 0; m < stats.moment1.size(); ++m) {
    const double count = stats.counts[m + 1];
    out.weights.push_back(count / total);
    const double mean = stats.moment1[m] / count;
    out.means.push_back(mean);
    out.sigmas.push_back(std::sqrt(stats.moment2[m] / count - mean * mean));
  }
  return out;
}

// One-sample Kolmogorov-Smirnov statistic against U(0, hi).
inline double ks_uniform(std::vector<double> sample, double hi) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = sample[i] / hi;
    worst = std::max(worst, std::fabs(cdf - static_cast<double>(i) / n));
    worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - cdf));
  }
  return worst;
}

// Small deterministic generator for test instances; xorshift-based so it
// shares nothing with the library's Philox streams.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 1) {}
  std::uint64_t next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
