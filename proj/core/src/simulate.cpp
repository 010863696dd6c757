#include "spadfit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "spadfit/errors.hpp"
#include "spadfit/mixture.hpp"

namespace spadfit {

double flux(const ScenarioConfig& config, double t) {
  return config.signal_level *
             normal_pdf(t, config.pulse_delay, config.pulse_half_width) +
         config.noise_level / config.cycle_length;
}

double normalized_flux(const ScenarioConfig& config, double t) {
  return flux(config, t) / config.mean_arrivals_per_cycle();
}

TimestampSet sample_arrivals(const ScenarioConfig& config,
                             std::int64_t cycle_index, RandomStream& rng) {
  config.validate();
  if (cycle_index < 0 || cycle_index >= config.num_cycles) {
    throw ConfigError("cycle_index out of range");
  }
  const double total = config.mean_arrivals_per_cycle();
  const double signal_fraction = config.signal_level / total;
  const std::uint64_t count = rng.poisson(total);

  TimestampSet out;
  out.frame = Frame::relative;
  out.cycle_length = config.cycle_length;
  out.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (rng.uniform() < signal_fraction) {
      double t;
      do {
        t = rng.normal(config.pulse_delay, config.pulse_half_width);
      } while (t < 0.0 || t >= config.cycle_length);
      out.values.push_back(t);
    } else {
      out.values.push_back(rng.uniform(0.0, config.cycle_length));
    }
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

TimestampSet to_absolute(std::span<const TimestampSet> per_cycle,
                         double cycle_length) {
  std::size_t total = 0;
  for (const TimestampSet& cycle : per_cycle) {
    if (cycle.frame != Frame::relative) {
      throw FrameError("to_absolute expects relative per-cycle sets");
    }
    if (cycle.cycle_length != cycle_length) {
      throw FrameError("to_absolute: mismatched cycle_length");
    }
    total += cycle.size();
  }

  TimestampSet out;
  out.frame = Frame::absolute;
  out.cycle_length = cycle_length;
  out.values.reserve(total);
  for (std::size_t k = 0; k < per_cycle.size(); ++k) {
    const double base = static_cast<double>(k) * cycle_length;
    for (double x : per_cycle[k].values) {
      double t = base + x;
      // Strict ordering is required downstream; break exact ties upward.
      if (!out.values.empty() && t <= out.values.back()) {
        t = std::nextafter(out.values.back(),
                           std::numeric_limits<double>::infinity());
      }
      out.values.push_back(t);
    }
  }
  return out;
}

TimestampSet censor_dead_time(const TimestampSet& arrivals, double dead_time) {
  if (arrivals.frame != Frame::absolute) {
    throw FrameError("censor_dead_time expects absolute timestamps");
  }
  if (dead_time < 0.0) throw ConfigError("dead_time must be non-negative");
  if (std::adjacent_find(arrivals.values.begin(), arrivals.values.end(),
                         std::greater_equal<double>()) !=
      arrivals.values.end()) {
    throw OrderingError("censor_dead_time: input not strictly increasing");
  }

  TimestampSet out;
  out.frame = Frame::absolute;
  out.cycle_length = arrivals.cycle_length;
  out.values.reserve(arrivals.size());
  double window_end = -std::numeric_limits<double>::infinity();
  for (double t : arrivals.values) {
    if (t > window_end) {
      out.values.push_back(t);
      window_end = t + dead_time;
    }
  }
  return out;
}

TimestampSet to_relative(const TimestampSet& registered, double cycle_length) {
  if (!(cycle_length > 0.0)) {
    throw FrameError("to_relative: cycle_length must be positive");
  }
  TimestampSet out;
  out.frame = Frame::relative;
  out.cycle_length = cycle_length;
  out.values.reserve(registered.size());
  for (double t : registered.values) {
    double folded = std::fmod(t, cycle_length);
    if (folded < 0.0) folded += cycle_length;
    if (folded >= cycle_length) folded = 0.0;
    out.values.push_back(folded);
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

TimestampSet simulate_replication(const ScenarioConfig& config,
                                  std::uint32_t replication,
                                  std::uint64_t seed) {
  config.validate();
  std::vector<TimestampSet> cycles;
  cycles.reserve(static_cast<std::size_t>(config.num_cycles));
  for (std::int64_t k = 0; k < config.num_cycles; ++k) {
    RandomStream rng(seed, StreamDomain::arrivals, replication,
                     static_cast<std::uint32_t>(k));
    cycles.push_back(sample_arrivals(config, k, rng));
  }
  const TimestampSet absolute = to_absolute(cycles, config.cycle_length);
  const TimestampSet registered = censor_dead_time(absolute, config.dead_time);
  return to_relative(registered, config.cycle_length);
}

}  // namespace spadfit
