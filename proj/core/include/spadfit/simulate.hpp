#pragma once

#include <cstdint>
#include <span>

#include "spadfit/config.hpp"
#include "spadfit/random.hpp"
#include "spadfit/timestamps.hpp"

namespace spadfit {

/// Photon arrival intensity at time t inside one cycle: a Gaussian pulse at
/// pulse_delay carrying signal_level photons plus a flat background carrying
/// noise_level photons.
double flux(const ScenarioConfig& config, double t);

/// flux(t) normalized to integrate to 1 over one cycle.
double normalized_flux(const ScenarioConfig& config, double t);

/// Draws the photon arrivals of one repetition cycle. The count is Poisson
/// with mean signal_level + noise_level; each arrival is a pulse draw with
/// probability signal/(signal+noise), otherwise uniform over the cycle.
/// Pulse draws falling outside [0, cycle_length) are redrawn. Output sorted.
TimestampSet sample_arrivals(const ScenarioConfig& config,
                             std::int64_t cycle_index, RandomStream& rng);

/// Concatenates per-cycle relative timestamps onto one absolute timeline,
/// cycle k (0-based) contributing k * cycle_length + x. Exact ties are broken
/// by nudging the later value up by one representable step so the output is
/// strictly increasing.
TimestampSet to_absolute(std::span<const TimestampSet> per_cycle,
                         double cycle_length);

/// Nonparalyzable dead-time censor. The first arrival always registers; a
/// later arrival registers iff it falls strictly after the previous
/// registration plus dead_time. Dropped arrivals do not extend the window.
TimestampSet censor_dead_time(const TimestampSet& arrivals, double dead_time);

/// Folds absolute timestamps into one cycle (mod cycle_length) and re-sorts.
TimestampSet to_relative(const TimestampSet& registered, double cycle_length);

/// Full chain for one replication: sample each cycle from its own
/// (seed, replication, cycle) substream, merge to the absolute timeline,
/// censor, fold back. Deterministic in (config, replication, seed).
TimestampSet simulate_replication(const ScenarioConfig& config,
                                  std::uint32_t replication,
                                  std::uint64_t seed);

}  // namespace spadfit
