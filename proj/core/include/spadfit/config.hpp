#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace spadfit {

/// Physical and acquisition parameters of one simulated measurement.
/// All time quantities share one unit (1 unit = 10 ns); counts are plain
/// numbers. Signal and noise levels are mean photons per repetition cycle,
/// so mean_arrivals_per_cycle() is their sum.
struct ScenarioConfig {
  double signal_level = 3.16;      // photons per cycle attributed to the pulse
  double noise_level = 0.1;        // photons per cycle from flat background
  double cycle_length = 10.0;      // repetition period
  double dead_time = 7.5;          // detector hold-off after a registration
  double pulse_delay = 4.0;        // pulse center inside the cycle
  double pulse_half_width = 0.2;   // Gaussian pulse half width
  // 20 replications of 500 cycles each: a 10000-cycle acquisition overall,
  // registering on the order of 10^4 photons at the default flux.
  std::int64_t num_cycles = 500;   // cycles per replication
  double bin_width = 0.05;         // histogram resolution (0.5 ns)
  int num_replications = 20;
  std::uint64_t rng_seed = 0;

  double mean_arrivals_per_cycle() const { return signal_level + noise_level; }

  /// Number of histogram bins; throws BinningError when bin_width does not
  /// divide cycle_length within relative tolerance 1e-9.
  int bin_count() const;

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

/// Sets one field by its config-file key; throws ConfigError on unknown keys
/// or unparsable values. Keys are the member names above.
void apply_override(ScenarioConfig& config, std::string_view key,
                    std::string_view value);

/// Canonical flat key=value rendering; stable byte-for-byte for a given
/// config, which is what the provenance hash is computed over.
std::string canonical_config_text(const ScenarioConfig& config);

/// FNV-1a over canonical_config_text.
std::uint64_t config_hash(const ScenarioConfig& config);

ScenarioConfig parse_config(std::istream& in, std::string_view source_name);
ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config,
                 const std::filesystem::path& path);

}  // namespace spadfit
