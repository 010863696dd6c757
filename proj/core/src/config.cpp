#include "spadfit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spadfit/errors.hpp"
#include "spadfit/io.hpp"

namespace spadfit {

int ScenarioConfig::bin_count() const {
  if (!(bin_width > 0.0) || !(cycle_length > 0.0)) {
    throw BinningError("bin_width and cycle_length must be positive");
  }
  const double ratio = cycle_length / bin_width;
  const long long bins = std::llround(ratio);
  if (bins < 1 || std::fabs(ratio - static_cast<double>(bins)) > 1e-9 * ratio) {
    throw BinningError("bin_width does not divide cycle_length: " +
                       format_double(bin_width) + " vs " +
                       format_double(cycle_length));
  }
  return static_cast<int>(bins);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (signal_level < 0.0 || noise_level < 0.0) {
    fail("signal_level and noise_level must be non-negative");
  }
  if (!(signal_level + noise_level > 0.0)) {
    fail("signal_level + noise_level must be positive");
  }
  if (!(cycle_length > 0.0)) fail("cycle_length must be positive");
  if (!(pulse_half_width > 0.0) || pulse_half_width > cycle_length / 10.0) {
    fail("pulse_half_width must lie in (0, cycle_length/10]");
  }
  if (pulse_delay < 0.0 || pulse_delay >= cycle_length) {
    fail("pulse_delay must lie in [0, cycle_length)");
  }
  if (dead_time < 0.0) fail("dead_time must be non-negative");
  if (num_cycles < 1) fail("num_cycles must be at least 1");
  if (num_replications < 1) fail("num_replications must be at least 1");
  try {
    (void)bin_count();
  } catch (const BinningError& e) {
    fail(e.what());
  }
}

namespace {

double parse_double_field(std::string_view key, std::string_view value) {
  try {
    return parse_double(value);
  } catch (const IoError&) {
    throw ConfigError("config key '" + std::string(key) +
                      "': bad numeric value '" + std::string(value) + "'");
  }
}

std::int64_t parse_int_field(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) +
                      "': bad integer value '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t parse_uint_field(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) +
                      "': bad unsigned value '" + std::string(value) + "'");
  }
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

void apply_override(ScenarioConfig& config, std::string_view key,
                    std::string_view value) {
  if (key == "signal_level") {
    config.signal_level = parse_double_field(key, value);
  } else if (key == "noise_level") {
    config.noise_level = parse_double_field(key, value);
  } else if (key == "cycle_length") {
    config.cycle_length = parse_double_field(key, value);
  } else if (key == "dead_time") {
    config.dead_time = parse_double_field(key, value);
  } else if (key == "pulse_delay") {
    config.pulse_delay = parse_double_field(key, value);
  } else if (key == "pulse_half_width") {
    config.pulse_half_width = parse_double_field(key, value);
  } else if (key == "num_cycles") {
    config.num_cycles = parse_int_field(key, value);
  } else if (key == "bin_width") {
    config.bin_width = parse_double_field(key, value);
  } else if (key == "num_replications") {
    config.num_replications =
        static_cast<int>(parse_int_field(key, value));
  } else if (key == "rng_seed") {
    config.rng_seed = parse_uint_field(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string canonical_config_text(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "signal_level = " << format_double(config.signal_level) << '\n'
      << "noise_level = " << format_double(config.noise_level) << '\n'
      << "cycle_length = " << format_double(config.cycle_length) << '\n'
      << "dead_time = " << format_double(config.dead_time) << '\n'
      << "pulse_delay = " << format_double(config.pulse_delay) << '\n'
      << "pulse_half_width = " << format_double(config.pulse_half_width)
      << '\n'
      << "num_cycles = " << config.num_cycles << '\n'
      << "bin_width = " << format_double(config.bin_width) << '\n'
      << "num_replications = " << config.num_replications << '\n'
      << "rng_seed = " << config.rng_seed << '\n';
  return out.str();
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  const std::string text = canonical_config_text(config);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

ScenarioConfig parse_config(std::istream& in, std::string_view source_name) {
  ScenarioConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source_name) + ":" +
                        std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string_view key = trim(stripped.substr(0, eq));
    const std::string_view value = trim(stripped.substr(eq + 1));
    try {
      apply_override(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source_name) + ":" +
                        std::to_string(line_number) + ": " + e.what());
    }
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

void save_config(const ScenarioConfig& config,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << "# scenario config (time unit = 10 ns)\n"
      << canonical_config_text(config);
  if (!out) throw IoError("failed writing config file " + path.string());
}

}  // namespace spadfit
