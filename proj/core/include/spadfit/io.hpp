#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "spadfit/evaluate.hpp"
#include "spadfit/histogram.hpp"
#include "spadfit/mixture.hpp"
#include "spadfit/timestamps.hpp"

namespace spadfit {

/// Shortest round-trip decimal rendering; parsing it back recovers the exact
/// double, which is what keeps outputs byte-identical across reruns.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Identifies the run every output file came from. Both fields appear in
/// every header this library writes.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

enum class TimestampFormat { text, binary };

/// Text: '#'-header then one decimal per line. Binary: magic "SPTSBIN1",
/// little-endian header, then count 64-bit floats.
void write_timestamps(const std::filesystem::path& path,
                      const TimestampSet& timestamps, TimestampFormat format,
                      const Provenance& provenance);
TimestampSet read_timestamps(const std::filesystem::path& path,
                             Provenance* provenance = nullptr);

void write_histogram(const std::filesystem::path& path, const Histogram& hist,
                     const Provenance& provenance);
Histogram read_histogram(const std::filesystem::path& path,
                         Provenance* provenance = nullptr);

void write_params(std::ostream& out, const GummParams& params);
GummParams read_params(std::istream& in, std::string_view source_name);
void save_params(const std::filesystem::path& path, const GummParams& params,
                 const Provenance& provenance);
GummParams load_params(const std::filesystem::path& path);

struct StoredFitResult {
  FitResult fit;
  ModelKind model_kind = ModelKind::gmm;
  Provenance provenance;
};

void write_fit_result(const std::filesystem::path& path, const FitResult& fit,
                      ModelKind model_kind, const Provenance& provenance);
StoredFitResult read_fit_result(const std::filesystem::path& path);

void write_scenario_report(const std::filesystem::path& path,
                           const ScenarioReport& report);
ScenarioReport read_scenario_report(const std::filesystem::path& path);

/// Three columns per bin: center, histogram density, model density (the
/// model mapped through the padding plan). Consumed by external plotting.
void write_plot_data(const std::filesystem::path& path, const Histogram& hist,
                     const GummParams& params, const PaddingPlan& plan,
                     const Provenance& provenance);

}  // namespace spadfit
