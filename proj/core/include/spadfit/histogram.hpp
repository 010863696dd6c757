#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spadfit/timestamps.hpp"

namespace spadfit {

/// Uniform-bin density histogram over one repetition period. Densities are
/// counts / (sample_count * bin_width), so a non-empty histogram integrates
/// to 1 and can be compared directly against a probability density.
struct Histogram {
  double cycle_length = 0.0;
  double bin_width = 0.0;
  std::vector<double> densities;
  std::uint64_t sample_count = 0;

  std::size_t bin_count() const { return densities.size(); }
  double bin_center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * bin_width;
  }
  /// Sum of densities times bin_width; 1 within rounding when non-empty.
  double integral() const;
};

/// Bins relative timestamps into cycle_length / bin_width equal bins.
/// Values exactly equal to cycle_length (possible only from file input) are
/// clamped into the last bin so no sample is lost.
Histogram build_histogram(const TimestampSet& timestamps, double bin_width);

/// Per-bin arithmetic mean of densities. Inputs must agree in cycle_length,
/// bin_width and bin count; sample counts are pooled.
Histogram average_histograms(std::span<const Histogram> histograms);

}  // namespace spadfit
