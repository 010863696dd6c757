#include "spadfit/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "spadfit/errors.hpp"

namespace spadfit {

namespace {

std::size_t checked_bin_count(double cycle_length, double bin_width) {
  if (!(bin_width > 0.0) || !(cycle_length > 0.0)) {
    throw BinningError("bin_width and cycle_length must be positive");
  }
  const double ratio = cycle_length / bin_width;
  const long long bins = std::llround(ratio);
  if (bins < 1 || std::fabs(ratio - static_cast<double>(bins)) > 1e-9 * ratio) {
    throw BinningError("bin_width does not divide cycle_length");
  }
  return static_cast<std::size_t>(bins);
}

}  // namespace

double Histogram::integral() const {
  double sum = 0.0;
  for (double d : densities) sum += d;
  return sum * bin_width;
}

Histogram build_histogram(const TimestampSet& timestamps, double bin_width) {
  if (timestamps.frame != Frame::relative) {
    throw FrameError("build_histogram expects relative timestamps");
  }
  const double cycle_length = timestamps.cycle_length;
  const std::size_t bins = checked_bin_count(cycle_length, bin_width);

  Histogram hist;
  hist.cycle_length = cycle_length;
  hist.bin_width = bin_width;
  hist.densities.assign(bins, 0.0);
  hist.sample_count = timestamps.size();
  if (timestamps.empty()) return hist;

  for (double y : timestamps.values) {
    if (y < 0.0 || y > cycle_length) {
      throw DomainError("timestamp outside [0, cycle_length]");
    }
    std::size_t idx =
        std::min(bins - 1, static_cast<std::size_t>(y / bin_width));
    // Half-open bins [i*w, (i+1)*w): correct the floor against rounding.
    if (y < static_cast<double>(idx) * bin_width) {
      --idx;
    } else if (idx + 1 < bins &&
               y >= static_cast<double>(idx + 1) * bin_width) {
      ++idx;
    }
    hist.densities[idx] += 1.0;
  }
  const double norm =
      1.0 / (static_cast<double>(hist.sample_count) * bin_width);
  for (double& d : hist.densities) d *= norm;
  return hist;
}

Histogram average_histograms(std::span<const Histogram> histograms) {
  if (histograms.empty()) {
    throw BinningError("average_histograms: no input histograms");
  }
  const Histogram& first = histograms.front();
  Histogram out;
  out.cycle_length = first.cycle_length;
  out.bin_width = first.bin_width;
  out.densities.assign(first.bin_count(), 0.0);
  for (const Histogram& h : histograms) {
    if (h.cycle_length != out.cycle_length || h.bin_width != out.bin_width ||
        h.bin_count() != out.bin_count()) {
      throw BinningError("average_histograms: mismatched histogram shapes");
    }
    for (std::size_t i = 0; i < h.bin_count(); ++i) {
      out.densities[i] += h.densities[i];
    }
    out.sample_count += h.sample_count;
  }
  const double inv = 1.0 / static_cast<double>(histograms.size());
  for (double& d : out.densities) d *= inv;
  return out;
}

}  // namespace spadfit
