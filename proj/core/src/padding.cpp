#include "spadfit/padding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spadfit/errors.hpp"

namespace spadfit {

namespace {

double wrap_coordinate(double y, double offset, double cycle_length) {
  double shifted = std::fmod(y - offset, cycle_length);
  if (shifted < 0.0) shifted += cycle_length;
  if (shifted >= cycle_length) shifted = 0.0;
  return shifted;
}

}  // namespace

PaddingPlan select_offset(const Histogram& hist) {
  const std::size_t bins = hist.bin_count();
  if (bins == 0) throw BinningError("select_offset: empty histogram");

  // Window of 5 bins suppresses single-bin shot noise at the default
  // resolution.
  constexpr int kHalfWindow = 2;
  std::size_t best_bin = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bins; ++i) {
    double smoothed = 0.0;
    for (int d = -kHalfWindow; d <= kHalfWindow; ++d) {
      const std::size_t j =
          (i + bins + static_cast<std::size_t>(d + static_cast<int>(bins))) %
          bins;
      smoothed += hist.densities[j];
    }
    if (smoothed < best_value) {
      best_value = smoothed;
      best_bin = i;
    }
  }
  return PaddingPlan{static_cast<double>(best_bin) * hist.bin_width,
                     hist.cycle_length};
}

TimestampSet wrap_shift(const TimestampSet& data, const PaddingPlan& plan) {
  if (data.frame != Frame::relative) {
    throw FrameError("wrap_shift expects relative timestamps");
  }
  if (data.cycle_length != plan.cycle_length) {
    throw FrameError("wrap_shift: mismatched cycle_length");
  }
  TimestampSet out;
  out.frame = Frame::relative;
  out.cycle_length = plan.cycle_length;
  out.values.reserve(data.size());
  for (double y : data.values) {
    out.values.push_back(wrap_coordinate(y, plan.offset, plan.cycle_length));
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

double unwrap_pdf(const GummParams& params, const PaddingPlan& plan,
                  double y) {
  return pdf(params, wrap_coordinate(y, plan.offset, plan.cycle_length));
}

}  // namespace spadfit
