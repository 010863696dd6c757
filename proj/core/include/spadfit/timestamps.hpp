#pragma once

#include <vector>

namespace spadfit {

/// Absolute: measured from the start of the acquisition, strictly increasing.
/// Relative: folded into one repetition period, every value in [0, t_r).
enum class Frame { absolute, relative };

struct TimestampSet {
  std::vector<double> values;
  Frame frame = Frame::relative;
  double cycle_length = 0.0;  // t_r; required in the relative frame

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

}  // namespace spadfit
