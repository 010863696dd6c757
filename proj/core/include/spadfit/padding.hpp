#pragma once

#include "spadfit/histogram.hpp"
#include "spadfit/mixture.hpp"
#include "spadfit/timestamps.hpp"

namespace spadfit {

/// A cyclic re-cut of the one-period domain. Fitting happens in the shifted
/// frame (the cut placed where the density is lowest, so boundary structure
/// sits in the interior); evaluation maps back by wrapping the coordinate.
struct PaddingPlan {
  double offset = 0.0;  // in [0, cycle_length)
  double cycle_length = 0.0;
};

/// Picks the cut at the left edge of the bin minimizing a 5-bin circular
/// moving average of the densities; ties go to the smallest bin index.
PaddingPlan select_offset(const Histogram& hist);

/// y -> mod(y - offset, cycle_length), re-sorted. Length preserved.
TimestampSet wrap_shift(const TimestampSet& data, const PaddingPlan& plan);

/// Density fitted in the shifted frame, evaluated at an original-frame
/// coordinate. Exactly pdf(params, mod(y - offset, cycle_length)).
double unwrap_pdf(const GummParams& params, const PaddingPlan& plan, double y);

}  // namespace spadfit
