#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace spadfit {

/// Adaptive Simpson quadrature of f over [lo, hi].
template <typename Fn>
double integrate_adaptive(Fn&& f, double lo, double hi, double tol = 1e-10,
                          int max_depth = 48) {
  struct Impl {
    Fn& fn;
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = fn(lm);
      const double frm = fn(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
      }
      return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
             recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    }
  };
  if (!(hi > lo)) return 0.0;
  Impl impl{f};
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.recurse(lo, hi, fa, fm, fb, whole, tol, max_depth);
}

/// log(sum(exp(x))) without overflow; -inf entries are ignored.
inline double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace spadfit
