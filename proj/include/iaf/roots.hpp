#pragma once

#include <cmath>
#include <limits>

namespace iaf {

struct RootResult {
  double x = 0.0;      // best point found
  double value = 0.0;  // function value at x
  double lo = 0.0;     // final bracket, f(lo) < 0 <= f(hi)
  double hi = 0.0;
  int evaluations = 0;
};

/// Root of an increasing function given a bracket with f(lo) < 0 < f(hi).
/// Endpoint values may be infinite. Regula falsi steps are taken while they
/// halve the bracket every two iterations; otherwise the step falls back to
/// bisection. Stops when |f| <= value_tol or the bracket cannot be split.
template <class Fn>
RootResult solve_increasing(Fn&& fn, double lo, double hi, double f_lo, double f_hi,
                            double value_tol, int max_evaluations = 500) {
  RootResult out;
  out.lo = lo;
  out.hi = hi;
  out.x = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  out.value = std::abs(f_lo) < std::abs(f_hi) ? f_lo : f_hi;

  double checkpoint_width = hi - lo;
  int since_checkpoint = 0;
  bool force_bisection = false;
  while (out.evaluations < max_evaluations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;

    double x = mid;
    if (!force_bisection && std::isfinite(f_lo) && std::isfinite(f_hi)) {
      const double secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (secant > lo && secant < hi) x = secant;
    }

    const double fx = fn(x);
    ++out.evaluations;
    if (std::abs(fx) < std::abs(out.value) || std::isnan(out.value)) {
      out.x = x;
      out.value = fx;
    }
    if (fx < 0.0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    if (std::abs(fx) <= value_tol) break;

    if (force_bisection) {
      force_bisection = false;
      checkpoint_width = hi - lo;
      since_checkpoint = 0;
    } else if (++since_checkpoint == 2) {
      force_bisection = (hi - lo) > 0.5 * checkpoint_width;
      checkpoint_width = hi - lo;
      since_checkpoint = 0;
    }
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

}  // namespace iaf
