#pragma once

#include <cmath>
#include <vector>

namespace wavedecay {

/// c3 x³ + c2 x² + c1 x + c0, evaluated by Horner's rule.
struct Cubic {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double x) const noexcept { return ((c3 * x + c2) * x + c1) * x + c0; }
  double derivative(double x) const noexcept { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
};

/// Shrinks a sign-change bracket [lo, hi] until no representable midpoint is
/// left. f(lo) and f(hi) must be nonzero with opposite signs.
template <typename Fn>
double bisect(Fn&& f, double lo, double hi) {
  const bool lo_positive = f(lo) > 0.0;
  for (int iter = 0; iter < 2100; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double value = f(mid);
    if (value == 0.0) return mid;
    if ((value > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

/// Real roots of a cubic inside [lo, hi], ascending.
///
/// Brackets come from the interval ends and the real critical points of the
/// cubic, between which it is monotone. A breakpoint whose value is within
/// zero_tol of zero is itself reported (this is how tangential double roots
/// appear). Every bracketed root is bisected and then Newton-polished.
std::vector<double> cubic_roots_in(const Cubic& p, double lo, double hi, double zero_tol);

}  // namespace wavedecay
