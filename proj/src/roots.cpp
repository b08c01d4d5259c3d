#include "wavedecay/roots.hpp"

#include <algorithm>

namespace wavedecay {
namespace {

// Real roots of a x² + b x + c, using the cancellation-free pairing.
std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> out;
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    out.push_back(0.0);
    return out;
  }
  out.push_back(q / a);
  out.push_back(c / q);
  std::sort(out.begin(), out.end());
  return out;
}

double polish(const Cubic& p, double x, double lo, double hi) {
  double best = x;
  double best_res = std::abs(p(x));
  for (int i = 0; i < 4 && best_res > 0.0; ++i) {
    const double slope = p.derivative(best);
    if (slope == 0.0) break;
    const double trial = best - p(best) / slope;
    if (!(trial >= lo && trial <= hi)) break;
    const double res = std::abs(p(trial));
    if (res >= best_res) break;
    best = trial;
    best_res = res;
  }
  return best;
}

int sign_with_tolerance(double v, double tol) {
  if (std::abs(v) <= tol) return 0;
  return v > 0.0 ? 1 : -1;
}

}  // namespace

std::vector<double> cubic_roots_in(const Cubic& p, double lo, double hi, double zero_tol) {
  std::vector<double> breaks{lo, hi};
  for (double d : quadratic_roots(3.0 * p.c3, 2.0 * p.c2, p.c1)) {
    if (d > lo && d < hi) breaks.push_back(d);
  }
  std::sort(breaks.begin(), breaks.end());

  std::vector<int> signs;
  signs.reserve(breaks.size());
  for (double b : breaks) signs.push_back(sign_with_tolerance(p(b), zero_tol));

  std::vector<double> roots;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (signs[i] == 0) roots.push_back(polish(p, breaks[i], lo, hi));
    if (i + 1 < breaks.size() && signs[i] != 0 && signs[i + 1] != 0 &&
        signs[i] != signs[i + 1]) {
      const double r = bisect(p, breaks[i], breaks[i + 1]);
      roots.push_back(polish(p, r, breaks[i], breaks[i + 1]));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace wavedecay
