#include "wavedecay/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavedecay/errors.hpp"
#include "wavedecay/roots.hpp"

namespace wavedecay {
namespace {

constexpr double kRootTol = 1e-12;
constexpr double kIdentityTol = 1e-10;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_lambda1(double lambda1) {
  if (!positive_finite(lambda1)) throw InvalidArgument("lambda1 must be positive");
}

// sqrt((σ0-2ε)² + ε²(σ1-ε)²/λ1); the radicand of F divided by λ1².
// hypot keeps F(0) and, for σ0 = σ1, F(σ0) exactly zero.
double scaled_root(double eps, double sigma0, double sigma1, double lambda1) {
  return std::hypot(sigma0 - 2.0 * eps, eps * (sigma1 - eps) / std::sqrt(lambda1));
}

Cubic slope_polynomial(double sigma0, double sigma1, double lambda1) {
  return Cubic{-2.0, 3.0 * sigma1, -(4.0 * lambda1 + sigma1 * sigma1), 2.0 * lambda1 * sigma0};
}

double cubic_scale(double sigma0, double sigma1, double lambda1) {
  return std::max(std::abs(2.0 * lambda1 * sigma0), std::abs(4.0 * lambda1 + sigma1 * sigma1));
}

}  // namespace

DampingBounds::DampingBounds(double sigma0, double sigma1) : sigma0_(sigma0), sigma1_(sigma1) {
  if (!positive_finite(sigma0)) throw InvalidArgument("sigma0 must be positive");
  if (!positive_finite(sigma1)) throw InvalidArgument("sigma1 must be positive and finite");
  if (sigma1 < sigma0) throw InvalidArgument("sigma1 < sigma0");
}

std::string_view to_string(Lambda1Provenance p) noexcept {
  switch (p) {
    case Lambda1Provenance::analytic: return "analytic";
    case Lambda1Provenance::discrete: return "discrete";
    case Lambda1Provenance::user_supplied: return "user-supplied";
  }
  return "unknown";
}

SpectralGap::SpectralGap(double lambda1, Lambda1Provenance provenance)
    : lambda1_(lambda1), provenance_(provenance) {
  require_lambda1(lambda1);
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::unique_max: return "unique_max";
    case Regime::bifurcation: return "bifurcation";
    case Regime::two_maxima: return "two_maxima";
  }
  return "unknown";
}

double gradient_coefficient(double eps, double eta, double sigma1, double lambda1) {
  if (!positive_finite(eta)) throw InvalidArgument("eta must be positive");
  require_lambda1(lambda1);
  return eps + eps * (eps - sigma1) * eta / (2.0 * lambda1);
}

double velocity_coefficient(double eps, double eta, double sigma0, double sigma1) {
  if (!positive_finite(eta)) throw InvalidArgument("eta must be positive");
  return sigma0 - eps + eps * (eps - sigma1) / (2.0 * eta);
}

double balancing_eta(double eps, double sigma0, double sigma1, double lambda1) {
  require_lambda1(lambda1);
  if (!(eps > 0.0 && eps < sigma1)) {
    throw InvalidArgument("balancing eta needs 0 < eps < sigma1");
  }
  const double root = scaled_root(eps, sigma0, sigma1, lambda1);
  const double tilt = 2.0 * eps - sigma0;
  const double spread = eps * (sigma1 - eps);
  // Closed form λ1(root + tilt)/spread cancels when tilt < 0; there the
  // product of the two roots (-λ1) gives the positive one without cancellation.
  if (tilt >= 0.0) return lambda1 * (root + tilt) / spread;
  return spread / (root - tilt);
}

double balanced_rate(double eps, double sigma0, double sigma1, double lambda1) {
  require_lambda1(lambda1);
  return 0.5 * sigma0 - 0.5 * scaled_root(eps, sigma0, sigma1, lambda1);
}

double slope_cubic(double eps, double sigma0, double sigma1, double lambda1) noexcept {
  return slope_polynomial(sigma0, sigma1, lambda1)(eps);
}

double discriminant(double sigma1, double lambda1) noexcept {
  return 3.0 * sigma1 * sigma1 - 24.0 * lambda1;
}

Regime classify_regime(double sigma1, double lambda1) noexcept {
  const double d = discriminant(sigma1, lambda1);
  const double scale = std::max(3.0 * sigma1 * sigma1, 24.0 * std::abs(lambda1));
  if (std::abs(d) <= 1e-12 * scale) return Regime::bifurcation;
  return d < 0.0 ? Regime::unique_max : Regime::two_maxima;
}

std::vector<double> critical_points(double sigma0, double sigma1, double lambda1) {
  if (!positive_finite(sigma0) || !positive_finite(sigma1)) {
    throw InvalidArgument("damping bounds must be positive");
  }
  require_lambda1(lambda1);
  const Cubic p = slope_polynomial(sigma0, sigma1, lambda1);
  const double scale = cubic_scale(sigma0, sigma1, lambda1);
  // No root is negative (every term is positive there) and none exceeds this.
  const double upper = sigma1 + sigma0 + std::sqrt(lambda1);
  std::vector<double> roots = cubic_roots_in(p, 0.0, upper, kRootTol * scale);
  for (double r : roots) {
    if (!(std::abs(p(r)) <= kRootTol * scale)) {
      std::ostringstream msg;
      msg << "slope cubic root " << r << " has residual " << p(r);
      throw ConsistencyError(msg.str());
    }
  }
  if (roots.empty()) throw ConsistencyError("slope cubic has no real root");
  return roots;
}

std::vector<double> rate_zeros(double sigma0, double sigma1, double lambda1,
                               double search_limit) {
  if (!(search_limit >= sigma1)) throw InvalidArgument("search_limit must be >= sigma1");
  const auto rate = [&](double eps) {
    // F > 0 immediately right of 0 (unit slope there); bisect needs that sign.
    if (eps == 0.0) return std::numeric_limits<double>::min();
    return balanced_rate(eps, sigma0, sigma1, lambda1);
  };
  const double tol = kRootTol * sigma0;

  std::vector<double> breaks;
  for (double c : critical_points(sigma0, sigma1, lambda1)) {
    if (c > 0.0 && c < search_limit) breaks.push_back(c);
  }
  breaks.push_back(search_limit);

  std::vector<double> zeros;
  double prev = 0.0;
  int prev_sign = 1;
  for (double b : breaks) {
    const double value = rate(b);
    const int sign = std::abs(value) <= tol ? 0 : (value > 0.0 ? 1 : -1);
    if (sign == 0) {
      zeros.push_back(b);
    } else if (prev_sign != 0 && sign != prev_sign) {
      zeros.push_back(bisect(rate, prev, b));
    }
    prev = b;
    prev_sign = sign;
  }
  for (double z : zeros) {
    if (!(std::abs(balanced_rate(z, sigma0, sigma1, lambda1)) <= tol)) {
      throw ConsistencyError("zero of F failed to polish");
    }
  }
  return zeros;
}

DecayCertificate maximize_rate(const DampingBounds& bounds, const SpectralGap& gap) {
  const double s0 = bounds.sigma0();
  const double s1 = bounds.sigma1();
  const double l1 = gap.lambda1();

  DecayCertificate cert;
  cert.discriminant = discriminant(s1, l1);
  cert.regime = classify_regime(s1, l1);
  cert.critical_points = critical_points(s0, s1, l1);

  const Cubic p = slope_polynomial(s0, s1, l1);
  const double flat = 1e-8 * cubic_scale(s0, s1, l1);
  for (double c : cert.critical_points) {
    // The cubic goes from + to - at a maximum of F; a tangential root is flat.
    if (p.derivative(c) < -flat) cert.local_maxima.push_back(c);
  }

  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> admissible;
  for (double c : cert.critical_points) {
    if (c > 0.0 && c <= s0) {
      const double value = balanced_rate(c, s0, s1, l1);
      admissible.emplace_back(c, value);
      best_value = std::max(best_value, value);
    }
  }
  if (admissible.empty()) throw ConsistencyError("no critical point of F in (0, sigma0]");

  // Symmetric two-maxima cases tie up to rounding; take the smallest ε.
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(best_value));
  for (const auto& [eps, value] : admissible) {
    if (value >= best_value - tie_tol) {
      cert.eps_star = eps;
      cert.alpha_star = value;
      break;
    }
  }
  if (!(cert.alpha_star > 0.0)) {
    throw ConsistencyError("maximum of F is not positive");
  }

  cert.eta_star = balancing_eta(cert.eps_star, s0, s1, l1);
  cert.f_at_star = gradient_coefficient(cert.eps_star, cert.eta_star, s1, l1);
  cert.g_at_star = velocity_coefficient(cert.eps_star, cert.eta_star, s0, s1);
  const double tol = kIdentityTol * std::max(1.0, cert.alpha_star);
  if (!(std::abs(cert.f_at_star - cert.g_at_star) <= tol) ||
      !(std::abs(cert.f_at_star - cert.alpha_star) <= tol)) {
    std::ostringstream msg;
    msg << "f/g cross-check failed: f=" << cert.f_at_star << " g=" << cert.g_at_star
        << " alpha=" << cert.alpha_star;
    throw ConsistencyError(msg.str());
  }
  return cert;
}

double initial_energy_bound(double grad_u0_sq_integral, double v0_sq_integral) {
  if (!(grad_u0_sq_integral >= 0.0) || !(v0_sq_integral >= 0.0)) {
    throw InvalidArgument("energy integrals must be nonnegative");
  }
  return grad_u0_sq_integral + v0_sq_integral;
}

}  // namespace wavedecay
