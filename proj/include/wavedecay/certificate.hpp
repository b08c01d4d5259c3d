#pragma once

// Decay-rate certificate for u_tt - Δu + σ(x,t) u_t = 0 with σ0 <= σ <= σ1.
//
// With v = u_t + εu the energy E = ∫(|∇u|² + v²) obeys
//   E'/2 + f(ε,η) ∫|∇u|² + g(ε,η) ∫v² <= 0,
// and choosing η on the branch where f = g gives E(t) <= E(0) exp(-2 F(ε) t).
// The certificate is the ε* in (0, σ0] maximizing F.

#include <string_view>
#include <vector>

namespace wavedecay {

class DampingBounds {
 public:
  /// Throws InvalidArgument unless 0 < sigma0 <= sigma1 < inf.
  DampingBounds(double sigma0, double sigma1);

  double sigma0() const noexcept { return sigma0_; }
  double sigma1() const noexcept { return sigma1_; }

  friend bool operator==(const DampingBounds&, const DampingBounds&) = default;

 private:
  double sigma0_;
  double sigma1_;
};

enum class Lambda1Provenance { analytic, discrete, user_supplied };

std::string_view to_string(Lambda1Provenance p) noexcept;

class SpectralGap {
 public:
  /// Throws InvalidArgument unless lambda1 is finite and positive.
  explicit SpectralGap(double lambda1,
                       Lambda1Provenance provenance = Lambda1Provenance::user_supplied);

  double lambda1() const noexcept { return lambda1_; }
  Lambda1Provenance provenance() const noexcept { return provenance_; }

 private:
  double lambda1_;
  Lambda1Provenance provenance_;
};

enum class Regime { unique_max, bifurcation, two_maxima };

std::string_view to_string(Regime r) noexcept;

struct DecayCertificate {
  double eps_star = 0.0;
  double eta_star = 0.0;
  double alpha_star = 0.0;
  double discriminant = 0.0;
  Regime regime = Regime::unique_max;
  std::vector<double> critical_points;  // ascending real roots of the slope cubic
  std::vector<double> local_maxima;     // subset of critical_points where F peaks
  double f_at_star = 0.0;
  double g_at_star = 0.0;
};

/// Coefficient of ∫|∇u|²: ε + ε(ε-σ1)η/(2λ1).
double gradient_coefficient(double eps, double eta, double sigma1, double lambda1);

/// Coefficient of ∫v²: σ0 - ε + ε(ε-σ1)/(2η).
double velocity_coefficient(double eps, double eta, double sigma0, double sigma1);

/// Positive root η of ε(ε-σ1)η² + 2λ1(2ε-σ0)η + λ1ε(σ1-ε) = 0, the branch on
/// which both coefficients agree. Requires 0 < eps < sigma1.
double balancing_eta(double eps, double sigma0, double sigma1, double lambda1);

/// F(ε) = σ0/2 - sqrt((σ0-2ε)²λ1² + ε²(σ1-ε)²λ1) / (2λ1).
double balanced_rate(double eps, double sigma0, double sigma1, double lambda1);

/// -2ε³ + 3σ1ε² - (4λ1+σ1²)ε + 2λ1σ0; same sign as dF/dε.
double slope_cubic(double eps, double sigma0, double sigma1, double lambda1) noexcept;

/// 3σ1² - 24λ1, the discriminant of the slope cubic's derivative.
double discriminant(double sigma1, double lambda1) noexcept;

/// Classifies D; values within 1e-12 of the larger of 3σ1², 24λ1 count as zero.
Regime classify_regime(double sigma1, double lambda1) noexcept;

/// All real roots of the slope cubic, ascending, polished so that
/// |cubic| <= 1e-12 * max(2λ1σ0, 4λ1+σ1²).
std::vector<double> critical_points(double sigma0, double sigma1, double lambda1);

/// Zeros of F in (0, search_limit], ascending. search_limit must be >= sigma1.
std::vector<double> rate_zeros(double sigma0, double sigma1, double lambda1,
                               double search_limit);

/// Maximizes F over the critical points in (0, σ0]. Equal maxima resolve to
/// the smaller ε. Throws ConsistencyError if α* <= 0 or if f, g and α* disagree.
DecayCertificate maximize_rate(const DampingBounds& bounds, const SpectralGap& gap);

/// E(0) = ∫|∇u0|² + ∫|u1 + ε*u0|², the prefactor of the decay bound.
double initial_energy_bound(double grad_u0_sq_integral, double v0_sq_integral);

}  // namespace wavedecay
