#include "doctest.h"
#include "oracles.hpp"
#include "wavedecay/certificate.hpp"
#include "wavedecay/errors.hpp"
#include "wavedecay/roots.hpp"

#include <algorithm>

using namespace wavedecay;
using doctest::Approx;

namespace {
constexpr double kPi2 = oracle::kPi * oracle::kPi;

// Frozen from a 30-digit evaluation of the closed forms (mpmath).
constexpr double kEpsStar_1_2 = 0.480787356561316811800819395663;
constexpr double kAlphaStar_1_2 = 0.382173382034041305471767222341;
constexpr double kEtaStar_1_2 = 2.66499623322062663886779388572;
constexpr double kRateAt048 = 0.38217077675387139352131855307;
constexpr double kEtaAt048 = 2.64675365215225955313847766926;
constexpr double kZero_1_2 = 0.974029389119392680757087982429;
constexpr double kEpsStar_1_3 = 0.439538313045320672896840393835;
constexpr double kAlphaStar_1_3 = 0.310954316202855357627176949998;
constexpr double kTieEps = 0.175378874876467860416168156014;  // 1 - sqrt(0.68)
constexpr double kTieAlpha = 0.0834848610088319986823905612544;
}  // namespace

TEST_CASE("damping bounds and spectral gap validate their invariants") {
  CHECK_NOTHROW(DampingBounds(1.0, 1.0));
  CHECK_THROWS_AS(DampingBounds(2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(DampingBounds(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(DampingBounds(1.0, INFINITY), InvalidArgument);
  CHECK_THROWS_AS(SpectralGap(0.0), InvalidArgument);
  CHECK_THROWS_AS(SpectralGap(-1.0), InvalidArgument);
}

TEST_CASE("gradient coefficient") {
  CHECK(gradient_coefficient(1, oracle::kPi, 2, kPi2) == Approx(1 - 1 / (2 * oracle::kPi)).epsilon(1e-14));
  CHECK(gradient_coefficient(0, 1, 5, 3) == 0.0);
  CHECK_THROWS_AS(gradient_coefficient(1, 0, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(gradient_coefficient(1, 1, 2, 0), InvalidArgument);
  const double eta = balancing_eta(0.48, 1, 2, kPi2);
  CHECK(gradient_coefficient(0.48, eta, 2, kPi2) == Approx(kRateAt048).epsilon(1e-13));
}

TEST_CASE("velocity coefficient") {
  CHECK(velocity_coefficient(0, 1, 1, 2) == 1.0);
  CHECK(velocity_coefficient(1.7, 0.3, 1.7, 1.7) == 0.0);
  CHECK_THROWS_AS(velocity_coefficient(1, -1, 1, 2), InvalidArgument);
  const double eta = balancing_eta(0.48, 1, 2, kPi2);
  CHECK(velocity_coefficient(0.48, eta, 1, 2) == Approx(kRateAt048).epsilon(1e-13));
}

TEST_CASE("balancing eta") {
  CHECK(balancing_eta(1, 2, 2, kPi2) == Approx(oracle::kPi).epsilon(1e-15));
  CHECK(balancing_eta(0.48, 1, 2, kPi2) == Approx(kEtaAt048).epsilon(1e-13));
  CHECK_THROWS_AS(balancing_eta(0, 1, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(balancing_eta(2, 1, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(balancing_eta(-0.5, 1, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(balancing_eta(0.5, 1, 2, 0), InvalidArgument);

  SUBCASE("solves the quadratic and balances f and g on random inputs") {
    std::mt19937_64 rng(7);
    for (const auto& t : oracle::random_tuples(100, 11)) {
      const double eps = std::uniform_real_distribution<double>(0.001, 0.999)(rng) * t.s1;
      const double eta = balancing_eta(eps, t.s0, t.s1, t.l1);
      REQUIRE(eta > 0.0);
      const double a = eps * (eps - t.s1) * eta * eta;
      const double b = 2 * t.l1 * (2 * eps - t.s0) * eta;
      const double c = t.l1 * eps * (t.s1 - eps);
      const double largest = std::max({std::abs(a), std::abs(b), std::abs(c)});
      CHECK(std::abs(a + b + c) <= 1e-12 * largest);
      const double f = gradient_coefficient(eps, eta, t.s1, t.l1);
      const double g = velocity_coefficient(eps, eta, t.s0, t.s1);
      CHECK(std::abs(f - g) <= 1e-10 * std::max({1.0, std::abs(f), eps, t.s0}));
    }
  }
}

TEST_CASE("balanced rate") {
  CHECK(balanced_rate(0, 1.3, 2.9, 0.7) == 0.0);
  CHECK(balanced_rate(0, 4.1, 4.1, 33.0) == 0.0);
  CHECK(balanced_rate(1, 2, 2, kPi2) == Approx(1 - 1 / (2 * oracle::kPi)).epsilon(1e-15));
  CHECK(balanced_rate(0.48, 1, 2, kPi2) == Approx(kRateAt048).epsilon(1e-14));
  CHECK(balanced_rate(0.48, 1, 2, kPi2) == Approx(oracle::rate(0.48, 1, 2, kPi2)).epsilon(1e-13));
  CHECK_THROWS_AS(balanced_rate(0.3, 1, 2, 0), InvalidArgument);
  // σ0 = σ1: F vanishes at σ0.
  CHECK(balanced_rate(2, 2, 2, 0.16) == 0.0);
}

TEST_CASE("slope cubic, sign and unit slope at the origin") {
  CHECK(slope_cubic(0, 1.5, 2, 3) == Approx(2 * 3 * 1.5));
  CHECK(slope_cubic(1, 2, 2, kPi2) == Approx(0.0).scale(100));
  CHECK(slope_cubic(0.45, 1, 2, kPi2) > 0.0);
  CHECK(slope_cubic(0.50, 1, 2, kPi2) < 0.0);
  CHECK(std::abs(slope_cubic(kEpsStar_1_2, 1, 2, kPi2)) < 1e-12 * 4 * kPi2);

  std::mt19937_64 rng(3);
  for (const auto& t : oracle::random_tuples(100, 5)) {
    const double h = 1e-6;
    const double fd = (balanced_rate(h, t.s0, t.s1, t.l1) - balanced_rate(-h, t.s0, t.s1, t.l1)) / (2 * h);
    CHECK(fd == Approx(1.0).epsilon(1e-4));

    // Sign agreement away from the critical points.
    const double eps = std::uniform_real_distribution<double>(0.01, 1.5)(rng) * t.s1;
    const double hs = 1e-7;
    const double slope = (balanced_rate(eps + hs, t.s0, t.s1, t.l1) -
                          balanced_rate(eps - hs, t.s0, t.s1, t.l1)) / (2 * hs);
    const double cubic = slope_cubic(eps, t.s0, t.s1, t.l1);
    const double scale = 4 * t.l1 + t.s1 * t.s1;
    if (std::abs(cubic) > 1e-4 * scale && std::abs(slope) > 1e-6) {
      CHECK((cubic > 0) == (slope > 0));
    }
  }
}

TEST_CASE("discriminant and regime") {
  CHECK(discriminant(2, kPi2) == Approx(12 - 24 * kPi2));
  CHECK(discriminant(2, 0.16) == Approx(8.16));
  CHECK(discriminant(4, 2) == 0.0);
  CHECK(classify_regime(4, 2) == Regime::bifurcation);
  CHECK(classify_regime(std::sqrt(8 * 0.3), 0.3) == Regime::bifurcation);
  CHECK(classify_regime(2, kPi2) == Regime::unique_max);
  CHECK(classify_regime(2, 0.16) == Regime::two_maxima);
  CHECK(to_string(Regime::two_maxima) == "two_maxima");
}

TEST_CASE("cubic roots helper") {
  // (x-1)(x-2)(x-3)
  const Cubic p{1, -6, 11, -6};
  const auto roots = cubic_roots_in(p, 0, 10, 1e-14);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == Approx(1));
  CHECK(roots[1] == Approx(2));
  CHECK(roots[2] == Approx(3));
  // Tangency: (x-1)²(x-3) has a double root at 1.
  const Cubic q{1, -5, 7, -3};
  const auto tangent = cubic_roots_in(q, 0, 10, 1e-12);
  REQUIRE(tangent.size() == 2);
  CHECK(tangent[0] == Approx(1));
  CHECK(tangent[1] == Approx(3));
}

TEST_CASE("critical points") {
  const auto one = critical_points(2, 2, kPi2);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Approx(1.0).epsilon(1e-15));

  const auto three = critical_points(2, 2, 0.16);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == Approx(1 - std::sqrt(0.68)).epsilon(1e-14));
  CHECK(three[1] == Approx(1.0).epsilon(1e-14));
  CHECK(three[2] == Approx(1 + std::sqrt(0.68)).epsilon(1e-14));

  const auto mixed = critical_points(1, 2, kPi2);
  REQUIRE(mixed.size() == 1);
  const double bisected = oracle::bisection(
      [](double e) { return -2 * e * e * e + 6 * e * e - (4 * kPi2 + 4) * e + 2 * kPi2; }, 0.45, 0.5);
  CHECK(mixed[0] == Approx(bisected).epsilon(1e-13));
  CHECK(mixed[0] == Approx(kEpsStar_1_2).epsilon(1e-14));

  SUBCASE("residuals are polished on random tuples") {
    for (const auto& t : oracle::random_tuples(200, 17)) {
      const auto roots = critical_points(t.s0, t.s1, t.l1);
      CHECK(std::is_sorted(roots.begin(), roots.end()));
      const double scale = std::max(2 * t.l1 * t.s0, 4 * t.l1 + t.s1 * t.s1);
      for (double r : roots) {
        CHECK(std::abs(slope_cubic(r, t.s0, t.s1, t.l1)) <= 1e-12 * scale);
      }
      if (classify_regime(t.s1, t.l1) == Regime::unique_max) CHECK(roots.size() == 1);
    }
  }
}

TEST_CASE("maximize rate: closed-form anchors") {
  const auto c = maximize_rate(DampingBounds(2, 2), SpectralGap(kPi2));
  CHECK(std::abs(c.eps_star - 1.0) <= 1e-12);
  CHECK(std::abs(c.eta_star - oracle::kPi) <= 1e-12);
  CHECK(std::abs(c.alpha_star - (1 - 1 / (2 * oracle::kPi))) <= 1e-12);
  CHECK(c.regime == Regime::unique_max);

  const auto m = maximize_rate(DampingBounds(1, 2), SpectralGap(kPi2));
  CHECK(m.eps_star == Approx(kEpsStar_1_2).epsilon(1e-12));
  CHECK(m.alpha_star == Approx(kAlphaStar_1_2).epsilon(1e-12));
  CHECK(m.eta_star == Approx(kEtaStar_1_2).epsilon(1e-11));
  const auto grid = oracle::grid_search_max(1, 2, kPi2, 1e-6);
  CHECK(std::abs(m.alpha_star - grid.value) <= 1e-5);

  const auto n = maximize_rate(DampingBounds(1, 3), SpectralGap(kPi2));
  CHECK(n.eps_star == Approx(kEpsStar_1_3).epsilon(1e-12));
  CHECK(n.alpha_star == Approx(kAlphaStar_1_3).epsilon(1e-12));
}

TEST_CASE("maximize rate: symmetric tie resolves to the smaller maximizer") {
  const auto c = maximize_rate(DampingBounds(2, 2), SpectralGap(0.16));
  CHECK(c.regime == Regime::two_maxima);
  CHECK(c.discriminant == Approx(8.16));
  REQUIRE(c.local_maxima.size() == 2);
  CHECK(c.eps_star == Approx(kTieEps).epsilon(1e-13));
  CHECK(c.alpha_star == Approx(kTieAlpha).epsilon(1e-12));
  const double other = balanced_rate(c.local_maxima[1], 2, 2, 0.16);
  CHECK(other == Approx(c.alpha_star).epsilon(1e-12));
  const auto grid = oracle::grid_search_max(2, 2, 0.16, 1e-6);
  CHECK(std::abs(grid.value - c.alpha_star) <= 1e-5);
}

TEST_CASE("maximize rate: invariants on random tuples") {
  for (const auto& t : oracle::random_tuples(100, 23)) {
    const auto c = maximize_rate(DampingBounds(t.s0, t.s1), SpectralGap(t.l1));
    CHECK(c.alpha_star > 0.0);
    CHECK(c.eps_star > 0.0);
    CHECK(c.eps_star <= t.s0);
    if (t.s1 > t.s0) CHECK(c.eps_star < t.s0);
    CHECK(std::find(c.critical_points.begin(), c.critical_points.end(), c.eps_star) !=
          c.critical_points.end());
    const double tol = 1e-10 * std::max(1.0, c.alpha_star);
    CHECK(std::abs(c.f_at_star - c.g_at_star) <= tol);
    CHECK(std::abs(c.f_at_star - c.alpha_star) <= tol);
    CHECK(c.eta_star > 0.0);
  }
}

TEST_CASE("alpha star is nondecreasing in lambda1") {
  std::mt19937_64 rng(99);
  for (const auto& t : oracle::random_tuples(100, 31)) {
    const double larger = t.l1 * std::uniform_real_distribution<double>(1.0, 3.0)(rng);
    const double a = maximize_rate(DampingBounds(t.s0, t.s1), SpectralGap(t.l1)).alpha_star;
    const double b = maximize_rate(DampingBounds(t.s0, t.s1), SpectralGap(larger)).alpha_star;
    CHECK(b >= a - 1e-13 * std::max(1.0, a));
  }
}

TEST_CASE("zeros of F") {
  SUBCASE("sigma1 > sigma0: single zero below sigma0") {
    const auto z = rate_zeros(1, 2, kPi2, 4);
    REQUIRE(z.size() == 1);
    CHECK(z[0] > 0.48);
    CHECK(z[0] < 1.0);
    CHECK(z[0] == Approx(kZero_1_2).epsilon(1e-12));
  }
  SUBCASE("constant damping: sigma0 itself is a zero") {
    const auto z = rate_zeros(2, 2, 0.16, 4);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == Approx(0.4).epsilon(1e-12));
    CHECK(z[1] == Approx(1.6).epsilon(1e-12));
    CHECK(std::abs(z[2] - 2.0) <= 1e-12);
  }
  SUBCASE("near the degenerate boundary") {
    const auto z = rate_zeros(1, 1.0001, 1, 4);
    REQUIRE(!z.empty());
    for (double e : z) CHECK(e < 1.0);
  }
  SUBCASE("agrees with the reduced cubic") {
    for (const auto& t : oracle::random_tuples(40, 41, 1.001, 4.0)) {
      const auto z = rate_zeros(t.s0, t.s1, t.l1, 2 * t.s1);
      const auto ref = oracle::rate_zeros_by_reduced_cubic(t.s0, t.s1, t.l1, 2 * t.s1);
      REQUIRE(z.size() == ref.size());
      for (std::size_t k = 0; k < z.size(); ++k) CHECK(z[k] == Approx(ref[k]).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(rate_zeros(1, 2, 1, 1.5), InvalidArgument);
}

TEST_CASE("initial energy bound") {
  CHECK(initial_energy_bound(0, 0) == 0.0);
  CHECK(initial_energy_bound(kPi2 / 2, 0) == Approx(kPi2 / 2));
  const double eps = 1.0;
  CHECK(initial_energy_bound(kPi2 / 2, eps * eps / 2) == Approx(kPi2 / 2 + 0.5));
  CHECK_THROWS_AS(initial_energy_bound(-1, 0), InvalidArgument);
  CHECK_THROWS_AS(initial_energy_bound(0, -1e-300), InvalidArgument);
}
