#include "doctest.h"
#include "wavedecay/analysis.hpp"
#include "wavedecay/errors.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace wavedecay;
using doctest::Approx;

namespace {

EnergyTrace synthetic(const std::function<double(double)>& energy, double t_end, std::size_t n) {
  EnergyTrace trace;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t_end * static_cast<double>(k) / static_cast<double>(n);
    const double e = energy(t);
    trace.samples.push_back({t, e, e, 0.0});
  }
  return trace;
}

}  // namespace

TEST_CASE("fit on exact exponential data") {
  const auto trace = synthetic([](double t) { return 5 * std::exp(-3 * t); }, 10, 200);
  const auto fit = fit_decay_rate(trace, {0, 10});
  CHECK(std::abs(fit.rate - 1.5) <= 1e-9);
  CHECK(fit.slope == Approx(-3.0).epsilon(1e-10));
  CHECK(fit.intercept == Approx(std::log(5.0)).epsilon(1e-9));
  CHECK(fit.samples_used == 201);
}

TEST_CASE("fit averages out oscillation") {
  const auto trace =
      synthetic([](double t) { return 5 * std::exp(-3 * t) * (1 + 0.1 * std::sin(10 * t)); }, 20, 4000);
  const auto fit = fit_decay_rate(trace, {0, 20});
  CHECK(std::abs(fit.rate - 1.5) <= 0.02);
}

TEST_CASE("fit skips nonpositive and floor energies and needs ten samples") {
  auto trace = synthetic([](double t) { return std::exp(-t); }, 1, 20);
  trace.samples[3].total = 0.0;
  trace.samples[4].total = 1e-40;
  const auto fit = fit_decay_rate(trace, {0, 1});
  CHECK(fit.samples_used == 19);
  CHECK(fit.rate == Approx(0.5).epsilon(1e-10));

  const auto short_trace = synthetic([](double t) { return std::exp(-t); }, 1, 8);
  CHECK_THROWS_AS(fit_decay_rate(short_trace, {0, 1}), InsufficientSamples);
  CHECK_THROWS_AS(fit_decay_rate(trace, {2, 3}), InsufficientSamples);
}

TEST_CASE("fit is invariant under positive scaling") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(1e-6, 1e6), rate(0.1, 3), wobble(-0.2, 0.2);
  for (int k = 0; k < 50; ++k) {
    const double r = rate(rng), w = wobble(rng), c = scale(rng);
    const auto base = synthetic([&](double t) { return std::exp(-r * t) * (1 + w * std::sin(3 * t)); }, 10, 300);
    auto scaled = base;
    for (auto& s : scaled.samples) s.total *= c;
    const auto a = fit_decay_rate(base, {1, 10});
    const auto b = fit_decay_rate(scaled, {1, 10});
    CHECK(std::abs(a.slope - b.slope) <= 1e-10 * std::max(1.0, std::abs(a.slope)));
  }
}

TEST_CASE("bound ratio") {
  const auto trace = synthetic([](double t) { return 2 * std::exp(-t); }, 5, 50);
  CHECK(max_bound_ratio(trace, 0.5, 2.0) == Approx(1.0).epsilon(1e-12));
  CHECK(max_bound_ratio(trace, 0.0, 2.0) == Approx(1.0));
  CHECK(max_bound_ratio(trace, 1.0, 2.0) == Approx(std::exp(5.0)).epsilon(1e-10));
  auto zero = synthetic([](double) { return 0.0; }, 1, 5);
  CHECK(max_bound_ratio(zero, 1.0, 0.0) == 0.0);
  CHECK(std::isinf(max_bound_ratio(trace, 1.0, 0.0)));
}

TEST_CASE("verdicts") {
  const double alpha = 1 - 1 / (2 * 3.141592653589793);
  SUBCASE("certified") {
    const auto trace = synthetic([&](double t) { return std::exp(-2 * alpha * t) * (1 + 0.01 * std::sin(t)); }, 10, 500);
    const auto r = check_bound(trace, alpha, 0.02);
    CHECK(r.verdict == Verdict::decay_certified);
    CHECK(r.bound_satisfied);
    CHECK(r.max_bound_ratio <= 1.02);
    REQUIRE(r.fitted_slope.has_value());
    CHECK(*r.fitted_rate == Approx(alpha).epsilon(0.01));
    CHECK(r.fit_window.t_lo == 1.0);
    CHECK(r.fit_window.t_hi == 10.0);
  }
  SUBCASE("constructed violation") {
    auto trace = synthetic([&](double t) { return std::exp(-2 * alpha * t); }, 10, 500);
    for (std::size_t k = 1; k < trace.samples.size(); ++k) trace.samples[k].total *= 1.5;
    const auto r = check_bound(trace, alpha, 0.02);
    CHECK(r.verdict == Verdict::bound_violated);
    CHECK_FALSE(r.bound_satisfied);
    CHECK(r.max_bound_ratio == Approx(1.5));
  }
  SUBCASE("growth") {
    const auto trace = synthetic([](double t) { return 1 + t * t; }, 10, 100);
    CHECK(check_bound(trace, 0.1, 0.02).verdict == Verdict::growth_detected);
  }
  SUBCASE("short trace leaves fit empty") {
    const auto trace = synthetic([](double t) { return std::exp(-t); }, 2, 5);
    const auto r = check_bound(trace, 0.5, 0.02);
    CHECK_FALSE(r.fitted_slope.has_value());
    CHECK(r.verdict == Verdict::decay_certified);
  }
  CHECK_THROWS_AS(check_bound(EnergyTrace{}, 1, 0.02), InvalidArgument);
  CHECK_THROWS_AS(check_bound(synthetic([](double) { return 1.0; }, 1, 20), -1, 0.02), InvalidArgument);
  CHECK(to_string(Verdict::growth_detected) == "growth_detected");
}

TEST_CASE("alpha 0 and tol 0 certify exactly the traces never above E(0)") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  int certified = 0;
  for (int k = 0; k < 200; ++k) {
    EnergyTrace trace;
    bool below = true;
    const double e0 = u(rng) + 0.1;
    for (int j = 0; j < 15; ++j) {
      const double e = j == 0 ? e0 : u(rng) * (k % 2 ? 1.0 : 0.5 * e0);
      if (e > e0) below = false;
      trace.samples.push_back({static_cast<double>(j), e, e, 0.0});
    }
    const auto r = check_bound(trace, 0.0, 0.0);
    CHECK(r.bound_satisfied == below);
    CHECK((r.verdict == Verdict::decay_certified) == below);
    certified += below ? 1 : 0;
  }
  CHECK(certified > 0);
  CHECK(certified < 200);
}

TEST_CASE("constant damping run decays at the modal rate") {
  Grid grid(DomainSpec::interval(1.0), {400});
  auto u0 = sample_on_grid(grid, [](double x, double) { return std::sin(3.141592653589793 * x); });
  u0.front() = u0.back() = 0.0;
  const WaveProblem p{grid, {ConstantDamping{2.0}, DampingBounds(2, 2)}, u0,
                      std::vector<double>(u0.size(), 0.0), 10.0, 0.9, {}};
  const double alpha = 1 - 1 / (2 * 3.141592653589793);
  const auto r = check_bound(simulate(p, 1.0, 1), alpha, 0.02);
  CHECK(r.verdict == Verdict::decay_certified);
  REQUIRE(r.fitted_slope.has_value());
  // E ~ e^{-2t}: -slope near 2 and above 2 α*.
  CHECK(-*r.fitted_slope == Approx(2.0).epsilon(0.05));
  CHECK(-*r.fitted_slope >= 2 * alpha);
}
