// Counterexample run in exact rational arithmetic (GMP).
//
// The scheme reproduces u = t(x²-3x+2) exactly: it is linear in t (exact for
// the centered differences) and quadratic in x (exact for the 3-point
// Laplacian). In rationals the levels therefore stay small canonical
// fractions, while any rounding would be amplified by the negative damping.

#include <gmpxx.h>

#include <charconv>
#include <string>
#include <system_error>

#include "leapfrog.hpp"
#include "wavedecay/errors.hpp"
#include "wavedecay/wavesim.hpp"

namespace wavedecay {

namespace detail {
template <>
struct ScalarTraits<mpq_class> {
  static double to_double(const mpq_class& q) { return q.get_d(); }
};
}  // namespace detail

namespace {

// The decimal literal a double round-trips to, as an exact fraction
// (0.001 -> 1/1000 rather than the binary neighbour of 0.001).
mpq_class exact_decimal(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
  if (res.ec != std::errc{}) throw InvalidArgument("cannot format decimal");
  const std::string text(buf, res.ptr);
  const auto e_pos = text.find('e');
  std::string mantissa = text.substr(0, e_pos);
  long exponent = std::stol(text.substr(e_pos + 1));
  const auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  mpz_class numerator(mantissa, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class q = exponent < 0 ? mpq_class(numerator, scale) : mpq_class(numerator * scale);
  q.canonicalize();
  return q;
}

}  // namespace

EnergyTrace simulate_counterexample_exact(const CounterexampleSetup& setup,
                                          std::size_t sample_every) {
  if (sample_every == 0) throw InvalidArgument("sample_every must be positive");
  // Validates the setup and fixes the step count exactly as the double path.
  const WaveProblem problem = counterexample_problem(setup);
  const Grid& grid = problem.grid;
  const std::size_t steps = problem.step_count();
  if (problem.time_step() > grid.stable_dt() * (1.0 + 1e-12) || setup.cfl_factor > 1.0) {
    throw CflViolation("CFL violation: cfl_factor exceeds 1");
  }

  const mpq_class delta = exact_decimal(setup.delta);
  const mpq_class left = 1 + delta;
  const mpq_class h = (1 - 2 * delta) / static_cast<unsigned long>(setup.points + 1);
  const mpq_class dt = exact_decimal(setup.t_end) / static_cast<unsigned long>(steps);
  const detail::StencilWeights<mpq_class> w{dt * dt / (h * h), 0};

  const std::size_t n = grid.node_count();
  std::vector<mpq_class> profile(n);
  std::vector<mpq_class> inv_profile(n);
  for (std::size_t k = 0; k < n; ++k) {
    const mpq_class x = left + h * static_cast<unsigned long>(k);
    profile[k] = (x - 1) * (x - 2);
    inv_profile[k] = 1 / profile[k];
  }

  const auto set_boundary = [&](std::size_t level, std::vector<mpq_class>& u) {
    const mpq_class t = dt * static_cast<unsigned long>(level);
    u.front() = t * profile.front();
    u.back() = t * profile.back();
  };

  std::vector<mpq_class> level0(n, 0);
  std::vector<mpq_class> level1;
  // σ(x, 0) = 0.
  detail::leapfrog_start(grid, w, dt, level0, profile, std::vector<mpq_class>(n, 0), level1);
  set_boundary(1, level1);

  return detail::march<mpq_class>(
      grid, w, dt, steps, std::move(level0), std::move(level1), 0.0, sample_every,
      [&](std::size_t level, const std::vector<mpq_class>&, std::vector<mpq_class>& out) {
        // σ dt/2 = (2t/p) dt/2 = t dt / p
        const mpq_class t_dt = dt * dt * static_cast<unsigned long>(level);
        for (std::size_t k = 1; k + 1 < n; ++k) {
          out[k] = t_dt * inv_profile[k];
          if (out[k] == -1) throw RuntimeFailure("semi-implicit update is singular");
        }
      },
      set_boundary);
}

}  // namespace wavedecay
