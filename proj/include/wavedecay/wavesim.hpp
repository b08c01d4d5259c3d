#pragma once

// Finite-difference integration of u_tt - Δu + σ u_t = 0 with Dirichlet data,
// sampling the energy ∫|∇u|² + ∫(u_t + εu)².

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "wavedecay/certificate.hpp"
#include "wavedecay/spectral.hpp"

namespace wavedecay {

struct ConstantDamping {
  double value = 0.0;
};

/// c0 + c1 sin(ωt), times Π cos(π ξ) over the normalized coordinates ξ in
/// [0, 1] when `spatial` is set.
struct SinusoidalDamping {
  double c0 = 0.0;
  double c1 = 0.0;
  double omega = 0.0;
  bool spatial = false;
};

/// Interior-node values per frame, piecewise constant in time: frame k holds
/// on [frame_times[k], frame_times[k+1]); times before the first frame use it.
struct TabulatedDamping {
  std::vector<double> frame_times;
  std::vector<std::vector<double>> frames;
};

enum class NonlinearLaw {
  two_plus_sin,  // m(u) = 2 + sin u
  rational,      // m(u) = (m0 + m1 u²) / (1 + u²)
};

/// σ(x,t) = m(u(x,t)).
struct NonlinearDamping {
  NonlinearLaw law = NonlinearLaw::two_plus_sin;
  double m0 = 1.0;
  double m1 = 3.0;
};

/// σ = 2t / (x² - 3x + 2): unbounded and negative on (1, 2).
struct CounterexampleDamping {};

using DampingKind = std::variant<ConstantDamping, SinusoidalDamping, TabulatedDamping,
                                 NonlinearDamping, CounterexampleDamping>;

struct DampingSpec {
  DampingKind kind;
  /// When set, every evaluated σ is checked against it while stepping.
  std::optional<DampingBounds> declared_bounds;
};

/// Dirichlet data g(x, y, t); y is ignored in 1D.
using BoundaryFunction = std::function<double(double x, double y, double t)>;

struct WaveProblem {
  Grid grid;
  DampingSpec damping;
  std::vector<double> u0;  // every node, boundary included
  std::vector<double> u1;
  double t_end = 1.0;
  double cfl_factor = 0.9;
  BoundaryFunction boundary;  // empty means homogeneous

  /// Throws InvalidArgument on malformed data.
  void validate() const;

  /// t_end / N with N the fewest steps keeping dt <= cfl_factor * stable_dt.
  double time_step() const;
  std::size_t step_count() const;
};

struct WaveState {
  std::vector<double> u_prev;
  std::vector<double> u_curr;
  double t = 0.0;  // time of u_curr
  double dt = 0.0;
};

struct EnergySample {
  double t = 0.0;
  double total = 0.0;
  double grad = 0.0;
  double v = 0.0;
};

struct EnergyTrace {
  std::vector<EnergySample> samples;
  double eps_used = 0.0;
};

/// Samples fn at every node, boundary included.
std::vector<double> sample_on_grid(const Grid& grid,
                                   const std::function<double(double x, double y)>& fn);

/// σ at every interior node for time t and current field u (boundary entries
/// are zero). Throws DampingBoundsViolation against declared bounds.
void evaluate_damping(const DampingSpec& damping, const Grid& grid, double t,
                      const std::vector<double>& u, std::vector<double>& sigma);

/// Levels 0 and 1: u1 = u0 + dt v0 + dt²/2 (Δ_h u0 - σ v0).
WaveState initial_state(const WaveProblem& problem);

/// One semi-implicit leapfrog step,
///   u⁺ = [2u - u⁻ + dt² Δ_h u + (σ dt/2) u⁻] / (1 + σ dt/2).
/// Throws CflViolation, DampingBoundsViolation.
WaveState step(const WaveState& state, const WaveProblem& problem);

/// ∫|∇u|² from forward differences over every cell.
double gradient_energy(const Grid& grid, const std::vector<double>& u);

/// ∫(u_t + εu)² over interior nodes.
double velocity_energy(const Grid& grid, const std::vector<double>& u_t,
                       const std::vector<double>& u, double eps);

/// Runs to t_end, sampling every `sample_every` steps and at the final level.
EnergyTrace simulate(const WaveProblem& problem, double eps_for_v, std::size_t sample_every);

/// u_tt - u_xx + σ u_t for u = t(x²-3x+2), σ = 2t/(x²-3x+2), term by term.
double counterexample_residual(double x, double t);

struct CounterexampleSetup {
  std::size_t points = 200;
  double t_end = 10.0;
  double cfl_factor = 0.9;
  double delta = 1e-3;  // domain is [1+δ, 2-δ]
};

/// Counterexample as an ordinary problem: zero start, u_t(0) = x²-3x+2, and
/// Dirichlet data from the known solution at the truncation nodes.
WaveProblem counterexample_problem(const CounterexampleSetup& setup);

/// Same discretization run in exact rational arithmetic. Perturbations of
/// the counterexample grow roughly like exp(∫|σ| dt), so double precision
/// loses every digit before t = 2.
EnergyTrace simulate_counterexample_exact(const CounterexampleSetup& setup,
                                          std::size_t sample_every);

}  // namespace wavedecay
