#include "wavedecay/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leapfrog.hpp"
#include "wavedecay/errors.hpp"

namespace wavedecay {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct NodePosition {
  std::size_t i;
  std::size_t j;
  double x;
  double y;
};

NodePosition position(const Grid& grid, std::size_t k) {
  const std::size_t i = k % grid.extent(0);
  const std::size_t j = k / grid.extent(0);
  return {i, j, grid.coordinate(0, i), grid.dimension() == 2 ? grid.coordinate(1, j) : 0.0};
}

std::size_t interior_index(const Grid& grid, const NodePosition& p) {
  std::size_t idx = p.i - 1;
  if (grid.dimension() == 2) idx += grid.points(0) * (p.j - 1);
  return idx;
}

double spatial_profile(const Grid& grid, const NodePosition& p) {
  const auto& d = grid.domain();
  double s = std::cos(std::numbers::pi * (p.x - d.offset(0)) / d.length(0));
  if (grid.dimension() == 2) s *= std::cos(std::numbers::pi * (p.y - d.offset(1)) / d.length(1));
  return s;
}

void check_cfl(const WaveProblem& problem, double dt) {
  const double limit = std::min(problem.cfl_factor, 1.0) * problem.grid.stable_dt();
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: dt=" << dt << " exceeds stable limit " << problem.grid.stable_dt()
        << " (cfl_factor=" << problem.cfl_factor << ")";
    throw CflViolation(msg.str());
  }
}

void write_boundary(const WaveProblem& problem, double t, std::vector<double>& u) {
  const Grid& grid = problem.grid;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (!grid.is_boundary(k)) continue;
    if (problem.boundary) {
      const auto p = position(grid, k);
      u[k] = problem.boundary(p.x, p.y, t);
    } else {
      u[k] = 0.0;
    }
  }
}

void half_damping(const WaveProblem& problem, double t, double dt, const std::vector<double>& u,
                  std::vector<double>& out) {
  evaluate_damping(problem.damping, problem.grid, t, u, out);
  for (double& s : out) s *= 0.5 * dt;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<double> sample_on_grid(const Grid& grid,
                                   const std::function<double(double, double)>& fn) {
  std::vector<double> out(grid.node_count());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto p = position(grid, k);
    out[k] = fn(p.x, p.y);
  }
  return out;
}

void evaluate_damping(const DampingSpec& damping, const Grid& grid, double t,
                      const std::vector<double>& u, std::vector<double>& sigma) {
  sigma.assign(grid.node_count(), 0.0);

  std::size_t frame = 0;
  if (const auto* table = std::get_if<TabulatedDamping>(&damping.kind)) {
    const auto it = std::upper_bound(table->frame_times.begin(), table->frame_times.end(), t);
    frame = it == table->frame_times.begin()
                ? 0
                : static_cast<std::size_t>(it - table->frame_times.begin()) - 1;
  }

  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    const auto p = position(grid, k);
    sigma[k] = std::visit(
        Overloaded{
            [](const ConstantDamping& c) { return c.value; },
            [&](const SinusoidalDamping& s) {
              const double profile = s.spatial ? spatial_profile(grid, p) : 1.0;
              return s.c0 + s.c1 * std::sin(s.omega * t) * profile;
            },
            [&](const TabulatedDamping& tab) { return tab.frames[frame][interior_index(grid, p)]; },
            [&](const NonlinearDamping& m) {
              const double v = u[k];
              if (m.law == NonlinearLaw::two_plus_sin) return 2.0 + std::sin(v);
              return (m.m0 + m.m1 * v * v) / (1.0 + v * v);
            },
            [&](const CounterexampleDamping&) {
              return 2.0 * t / ((p.x - 1.0) * (p.x - 2.0));
            },
        },
        damping.kind);
  }

  if (!damping.declared_bounds) return;
  const double lo = damping.declared_bounds->sigma0();
  const double hi = damping.declared_bounds->sigma1();
  const double slack = 1e-12 * hi;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    if (!(sigma[k] >= lo - slack && sigma[k] <= hi + slack)) {
      const auto p = position(grid, k);
      std::ostringstream msg;
      msg << "damping " << sigma[k] << " at x=" << p.x;
      if (grid.dimension() == 2) msg << ", y=" << p.y;
      msg << ", t=" << t << " outside declared bounds [" << lo << ", " << hi << "]";
      throw DampingBoundsViolation(msg.str());
    }
  }
}

void WaveProblem::validate() const {
  if (!(std::isfinite(t_end) && t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (!(std::isfinite(cfl_factor) && cfl_factor > 0.0)) {
    throw InvalidArgument("cfl_factor must be positive");
  }
  const std::size_t n = grid.node_count();
  if (u0.size() != n || u1.size() != n) {
    throw InvalidArgument("initial data must be sampled on every grid node");
  }
  if (!all_finite(u0) || !all_finite(u1)) throw InvalidArgument("initial data must be finite");
  for (std::size_t k = 0; k < n; ++k) {
    if (!grid.is_boundary(k)) continue;
    double expected = 0.0;
    if (boundary) {
      const auto p = position(grid, k);
      expected = boundary(p.x, p.y, 0.0);
    } else if (u1[k] != 0.0) {
      throw InvalidArgument("u1 must vanish on the boundary");
    }
    if (std::abs(u0[k] - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
      throw InvalidArgument("u0 must match the boundary data");
    }
  }

  std::visit(Overloaded{
                 [](const ConstantDamping& c) {
                   if (!(std::isfinite(c.value) && c.value >= 0.0)) {
                     throw InvalidArgument("constant damping must be nonnegative");
                   }
                 },
                 [](const SinusoidalDamping& s) {
                   if (!std::isfinite(s.c0) || !std::isfinite(s.c1) || !std::isfinite(s.omega)) {
                     throw InvalidArgument("sinusoidal damping parameters must be finite");
                   }
                 },
                 [&](const TabulatedDamping& tab) {
                   if (tab.frame_times.empty() || tab.frames.size() != tab.frame_times.size()) {
                     throw InvalidArgument("tabulated damping needs one frame per frame time");
                   }
                   if (!std::is_sorted(tab.frame_times.begin(), tab.frame_times.end(),
                                       std::less_equal<>())) {
                     throw InvalidArgument("tabulated frame times must increase strictly");
                   }
                   for (const auto& f : tab.frames) {
                     if (f.size() != grid.interior_count()) {
                       throw InvalidArgument("tabulated frame size must equal the interior node count");
                     }
                     if (!all_finite(f)) throw InvalidArgument("tabulated damping must be finite");
                   }
                 },
                 [](const NonlinearDamping& m) {
                   if (m.law == NonlinearLaw::rational &&
                       !(m.m0 > 0.0 && m.m1 >= m.m0 && std::isfinite(m.m1))) {
                     throw InvalidArgument("rational damping needs 0 < m0 <= m1");
                   }
                 },
                 [](const CounterexampleDamping&) {},
             },
             damping.kind);
}

std::size_t WaveProblem::step_count() const {
  const double target = cfl_factor * grid.stable_dt();
  const double steps = std::ceil(t_end / target * (1.0 - 1e-14));
  if (!(steps >= 1.0 && steps < 1e12)) throw InvalidArgument("unreasonable number of time steps");
  return static_cast<std::size_t>(steps);
}

double WaveProblem::time_step() const { return t_end / static_cast<double>(step_count()); }

WaveState initial_state(const WaveProblem& problem) {
  problem.validate();
  const Grid& grid = problem.grid;
  const double dt = problem.time_step();
  check_cfl(problem, dt);

  const detail::StencilWeights<double> w{
      dt * dt / (grid.spacing(0) * grid.spacing(0)),
      grid.dimension() == 2 ? dt * dt / (grid.spacing(1) * grid.spacing(1)) : 0.0};
  std::vector<double> half;
  half_damping(problem, 0.0, dt, problem.u0, half);

  WaveState state;
  state.u_prev = problem.u0;
  detail::leapfrog_start(grid, w, dt, problem.u0, problem.u1, half, state.u_curr);
  write_boundary(problem, dt, state.u_curr);
  state.t = dt;
  state.dt = dt;
  return state;
}

WaveState step(const WaveState& state, const WaveProblem& problem) {
  const Grid& grid = problem.grid;
  if (state.u_prev.size() != grid.node_count() || state.u_curr.size() != grid.node_count()) {
    throw InvalidArgument("state does not match the grid");
  }
  const double dt = state.dt;
  check_cfl(problem, dt);

  const detail::StencilWeights<double> w{
      dt * dt / (grid.spacing(0) * grid.spacing(0)),
      grid.dimension() == 2 ? dt * dt / (grid.spacing(1) * grid.spacing(1)) : 0.0};
  std::vector<double> half;
  half_damping(problem, state.t, dt, state.u_curr, half);

  WaveState next;
  next.u_prev = state.u_curr;
  detail::leapfrog_update(grid, w, state.u_prev, state.u_curr, half, next.u_curr);
  next.t = state.t + dt;
  next.dt = dt;
  write_boundary(problem, next.t, next.u_curr);
  return next;
}

double gradient_energy(const Grid& grid, const std::vector<double>& u) {
  const double hx = grid.spacing(0);
  const std::size_t ex = grid.extent(0);
  double sum = 0.0;
  if (grid.dimension() == 1) {
    for (std::size_t i = 0; i + 1 < ex; ++i) {
      const double d = u[i + 1] - u[i];
      sum += d * d;
    }
    return sum / hx;
  }
  const double hy = grid.spacing(1);
  const std::size_t ey = grid.extent(1);
  for (std::size_t j = 0; j + 1 < ey; ++j) {
    for (std::size_t i = 0; i + 1 < ex; ++i) {
      const std::size_t k = grid.flat(i, j);
      const double dx = (u[k + 1] - u[k]) / hx;
      const double dy = (u[k + ex] - u[k]) / hy;
      sum += dx * dx + dy * dy;
    }
  }
  return sum * hx * hy;
}

double velocity_energy(const Grid& grid, const std::vector<double>& u_t,
                       const std::vector<double>& u, double eps) {
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    const double v = u_t[k] + eps * u[k];
    sum += v * v;
  }
  return sum * grid.cell_volume();
}

EnergyTrace simulate(const WaveProblem& problem, double eps_for_v, std::size_t sample_every) {
  if (sample_every == 0) throw InvalidArgument("sample_every must be positive");
  if (!(std::isfinite(eps_for_v) && eps_for_v >= 0.0)) {
    throw InvalidArgument("eps_for_v must be nonnegative");
  }
  if (problem.damping.declared_bounds && eps_for_v > problem.damping.declared_bounds->sigma0()) {
    throw InvalidArgument("eps_for_v must not exceed sigma0");
  }
  WaveState start = initial_state(problem);
  const Grid& grid = problem.grid;
  const double dt = start.dt;
  const detail::StencilWeights<double> w{
      dt * dt / (grid.spacing(0) * grid.spacing(0)),
      grid.dimension() == 2 ? dt * dt / (grid.spacing(1) * grid.spacing(1)) : 0.0};

  return detail::march<double>(
      grid, w, dt, problem.step_count(), std::move(start.u_prev), std::move(start.u_curr),
      eps_for_v, sample_every,
      [&](std::size_t n, const std::vector<double>& u, std::vector<double>& out) {
        half_damping(problem, dt * static_cast<double>(n), dt, u, out);
      },
      [&](std::size_t n, std::vector<double>& u) {
        write_boundary(problem, dt * static_cast<double>(n), u);
      });
}

double counterexample_residual(double x, double t) {
  if (!(x > 1.0 && x < 2.0)) throw InvalidArgument("counterexample needs 1 < x < 2");
  if (!(t >= 0.0)) throw InvalidArgument("counterexample needs t >= 0");
  const double p = x * x - 3.0 * x + 2.0;
  const double u_tt = 0.0;
  const double u_xx = 2.0 * t;
  const double u_t = p;
  const double sigma = 2.0 * t / p;
  return u_tt - u_xx + sigma * u_t;
}

WaveProblem counterexample_problem(const CounterexampleSetup& setup) {
  if (!(setup.delta > 0.0 && setup.delta < 0.5)) {
    throw InvalidArgument("counterexample truncation must lie in (0, 0.5)");
  }
  const auto profile = [](double x) { return (x - 1.0) * (x - 2.0); };
  Grid grid(DomainSpec::interval(1.0 - 2.0 * setup.delta, 1.0 + setup.delta), {setup.points});
  WaveProblem problem{
      .grid = grid,
      .damping = DampingSpec{CounterexampleDamping{}, std::nullopt},
      .u0 = std::vector<double>(grid.node_count(), 0.0),
      .u1 = sample_on_grid(grid, [&](double x, double) { return profile(x); }),
      .t_end = setup.t_end,
      .cfl_factor = setup.cfl_factor,
      .boundary = [profile](double x, double, double t) { return t * profile(x); },
  };
  problem.validate();
  return problem;
}

}  // namespace wavedecay
