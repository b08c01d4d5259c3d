#pragma once

// Scalar-generic leapfrog kernel shared by the double-precision simulator and
// the exact rational counterexample run.

#include <cstddef>
#include <vector>

#include "wavedecay/spectral.hpp"
#include "wavedecay/wavesim.hpp"

namespace wavedecay::detail {

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double to_double(double x) { return x; }
};

template <typename Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

/// dt²/h² per axis (second entry zero in 1D).
template <typename Scalar>
struct StencilWeights {
  Scalar x;
  Scalar y;
};

template <typename Scalar>
Scalar laplacian_dt2(const Grid& grid, const StencilWeights<Scalar>& w,
                     const std::vector<Scalar>& u, std::size_t k) {
  Scalar lap = w.x * (u[k + 1] - 2 * u[k] + u[k - 1]);
  if (grid.dimension() == 2) {
    const std::size_t stride = grid.extent(0);
    lap += w.y * (u[k + stride] - 2 * u[k] + u[k - stride]);
  }
  return lap;
}

/// Interior nodes of the next level; `half_damping` holds σ dt/2 per node.
template <typename Scalar>
void leapfrog_update(const Grid& grid, const StencilWeights<Scalar>& w,
                     const std::vector<Scalar>& prev, const std::vector<Scalar>& curr,
                     const std::vector<Scalar>& half_damping, std::vector<Scalar>& next) {
  const std::size_t n = grid.node_count();
  next.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (grid.is_boundary(k)) continue;
    const Scalar& s = half_damping[k];
    next[k] = (2 * curr[k] - prev[k] + laplacian_dt2(grid, w, curr, k) + s * prev[k]) / (1 + s);
  }
}

/// Interior nodes of level 1 from displacement u0 and velocity v0;
/// `half_damping` holds σ(x, 0) dt/2.
template <typename Scalar>
void leapfrog_start(const Grid& grid, const StencilWeights<Scalar>& w, const Scalar& dt,
                    const std::vector<Scalar>& u0, const std::vector<Scalar>& v0,
                    const std::vector<Scalar>& half_damping, std::vector<Scalar>& next) {
  const std::size_t n = grid.node_count();
  next.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (grid.is_boundary(k)) continue;
    // dt²/2 (Δu0 - σ v0) = lap_dt2/2 - (σ dt/2) dt v0
    next[k] = u0[k] + dt * v0[k] + laplacian_dt2(grid, w, u0, k) / 2 -
              half_damping[k] * dt * v0[k];
  }
}

template <typename Scalar>
std::vector<double> as_doubles(const std::vector<Scalar>& v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = to_double(v[k]);
  return out;
}

/// Energy at a level from three doubles arrays: centered u_t when both
/// neighbours exist, one-sided at the ends.
inline EnergySample energy_sample(const Grid& grid, double t, const std::vector<double>* before,
                                  const std::vector<double>& at, const std::vector<double>* after,
                                  double dt, double eps) {
  std::vector<double> u_t(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    if (before && after) {
      u_t[k] = ((*after)[k] - (*before)[k]) / (2.0 * dt);
    } else if (after) {
      u_t[k] = ((*after)[k] - at[k]) / dt;
    } else {
      u_t[k] = (at[k] - (*before)[k]) / dt;
    }
  }
  EnergySample s;
  s.t = t;
  s.grad = gradient_energy(grid, at);
  s.v = velocity_energy(grid, u_t, at, eps);
  s.total = s.grad + s.v;
  return s;
}

/// Marches from levels 0 and 1 to level `steps`, sampling energies at level 0,
/// every `sample_every` levels, and at the last level.
///   half_damping(n, u_n, out): σ dt/2 per node at level n
///   set_boundary(n, u): writes Dirichlet nodes of level n
template <typename Scalar, typename HalfDampingFn, typename BoundaryFn>
EnergyTrace march(const Grid& grid, const StencilWeights<Scalar>& w, const Scalar& dt,
                  std::size_t steps, std::vector<Scalar> level0, std::vector<Scalar> level1,
                  double eps, std::size_t sample_every, HalfDampingFn&& half_damping,
                  BoundaryFn&& set_boundary) {
  const double dt_d = to_double(dt);
  const auto time_of = [&](std::size_t n) {
    const Scalar t = dt * static_cast<long>(n);
    return to_double(t);
  };

  EnergyTrace trace;
  trace.eps_used = eps;
  std::vector<Scalar> prev = std::move(level0);
  std::vector<Scalar> curr = std::move(level1);
  std::vector<Scalar> next;
  std::vector<Scalar> half(grid.node_count());
  {
    const auto at = as_doubles(prev);
    const auto after = as_doubles(curr);
    trace.samples.push_back(energy_sample(grid, 0.0, nullptr, at, &after, dt_d, eps));
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    const bool sample = n % sample_every == 0 || n == steps;
    if (n == steps) {
      const auto before = as_doubles(prev);
      const auto at = as_doubles(curr);
      trace.samples.push_back(energy_sample(grid, time_of(n), &before, at, nullptr, dt_d, eps));
      break;
    }
    half_damping(n, curr, half);
    leapfrog_update(grid, w, prev, curr, half, next);
    set_boundary(n + 1, next);
    if (sample) {
      const auto before = as_doubles(prev);
      const auto at = as_doubles(curr);
      const auto after = as_doubles(next);
      trace.samples.push_back(energy_sample(grid, time_of(n), &before, at, &after, dt_d, eps));
    }
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return trace;
}

}  // namespace wavedecay::detail
