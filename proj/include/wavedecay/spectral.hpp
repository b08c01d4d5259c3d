#pragma once

#include <cstddef>
#include <vector>

namespace wavedecay {

/// An interval (dimension 1) or rectangle (dimension 2).
class DomainSpec {
 public:
  /// Throws InvalidArgument unless 1 <= lengths.size() <= 2, every length is
  /// positive, and offsets is empty (all zero) or has one entry per axis.
  explicit DomainSpec(std::vector<double> lengths, std::vector<double> offsets = {});

  static DomainSpec interval(double length, double offset = 0.0) {
    return DomainSpec({length}, {offset});
  }

  std::size_t dimension() const noexcept { return lengths_.size(); }
  double length(std::size_t axis) const { return lengths_.at(axis); }
  double offset(std::size_t axis) const { return offsets_.at(axis); }
  const std::vector<double>& lengths() const noexcept { return lengths_; }

 private:
  std::vector<double> lengths_;
  std::vector<double> offsets_;
};

/// Uniform grid of interior nodes; boundary nodes at index 0 and points+1 on
/// each axis carry the Dirichlet data. spacing * (points + 1) == length.
class Grid {
 public:
  Grid(DomainSpec domain, std::vector<std::size_t> points_per_axis);

  const DomainSpec& domain() const noexcept { return domain_; }
  std::size_t dimension() const noexcept { return domain_.dimension(); }
  std::size_t points(std::size_t axis) const { return points_.at(axis); }
  double spacing(std::size_t axis) const { return spacing_.at(axis); }

  /// Coordinate of node `index` in [0, points+1] along `axis`.
  double coordinate(std::size_t axis, std::size_t index) const;

  /// Nodes per axis including both boundary nodes.
  std::size_t extent(std::size_t axis) const { return points_.at(axis) + 2; }
  std::size_t node_count() const noexcept;
  std::size_t interior_count() const noexcept;

  /// Row-major flat index (axis 0 fastest) over the full node array.
  std::size_t flat(std::size_t i, std::size_t j = 0) const noexcept { return i + extent0_ * j; }
  bool is_boundary(std::size_t flat_index) const noexcept;

  /// h^d.
  double cell_volume() const noexcept;

  /// Largest dt for which leapfrog on this grid is stable: 1/sqrt(Σ 1/h²).
  double stable_dt() const noexcept;

 private:
  DomainSpec domain_;
  std::vector<std::size_t> points_;
  std::vector<double> spacing_;
  std::size_t extent0_ = 0;
};

double lambda1_interval(double length);
double lambda1_box(const std::vector<double>& lengths);

struct EigenSolveOptions {
  double rel_tol = 1e-10;        // on successive Rayleigh quotients
  std::size_t max_iterations = 500;
  double cg_rel_tol = 1e-12;     // 2D inner solves
  std::size_t cg_max_iterations = 100000;
};

/// Smallest eigenvalue of the 3-point (1D) / 5-point (2D) Dirichlet Laplacian
/// on the grid, by inverse iteration. Throws ConvergenceError.
double lambda1_discrete(const Grid& grid, const EigenSolveOptions& options = {});

}  // namespace wavedecay
