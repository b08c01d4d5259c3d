#include "wavedecay/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "wavedecay/errors.hpp"

namespace wavedecay {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Applies -Δ_h (interior unknowns only, Dirichlet rows eliminated).
class NegLaplacian {
 public:
  explicit NegLaplacian(const Grid& grid) : nx_(grid.points(0)) {
    inv_hx2_ = 1.0 / (grid.spacing(0) * grid.spacing(0));
    if (grid.dimension() == 2) {
      ny_ = grid.points(1);
      inv_hy2_ = 1.0 / (grid.spacing(1) * grid.spacing(1));
    }
  }

  std::size_t size() const { return nx_ * ny_; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    for (std::size_t j = 0; j < ny_; ++j) {
      for (std::size_t i = 0; i < nx_; ++i) {
        const std::size_t k = i + nx_ * j;
        const double left = i > 0 ? x[k - 1] : 0.0;
        const double right = i + 1 < nx_ ? x[k + 1] : 0.0;
        double v = (2.0 * x[k] - left - right) * inv_hx2_;
        if (ny_ > 1 || inv_hy2_ != 0.0) {
          const double down = j > 0 ? x[k - nx_] : 0.0;
          const double up = j + 1 < ny_ ? x[k + nx_] : 0.0;
          v += (2.0 * x[k] - down - up) * inv_hy2_;
        }
        y[k] = v;
      }
    }
  }

  // Thomas algorithm; 1D only.
  void solve_tridiagonal(const std::vector<double>& rhs, std::vector<double>& x) const {
    const std::size_t n = nx_;
    std::vector<double> c(n);
    std::vector<double> d(n);
    const double diag = 2.0 * inv_hx2_;
    const double off = -inv_hx2_;
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
      const double m = diag - off * c[i - 1];
      c[i] = off / m;
      d[i] = (rhs[i] - off * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  }

  // Conjugate gradients from the initial guess in x.
  void solve_cg(const std::vector<double>& rhs, std::vector<double>& x, double rel_tol,
                std::size_t max_iter) const {
    const std::size_t n = size();
    std::vector<double> r(n), p(n), ap(n);
    apply(x, ap);
    for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
    p = r;
    double rr = dot(r, r);
    const double target = rel_tol * rel_tol * dot(rhs, rhs);
    for (std::size_t it = 0; it < max_iter; ++it) {
      if (rr <= target) return;
      apply(p, ap);
      const double step = rr / dot(p, ap);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += step * p[k];
        r[k] -= step * ap[k];
      }
      const double rr_next = dot(r, r);
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    if (rr > target) throw ConvergenceError("conjugate gradients did not converge");
  }

  bool one_dimensional() const { return ny_ == 1 && inv_hy2_ == 0.0; }

 private:
  std::size_t nx_;
  std::size_t ny_ = 1;
  double inv_hx2_ = 0.0;
  double inv_hy2_ = 0.0;
};

}  // namespace

DomainSpec::DomainSpec(std::vector<double> lengths, std::vector<double> offsets)
    : lengths_(std::move(lengths)), offsets_(std::move(offsets)) {
  if (lengths_.empty() || lengths_.size() > 2) {
    throw InvalidArgument("domain dimension must be 1 or 2");
  }
  for (double l : lengths_) {
    if (!(std::isfinite(l) && l > 0.0)) throw InvalidArgument("domain lengths must be positive");
  }
  if (offsets_.empty()) offsets_.assign(lengths_.size(), 0.0);
  if (offsets_.size() != lengths_.size()) {
    throw InvalidArgument("domain offsets must match the dimension");
  }
  for (double o : offsets_) {
    if (!std::isfinite(o)) throw InvalidArgument("domain offsets must be finite");
  }
}

Grid::Grid(DomainSpec domain, std::vector<std::size_t> points_per_axis)
    : domain_(std::move(domain)), points_(std::move(points_per_axis)) {
  if (points_.size() != domain_.dimension()) {
    throw InvalidArgument("grid needs one point count per domain axis");
  }
  for (std::size_t axis = 0; axis < points_.size(); ++axis) {
    if (points_[axis] < 3) throw InvalidArgument("grid needs at least 3 interior points per axis");
    spacing_.push_back(domain_.length(axis) / static_cast<double>(points_[axis] + 1));
  }
  extent0_ = points_[0] + 2;
}

double Grid::coordinate(std::size_t axis, std::size_t index) const {
  return domain_.offset(axis) + spacing_.at(axis) * static_cast<double>(index);
}

std::size_t Grid::node_count() const noexcept {
  std::size_t n = 1;
  for (std::size_t p : points_) n *= p + 2;
  return n;
}

std::size_t Grid::interior_count() const noexcept {
  std::size_t n = 1;
  for (std::size_t p : points_) n *= p;
  return n;
}

bool Grid::is_boundary(std::size_t flat_index) const noexcept {
  const std::size_t i = flat_index % extent0_;
  if (i == 0 || i == extent0_ - 1) return true;
  if (points_.size() == 2) {
    const std::size_t j = flat_index / extent0_;
    if (j == 0 || j == points_[1] + 1) return true;
  }
  return false;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (double h : spacing_) v *= h;
  return v;
}

double Grid::stable_dt() const noexcept {
  double s = 0.0;
  for (double h : spacing_) s += 1.0 / (h * h);
  return 1.0 / std::sqrt(s);
}

double lambda1_interval(double length) {
  if (!(std::isfinite(length) && length > 0.0)) throw InvalidArgument("interval length must be positive");
  return std::numbers::pi * std::numbers::pi / (length * length);
}

double lambda1_box(const std::vector<double>& lengths) {
  if (lengths.empty() || lengths.size() > 2) throw InvalidArgument("box dimension must be 1 or 2");
  double sum = 0.0;
  for (double l : lengths) {
    if (!(std::isfinite(l) && l > 0.0)) throw InvalidArgument("box lengths must be positive");
    sum += 1.0 / (l * l);
  }
  return std::numbers::pi * std::numbers::pi * sum;
}

double lambda1_discrete(const Grid& grid, const EigenSolveOptions& options) {
  const NegLaplacian op(grid);
  const std::size_t n = op.size();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n, 0.0);

  double lambda = 0.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (op.one_dimensional()) {
      op.solve_tridiagonal(x, y);
    } else {
      op.solve_cg(x, y, options.cg_rel_tol, options.cg_max_iterations);
    }
    // Rayleigh quotient of y, using A y = x.
    const double yy = dot(y, y);
    const double next = dot(x, y) / yy;
    const double norm = std::sqrt(yy);
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / norm;
    // Warm start for the next CG solve: y ≈ x / λ.
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] / next;
    if (it > 0 && std::abs(next - lambda) <= options.rel_tol * next) return next;
    lambda = next;
  }
  std::ostringstream msg;
  msg << "inverse iteration did not converge in " << options.max_iterations << " iterations";
  throw ConvergenceError(msg.str());
}

}  // namespace wavedecay
