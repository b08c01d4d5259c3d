#pragma once

#include <optional>
#include <string_view>

#include "wavedecay/wavesim.hpp"

namespace wavedecay {

struct FitWindow {
  double t_lo = 1.0;
  double t_hi = 0.0;
};

/// Least-squares line through (t, log E_total). `rate` is -slope/2, the
/// quantity comparable to α*; -slope is comparable to 2α*.
struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rate = 0.0;
  std::size_t samples_used = 0;
};

/// Energies below this are left out of the log fit.
inline constexpr double kEnergyFloor = 1e-30;

/// Throws InsufficientSamples when fewer than 10 usable samples fall in the window.
LogLinearFit fit_decay_rate(const EnergyTrace& trace, const FitWindow& window);

enum class Verdict { decay_certified, bound_violated, growth_detected };

std::string_view to_string(Verdict v) noexcept;

struct DecayReport {
  double alpha_star = 0.0;
  double tolerance = 0.0;
  std::optional<double> fitted_slope;
  std::optional<double> fitted_rate;
  FitWindow fit_window;
  bool bound_satisfied = false;
  double max_bound_ratio = 0.0;  // max E(t) / (E(0) exp(-2 α* t))
  Verdict verdict = Verdict::bound_violated;
};

/// max_bound_ratio over E(t) / (reference e^{-2 α t}); a zero reference
/// gives 0 for zero energy and +inf otherwise.
double max_bound_ratio(const EnergyTrace& trace, double alpha, double reference_energy);

/// Checks the trace against E(0) e^{-2 α* t} (1 + tol), E(0) taken from the
/// first sample. The fit uses `window` when given, otherwise [1, t_end]; the
/// fitted fields stay empty when that window has too few samples.
DecayReport check_bound(const EnergyTrace& trace, double alpha_star, double tol,
                        std::optional<FitWindow> window = std::nullopt);

}  // namespace wavedecay
