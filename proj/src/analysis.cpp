#include "wavedecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wavedecay/errors.hpp"

namespace wavedecay {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::decay_certified: return "decay_certified";
    case Verdict::bound_violated: return "bound_violated";
    case Verdict::growth_detected: return "growth_detected";
  }
  return "unknown";
}

LogLinearFit fit_decay_rate(const EnergyTrace& trace, const FitWindow& window) {
  std::vector<double> ts;
  std::vector<double> logs;
  for (const auto& s : trace.samples) {
    if (s.t < window.t_lo || s.t > window.t_hi) continue;
    if (!(s.total > kEnergyFloor)) continue;
    ts.push_back(s.t);
    logs.push_back(std::log(s.total));
  }
  if (ts.size() < 10) {
    std::ostringstream msg;
    msg << "decay fit needs 10 samples with positive energy in [" << window.t_lo << ", "
        << window.t_hi << "], found " << ts.size();
    throw InsufficientSamples(msg.str());
  }
  const double n = static_cast<double>(ts.size());
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    t_mean += ts[k];
    y_mean += logs[k];
  }
  t_mean /= n;
  y_mean /= n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - t_mean) * (ts[k] - t_mean);
    sty += (ts[k] - t_mean) * (logs[k] - y_mean);
  }
  if (!(stt > 0.0)) throw InsufficientSamples("decay fit needs distinct sample times");
  LogLinearFit fit;
  fit.slope = sty / stt;
  fit.intercept = y_mean - fit.slope * t_mean;
  fit.rate = -0.5 * fit.slope;
  fit.samples_used = ts.size();
  return fit;
}

double max_bound_ratio(const EnergyTrace& trace, double alpha, double reference_energy) {
  double worst = 0.0;
  for (const auto& s : trace.samples) {
    double ratio;
    if (reference_energy > 0.0) {
      ratio = s.total / (reference_energy * std::exp(-2.0 * alpha * s.t));
    } else {
      ratio = s.total > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    worst = std::max(worst, ratio);
  }
  return worst;
}

DecayReport check_bound(const EnergyTrace& trace, double alpha_star, double tol,
                        std::optional<FitWindow> window) {
  if (trace.samples.empty()) throw InvalidArgument("energy trace is empty");
  if (!(alpha_star >= 0.0) || !(tol >= 0.0)) {
    throw InvalidArgument("alpha_star and tol must be nonnegative");
  }
  const auto& first = trace.samples.front();
  const auto& last = trace.samples.back();

  DecayReport report;
  report.alpha_star = alpha_star;
  report.tolerance = tol;
  report.fit_window = window.value_or(FitWindow{1.0, last.t});
  try {
    const LogLinearFit fit = fit_decay_rate(trace, report.fit_window);
    report.fitted_slope = fit.slope;
    report.fitted_rate = fit.rate;
  } catch (const InsufficientSamples&) {
  }

  report.max_bound_ratio = max_bound_ratio(trace, alpha_star, first.total);
  report.bound_satisfied = report.max_bound_ratio <= 1.0 + tol;
  if (report.bound_satisfied) {
    report.verdict = Verdict::decay_certified;
  } else if (last.total > first.total) {
    report.verdict = Verdict::growth_detected;
  } else {
    report.verdict = Verdict::bound_violated;
  }
  return report;
}

}  // namespace wavedecay
