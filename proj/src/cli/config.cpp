#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "wavedecay/cli.hpp"

namespace wavedecay::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw ConfigError(what + ": not a number: '" + text + "'");
  }
  return value;
}

std::size_t to_size(const std::string& text, const std::string& what) {
  std::size_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError(what + ": not a nonnegative integer: '" + text + "'");
  }
  return value;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "problem.kind",        "counterexample.delta", "domain.length",       "domain.lengths",
      "domain.offset",       "domain.offsets",       "grid.points",         "damping.kind",
      "damping.value",       "damping.c0",           "damping.c1",          "damping.omega",
      "damping.spatial",     "damping.table",        "damping.m0",          "damping.m1",
      "damping.sigma0",      "damping.sigma1",       "initial.u0",          "initial.u0_amplitude",
      "initial.u1",          "initial.u1_amplitude", "spectral.source",     "spectral.lambda1",
      "run.t_end",           "run.cfl_factor",       "run.sample_every",    "run.eps",
      "tolerances.bound",    "analysis.fit_t_lo",    "analysis.fit_t_hi",   "output.trace",
      "output.report",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const ConfigFile& file) : file_(file) {}

  std::optional<std::string> raw(const std::string& key) const { return file_.get(key); }

  double number(const std::string& key, double fallback) const {
    const auto v = file_.get(key);
    return v ? to_double(*v, key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) const {
    const auto v = file_.get(key);
    if (!v) return std::nullopt;
    return to_double(*v, key);
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto v = file_.get(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& part : split(*v, ',')) out.push_back(to_double(part, key));
    return out;
  }

  std::string word(const std::string& key, const std::string& fallback) const {
    return file_.get(key).value_or(fallback);
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto v = file_.get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(key + ": expected true or false");
  }

 private:
  const ConfigFile& file_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

TabulatedDamping load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open damping table " + path.string());
  TabulatedDamping table;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() < 2) throw ConfigError("damping table rows need a time and values");
    table.frame_times.push_back(to_double(parts[0], "damping.table"));
    std::vector<double> frame;
    for (std::size_t k = 1; k < parts.size(); ++k) frame.push_back(to_double(parts[k], "damping.table"));
    table.frames.push_back(std::move(frame));
  }
  return table;
}

std::optional<DampingBounds> natural_bounds(const DampingKind& kind) {
  double lo = 0.0;
  double hi = 0.0;
  if (const auto* c = std::get_if<ConstantDamping>(&kind)) {
    lo = hi = c->value;
  } else if (const auto* s = std::get_if<SinusoidalDamping>(&kind)) {
    lo = s->c0 - std::abs(s->c1);
    hi = s->c0 + std::abs(s->c1);
  } else if (const auto* t = std::get_if<TabulatedDamping>(&kind)) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& f : t->frames) {
      for (double v : f) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  } else if (const auto* m = std::get_if<NonlinearDamping>(&kind)) {
    if (m->law == NonlinearLaw::two_plus_sin) {
      lo = 1.0;
      hi = 3.0;
    } else {
      lo = m->m0;
      hi = m->m1;
    }
  }
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) return std::nullopt;
  return DampingBounds(lo, hi);
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile file;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!file.values_.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key " + key);
    }
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

RunConfig parse_run_config(const ConfigFile& file, const std::filesystem::path& base_dir) {
  for (const auto& [key, value] : file.values()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key " + key);
  }
  const Reader r(file);
  RunConfig cfg;

  const std::string kind = r.word("problem.kind", "standard");
  if (kind != "standard" && kind != "counterexample") {
    throw ConfigError("problem.kind must be standard or counterexample");
  }
  cfg.counterexample = kind == "counterexample";

  cfg.t_end = r.number("run.t_end", cfg.t_end);
  cfg.cfl_factor = r.number("run.cfl_factor", cfg.cfl_factor);
  cfg.sample_every = r.raw("run.sample_every") ? to_size(*r.raw("run.sample_every"), "run.sample_every")
                                               : cfg.sample_every;
  cfg.bound_tol = r.number("tolerances.bound", cfg.bound_tol);
  if (!(cfg.t_end > 0.0)) throw ConfigError("run.t_end must be positive");
  if (!(cfg.cfl_factor > 0.0)) throw ConfigError("run.cfl_factor must be positive");
  if (cfg.sample_every == 0) throw ConfigError("run.sample_every must be positive");
  if (!(cfg.bound_tol >= 0.0)) throw ConfigError("tolerances.bound must be nonnegative");

  const auto fit_lo = r.optional_number("analysis.fit_t_lo");
  const auto fit_hi = r.optional_number("analysis.fit_t_hi");
  if (fit_lo || fit_hi) {
    cfg.fit_window = FitWindow{fit_lo.value_or(1.0), fit_hi.value_or(cfg.t_end)};
    if (!(cfg.fit_window->t_hi > cfg.fit_window->t_lo)) {
      throw ConfigError("analysis fit window must have t_lo < t_hi");
    }
  }

  if (const auto p = r.raw("output.trace")) cfg.trace_path = resolve(base_dir, *p);
  else cfg.trace_path = base_dir / cfg.trace_path;
  if (const auto p = r.raw("output.report")) cfg.report_path = resolve(base_dir, *p);
  else cfg.report_path = base_dir / cfg.report_path;

  if (const auto e = r.raw("run.eps"); e && *e != "certificate") {
    cfg.eps_explicit = to_double(*e, "run.eps");
    if (!(*cfg.eps_explicit >= 0.0)) throw ConfigError("run.eps must be nonnegative");
  }

  if (cfg.counterexample) {
    cfg.counterexample_setup.delta = r.number("counterexample.delta", 1e-3);
    const auto pts = r.numbers("grid.points", {200.0});
    if (pts.size() != 1 || pts[0] < 3 || pts[0] != std::floor(pts[0])) {
      throw ConfigError("grid.points must be one integer >= 3 for the counterexample");
    }
    cfg.counterexample_setup.points = static_cast<std::size_t>(pts[0]);
    cfg.counterexample_setup.t_end = cfg.t_end;
    cfg.counterexample_setup.cfl_factor = cfg.cfl_factor;
    if (!(cfg.counterexample_setup.delta > 0.0 && cfg.counterexample_setup.delta < 0.5)) {
      throw ConfigError("counterexample.delta must lie in (0, 0.5)");
    }
    if (cfg.eps_explicit && *cfg.eps_explicit != 0.0) {
      throw ConfigError("the counterexample energy uses eps = 0");
    }
    return cfg;
  }

  // Domain and grid.
  if (r.raw("domain.length") && r.raw("domain.lengths")) {
    throw ConfigError("give domain.length or domain.lengths, not both");
  }
  cfg.lengths = r.numbers(r.raw("domain.length") ? "domain.length" : "domain.lengths", {1.0});
  cfg.offsets = r.numbers(r.raw("domain.offset") ? "domain.offset" : "domain.offsets",
                          std::vector<double>(cfg.lengths.size(), 0.0));
  const auto pts = r.numbers("grid.points", std::vector<double>(cfg.lengths.size(), 400.0));
  cfg.points.clear();
  for (double p : pts) {
    if (p < 3 || p != std::floor(p)) throw ConfigError("grid.points must be integers >= 3");
    cfg.points.push_back(static_cast<std::size_t>(p));
  }
  if (cfg.points.size() == 1 && cfg.lengths.size() == 2) cfg.points.push_back(cfg.points[0]);
  try {
    Grid check(DomainSpec(cfg.lengths, cfg.offsets), cfg.points);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("domain/grid: ") + e.what());
  }

  // Damping.
  const std::string dkind = r.word("damping.kind", "constant");
  DampingKind dk;
  if (dkind == "constant") {
    dk = ConstantDamping{r.number("damping.value", 2.0)};
  } else if (dkind == "sinusoidal") {
    dk = SinusoidalDamping{r.number("damping.c0", 1.5), r.number("damping.c1", 0.5),
                           r.number("damping.omega", 2.0 * std::numbers::pi),
                           r.flag("damping.spatial", false)};
  } else if (dkind == "tabulated") {
    const auto table = r.raw("damping.table");
    if (!table) throw ConfigError("damping.kind = tabulated needs damping.table");
    dk = load_table(resolve(base_dir, *table));
  } else if (dkind == "two_plus_sin") {
    dk = NonlinearDamping{NonlinearLaw::two_plus_sin, 1.0, 3.0};
  } else if (dkind == "rational") {
    dk = NonlinearDamping{NonlinearLaw::rational, r.number("damping.m0", 1.0),
                          r.number("damping.m1", 3.0)};
  } else {
    throw ConfigError("unknown damping.kind '" + dkind + "'");
  }

  std::optional<DampingBounds> bounds;
  const auto s0 = r.optional_number("damping.sigma0");
  const auto s1 = r.optional_number("damping.sigma1");
  try {
    if (s0 || s1) {
      if (!(s0 && s1)) throw ConfigError("give both damping.sigma0 and damping.sigma1");
      bounds = DampingBounds(*s0, *s1);
    } else {
      bounds = natural_bounds(dk);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("damping bounds: ") + e.what());
  }
  if (!bounds) throw ConfigError("damping must be bounded below by a positive constant");
  cfg.damping = DampingSpec{std::move(dk), bounds};
  if (cfg.eps_explicit && *cfg.eps_explicit > bounds->sigma0()) {
    throw ConfigError("run.eps must not exceed sigma0");
  }

  // Initial data.
  cfg.u0_shape = r.word("initial.u0", cfg.u0_shape);
  cfg.u1_shape = r.word("initial.u1", cfg.u1_shape);
  cfg.u0_amplitude = r.number("initial.u0_amplitude", cfg.u0_amplitude);
  cfg.u1_amplitude = r.number("initial.u1_amplitude", cfg.u1_amplitude);
  if (cfg.u0_shape != "sine" && cfg.u0_shape != "zero") {
    throw ConfigError("initial.u0 must be sine or zero");
  }
  if (cfg.u1_shape != "sine" && cfg.u1_shape != "zero" && cfg.u1_shape != "minus_eps_u0") {
    throw ConfigError("initial.u1 must be zero, sine or minus_eps_u0");
  }

  // Spectral gap.
  const std::string source = r.word("spectral.source", "analytic");
  if (source == "analytic") {
    cfg.spectral_source = SpectralSource::analytic;
  } else if (source == "discrete") {
    cfg.spectral_source = SpectralSource::discrete;
  } else if (source == "value") {
    cfg.spectral_source = SpectralSource::value;
    const auto v = r.optional_number("spectral.lambda1");
    if (!v || !(*v > 0.0)) throw ConfigError("spectral.source = value needs spectral.lambda1 > 0");
    cfg.lambda1_value = *v;
  } else {
    throw ConfigError("spectral.source must be analytic, discrete or value");
  }

  // Tabulated frames must fit the grid; surface that as an input error now.
  try {
    build_problem(cfg, cfg.eps_explicit.value_or(0.0)).validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

WaveProblem build_problem(const RunConfig& cfg, double eps_for_v) {
  if (cfg.counterexample) return counterexample_problem(cfg.counterexample_setup);
  Grid grid(DomainSpec(cfg.lengths, cfg.offsets), cfg.points);
  const DomainSpec& d = grid.domain();
  const auto sine = [&](double x, double y) {
    double v = std::sin(std::numbers::pi * (x - d.offset(0)) / d.length(0));
    if (d.dimension() == 2) v *= std::sin(std::numbers::pi * (y - d.offset(1)) / d.length(1));
    return v;
  };
  std::vector<double> u0(grid.node_count(), 0.0);
  if (cfg.u0_shape == "sine") {
    u0 = sample_on_grid(grid, [&](double x, double y) { return cfg.u0_amplitude * sine(x, y); });
  }
  std::vector<double> u1(grid.node_count(), 0.0);
  if (cfg.u1_shape == "sine") {
    u1 = sample_on_grid(grid, [&](double x, double y) { return cfg.u1_amplitude * sine(x, y); });
  } else if (cfg.u1_shape == "minus_eps_u0") {
    for (std::size_t k = 0; k < u1.size(); ++k) u1[k] = -eps_for_v * u0[k];
  }
  // sin(π) is not exactly zero; pin the Dirichlet nodes.
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (grid.is_boundary(k)) u0[k] = u1[k] = 0.0;
  }
  return WaveProblem{.grid = grid,
                     .damping = cfg.damping,
                     .u0 = std::move(u0),
                     .u1 = std::move(u1),
                     .t_end = cfg.t_end,
                     .cfl_factor = cfg.cfl_factor,
                     .boundary = {}};
}

std::vector<double> parse_range(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty range");
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:count");
    const double a = to_double(parts[0], "range start");
    const double b = to_double(parts[1], "range stop");
    const std::size_t n = to_size(parts[2], "range count");
    if (n == 0) throw ConfigError("range count must be positive");
    if (n == 1) {
      if (a != b) throw ConfigError("a one-point range needs start == stop");
      return {a};
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double m = static_cast<double>(n - 1);
      const double kk = static_cast<double>(k);
      out[k] = (a * (m - kk) + b * kk) / m;
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& part : split(t, ',')) out.push_back(to_double(part, "range value"));
  return out;
}

}  // namespace wavedecay::cli
