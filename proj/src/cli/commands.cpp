#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavedecay/cli.hpp"
#include "wavedecay/errors.hpp"
#include "wavedecay/spectral.hpp"

namespace wavedecay::cli {
namespace {

using nlohmann::ordered_json;

ordered_json certificate_json(const DampingBounds& bounds, const SpectralGap& gap,
                              const DecayCertificate& cert) {
  return ordered_json{
      {"sigma0", bounds.sigma0()},
      {"sigma1", bounds.sigma1()},
      {"lambda1", gap.lambda1()},
      {"lambda1_provenance", std::string(to_string(gap.provenance()))},
      {"eps_star", cert.eps_star},
      {"eta_star", cert.eta_star},
      {"alpha_star", cert.alpha_star},
      {"discriminant", cert.discriminant},
      {"regime", std::string(to_string(cert.regime))},
      {"critical_points", cert.critical_points},
      {"local_maxima", cert.local_maxima},
      {"f_at_star", cert.f_at_star},
      {"g_at_star", cert.g_at_star},
  };
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

// Runs `body`, mapping exceptions onto exit codes with a one-line diagnostic.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const RuntimeFailure& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const ConsistencyError& e) {
    err << "internal error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

SpectralGap resolve_gap(const RunConfig& cfg) {
  switch (cfg.spectral_source) {
    case SpectralSource::analytic:
      return SpectralGap(lambda1_box(cfg.lengths), Lambda1Provenance::analytic);
    case SpectralSource::discrete:
      return SpectralGap(lambda1_discrete(Grid(DomainSpec(cfg.lengths, cfg.offsets), cfg.points)),
                         Lambda1Provenance::discrete);
    case SpectralSource::value:
      return SpectralGap(cfg.lambda1_value, Lambda1Provenance::user_supplied);
  }
  throw ConsistencyError("unhandled spectral source");
}

}  // namespace

int cmd_certificate(const CertificateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DampingBounds bounds(args.sigma0, args.sigma1);
    const int sources = (args.lambda1 ? 1 : 0) + (args.interval_length ? 1 : 0) +
                        (args.box.empty() ? 0 : 1);
    if (sources != 1) {
      throw ConfigError("give exactly one of --lambda1, --interval-length, --box");
    }
    if (args.discrete_points && args.lambda1) {
      throw ConfigError("--discrete needs a domain (--interval-length or --box)");
    }

    std::optional<SpectralGap> gap;
    if (args.lambda1) {
      gap.emplace(*args.lambda1, Lambda1Provenance::user_supplied);
    } else {
      const std::vector<double> lengths =
          args.interval_length ? std::vector<double>{*args.interval_length} : args.box;
      if (args.discrete_points) {
        const Grid grid(DomainSpec(lengths),
                        std::vector<std::size_t>(lengths.size(), *args.discrete_points));
        gap.emplace(lambda1_discrete(grid), Lambda1Provenance::discrete);
      } else {
        gap.emplace(lambda1_box(lengths), Lambda1Provenance::analytic);
      }
    }
    const DecayCertificate cert = maximize_rate(bounds, *gap);
    const std::string text = certificate_json(bounds, *gap, cert).dump(2) + "\n";
    if (args.output) {
      write_text(*args.output, text);
    } else {
      out << text;
    }
    return static_cast<int>(kSuccess);
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = parse_run_config(ConfigFile::load(args.config), args.config.parent_path());
    if (args.trace) cfg.trace_path = *args.trace;
    if (args.report) cfg.report_path = *args.report;

    ordered_json report;
    EnergyTrace trace;
    double alpha = 0.0;
    std::optional<double> analytic_e0;
    std::size_t steps = 0;
    double dt = 0.0;

    if (cfg.counterexample) {
      const WaveProblem problem = counterexample_problem(cfg.counterexample_setup);
      steps = problem.step_count();
      dt = problem.time_step();
      trace = simulate_counterexample_exact(cfg.counterexample_setup, cfg.sample_every);
      report["problem"] = "counterexample";
      report["arithmetic"] = "exact_rational";
      report["certificate"] = nullptr;
    } else {
      const SpectralGap gap = resolve_gap(cfg);
      const DampingBounds bounds = *cfg.damping.declared_bounds;
      const DecayCertificate cert = maximize_rate(bounds, gap);
      const double eps = cfg.eps_explicit.value_or(cert.eps_star);
      // Any ε in (0, σ0] certifies the rate F(ε) on the balancing branch.
      alpha = cfg.eps_explicit
                  ? std::max(0.0, eps > 0.0 ? balanced_rate(eps, bounds.sigma0(),
                                                            bounds.sigma1(), gap.lambda1())
                                            : 0.0)
                  : cert.alpha_star;
      const WaveProblem problem = build_problem(cfg, eps);
      steps = problem.step_count();
      dt = problem.time_step();
      trace = simulate(problem, eps, cfg.sample_every);
      analytic_e0 = initial_energy_bound(gradient_energy(problem.grid, problem.u0),
                                         velocity_energy(problem.grid, problem.u1, problem.u0, eps));
      report["problem"] = "standard";
      report["arithmetic"] = "double";
      report["certificate"] = certificate_json(bounds, gap, cert);
    }

    const DecayReport decay = check_bound(trace, alpha, cfg.bound_tol, cfg.fit_window);
    const bool expected = args.expect_growth ? decay.verdict == Verdict::growth_detected
                                             : decay.verdict == Verdict::decay_certified;

    report["eps_used"] = trace.eps_used;
    report["alpha_used"] = alpha;
    report["dt"] = dt;
    report["steps"] = steps;
    report["samples"] = trace.samples.size();
    report["initial_energy_trace"] = trace.samples.front().total;
    report["initial_energy_bound"] = optional_number(analytic_e0);
    report["decay_report"] = ordered_json{
        {"alpha_star", decay.alpha_star},
        {"tolerance", decay.tolerance},
        {"fitted_slope", optional_number(decay.fitted_slope)},
        {"fitted_rate", optional_number(decay.fitted_rate)},
        {"fit_window", {decay.fit_window.t_lo, decay.fit_window.t_hi}},
        {"bound_satisfied", decay.bound_satisfied},
        {"max_bound_ratio", decay.max_bound_ratio},
        {"max_bound_ratio_initial_bound",
         analytic_e0 ? ordered_json(max_bound_ratio(trace, alpha, *analytic_e0))
                     : ordered_json(nullptr)},
        {"verdict", std::string(to_string(decay.verdict))},
    };
    report["expect_growth"] = args.expect_growth;
    report["outcome"] = expected ? "expected" : "unexpected";

    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_text(cfg.trace_path, csv.str());
    write_text(cfg.report_path, report.dump(2) + "\n");

    out << to_string(decay.verdict) << " max_bound_ratio=" << format_shortest(decay.max_bound_ratio)
        << '\n';
    return static_cast<int>(expected ? kSuccess : kBoundViolated);
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto s0 = parse_range(args.sigma0);
    const auto s1 = parse_range(args.sigma1);
    const auto l1 = parse_range(args.lambda1);
    for (const auto* axis : {&s0, &s1, &l1}) {
      for (double v : *axis) {
        if (!(v > 0.0)) throw ConfigError("sweep values must be positive");
      }
    }

    std::vector<std::tuple<double, double, double>> tuples;
    std::size_t skipped = 0;
    for (double a : s0) {
      for (double b : s1) {
        for (double c : l1) {
          if (b < a) {
            ++skipped;
            continue;
          }
          tuples.emplace_back(a, b, c);
        }
      }
    }
    if (skipped) err << "note: skipped " << skipped << " tuples with sigma1 < sigma0\n";
    if (tuples.empty()) throw ConfigError("sweep has no valid (sigma0 <= sigma1) tuples");
    std::sort(tuples.begin(), tuples.end());

    std::vector<DecayCertificate> rows(tuples.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
      for (std::size_t k = next++; k < tuples.size(); k = next++) {
        try {
          const auto [a, b, c] = tuples[k];
          rows[k] = maximize_rate(DampingBounds(a, b), SpectralGap(c));
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    unsigned threads = args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tuples.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::ostringstream csv;
    csv << "sigma0,sigma1,lambda1,eps_star,alpha_star,discriminant,regime\n";
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const auto [a, b, c] = tuples[k];
      csv << format_shortest(a) << ',' << format_shortest(b) << ',' << format_shortest(c) << ','
          << format_shortest(rows[k].eps_star) << ',' << format_shortest(rows[k].alpha_star) << ','
          << format_shortest(rows[k].discriminant) << ',' << to_string(rows[k].regime) << '\n';
    }
    if (args.output) {
      write_text(*args.output, csv.str());
    } else {
      out << csv.str();
    }
    return static_cast<int>(kSuccess);
  });
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified exponential decay rates for the damped wave equation"};
  app.require_subcommand(1);

  CertificateArgs cert;
  auto* c = app.add_subcommand("certificate", "Compute the decay certificate (JSON)");
  c->add_option("--sigma0", cert.sigma0, "Lower damping bound")->required();
  c->add_option("--sigma1", cert.sigma1, "Upper damping bound")->required();
  c->add_option("--lambda1", cert.lambda1, "First Dirichlet eigenvalue");
  c->add_option("--interval-length", cert.interval_length, "Interval length (analytic lambda1)");
  c->add_option("--box", cert.box, "Box side lengths, comma separated")->delimiter(',');
  c->add_option("--discrete", cert.discrete_points,
                "Use the discrete lambda1 with this many interior points per axis");
  c->add_option("--output,-o", cert.output, "Write JSON here instead of stdout");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate a config and check the decay bound");
  s->add_option("config", sim.config, "key = value config file")->required();
  s->add_flag("--expect-growth", sim.expect_growth, "Succeed on growth_detected instead");
  s->add_option("--trace", sim.trace, "Override output.trace");
  s->add_option("--report", sim.report, "Override output.report");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Certificates over a parameter grid (CSV)");
  w->add_option("--sigma0", sweep.sigma0, "start:stop:count, list, or value")->required();
  w->add_option("--sigma1", sweep.sigma1, "start:stop:count, list, or value")->required();
  w->add_option("--lambda1", sweep.lambda1, "start:stop:count, list, or value")->required();
  w->add_option("--output,-o", sweep.output, "Write CSV here instead of stdout");
  w->add_option("--threads", sweep.threads, "Worker threads (0: all cores)");

  std::vector<const char*> raw;
  raw.reserve(argv.size());
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (*c) return cmd_certificate(cert, out, err);
  if (*s) return cmd_simulate(sim, out, err);
  return cmd_sweep(sweep, out, err);
}

}  // namespace wavedecay::cli
