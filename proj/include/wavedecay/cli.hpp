#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wavedecay/analysis.hpp"
#include "wavedecay/certificate.hpp"
#include "wavedecay/errors.hpp"
#include "wavedecay/wavesim.hpp"

namespace wavedecay::cli {

enum ExitCode : int {
  kSuccess = 0,
  kBoundViolated = 1,
  kInputError = 2,
  kRuntimeError = 3,
};

/// Bad config file or flag value; maps to exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Flat `key = value` file. '#' starts a comment; blank lines are skipped;
/// keys are dotted names and may appear once.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

enum class SpectralSource { analytic, discrete, value };

/// Everything a `simulate` run needs, validated before any computation.
struct RunConfig {
  bool counterexample = false;
  CounterexampleSetup counterexample_setup;

  std::vector<double> lengths{1.0};
  std::vector<double> offsets{0.0};
  std::vector<std::size_t> points{400};
  DampingSpec damping{ConstantDamping{2.0}, DampingBounds(2.0, 2.0)};

  std::string u0_shape = "sine";  // sine | zero
  double u0_amplitude = 1.0;
  std::string u1_shape = "zero";  // zero | sine | minus_eps_u0
  double u1_amplitude = 1.0;

  SpectralSource spectral_source = SpectralSource::analytic;
  double lambda1_value = 0.0;

  std::optional<double> eps_explicit;  // empty: use the certificate's ε*
  double t_end = 10.0;
  double cfl_factor = 0.9;
  std::size_t sample_every = 10;
  double bound_tol = 0.02;
  std::optional<FitWindow> fit_window;

  std::filesystem::path trace_path = "trace.csv";
  std::filesystem::path report_path = "report.json";
};

/// Relative paths (outputs, damping tables) resolve against base_dir.
RunConfig parse_run_config(const ConfigFile& file, const std::filesystem::path& base_dir);

WaveProblem build_problem(const RunConfig& config, double eps_for_v);

/// Parses "a:b:n" (n evenly spaced values, ends included), "x,y,z", or "x".
std::vector<double> parse_range(const std::string& text);

std::string format_shortest(double value);
std::string format_17g(double value);

void write_trace_csv(std::ostream& out, const EnergyTrace& trace);

struct CertificateArgs {
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  std::optional<double> lambda1;
  std::optional<double> interval_length;
  std::vector<double> box;
  std::optional<std::size_t> discrete_points;  // per axis, on the interval/box
  std::optional<std::filesystem::path> output;
};

struct SimulateArgs {
  std::filesystem::path config;
  bool expect_growth = false;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> report;
};

struct SweepArgs {
  std::string sigma0;
  std::string sigma1;
  std::string lambda1;
  std::optional<std::filesystem::path> output;
  unsigned threads = 0;  // 0: hardware concurrency
};

int cmd_certificate(const CertificateArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace wavedecay::cli
