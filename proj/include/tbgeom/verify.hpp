#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tbgeom {

/// Where sample points come from: x uniform in [−box, box]^m, t = ½g(u,u) uniform in
/// [t_min, t_max] clipped to the weight domain, direction of u Gaussian.
struct Sampling {
  double box = 0.5;
  double t_min = 0.05;
  double t_max = 2.0;
};

struct RunConfig {
  nlohmann::json base;     // see metric_from_json
  nlohmann::json weights;  // see weights_from_json
  std::vector<std::string> suites;
  int samples = 20;
  std::uint64_t seed = 1;
  double h = 1e-4;
  std::map<std::string, double> tolerances;
  Sampling sampling;
  std::string output = "report";

  /// Throws ConfigError naming the offending field.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Suite list with an empty list meaning all suites.
  std::vector<std::string> resolved_suites() const;
  double tolerance(const std::string& suite) const;
};

struct SuiteInfo {
  std::string name;
  std::string anchor;
  double default_tolerance;
  std::string checks;
};

/// The 13 suites in run order.
const std::vector<SuiteInfo>& suite_catalogue();
const SuiteInfo& suite_info(const std::string& name);

/// A built-in negative control: passes when its residual is at least `threshold`.
struct ControlResult {
  std::string description;
  double residual = 0.0;
  double threshold = 0.0;
  bool failed_as_expected = false;
};

struct SuiteResult {
  std::string name;
  std::string anchor;
  double tolerance = 0.0;
  bool pass = false;
  double max_residual = 0.0;
  std::vector<double> residuals;               // one per sample
  std::map<std::string, double> components;    // max over samples, per check
  std::map<std::string, double> info;          // reported, not judged
  std::vector<nlohmann::json> points;          // sampled (x, u) per sample
  std::uint64_t seed = 0;                      // suite-level seed derived from the run seed
  std::optional<ControlResult> control;
  std::string error;
  double wall_time = 0.0;

  nlohmann::json to_json(bool timing = true) const;
};

struct Report {
  RunConfig config;
  std::vector<SuiteResult> suites;
  double wall_time = 0.0;

  bool all_pass() const;
  nlohmann::json to_json(bool timing = true) const;
  /// suite,sample_index,residual,tolerance,pass
  std::string to_csv() const;
  /// One line per suite.
  std::string summary() const;
};

/// Runs the configured suites concurrently. Errors inside a suite are recorded in that suite.
Report run(const RunConfig& config);

/// Runs a single suite (used by run()).
SuiteResult run_suite(const RunConfig& config, const std::string& name);

/// 0 when every suite passes, 1 otherwise.
int exit_status(const Report& report);

/// Log-decade histogram of residuals, [{"upper": 1e-15, "count": n}, ...] (non-empty bins only).
nlohmann::json residual_histogram(const std::vector<double>& residuals);

}  // namespace tbgeom
