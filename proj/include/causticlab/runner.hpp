#pragma once

// Configured experiment runs with CSV/JSON reports, and the acceptance matrix.

#include "causticlab/amplitudes.hpp"
#include "causticlab/scaling.hpp"
#include "causticlab/torus.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace causticlab {

enum class Experiment { catalog_dump, symbol_check, supnorm, threshold_sweep, torus, fold, lemma62 };
std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& s);

/// Invalid configuration.  `field` is a JSON pointer to the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Either explicit values or `points` geometric values from `first` to
/// `last`.  Neither selects the experiment's default grid.
struct HGridSpec {
  std::vector<double> values;
  double first = 0.0;
  double last = 0.0;
  int points = 0;

  bool is_default() const { return values.empty() && points == 0; }
  std::vector<double> resolve(const std::vector<double>& fallback) const;

  friend bool operator==(const HGridSpec&, const HGridSpec&) = default;
};

struct RunConfig {
  Experiment experiment = Experiment::catalog_dump;

  // supnorm, threshold_sweep, symbol_check
  std::string singularity = "A2";
  AmplitudeKind amplitude = AmplitudeKind::fixed_bump;
  std::optional<double> width_exponent;
  std::vector<double> center{0.0};
  std::vector<double> deltas{0.0};
  HGridSpec h_grid;
  XStrategy x_strategy = XStrategy::origin_only;
  int points_per_shell = 4;
  int max_shell_points = 64;
  double rel_tol = 1e-8;
  /// Empty: the per-experiment default.
  std::optional<double> tolerance;
  int alpha_max = 3;

  // torus
  int n = 2;
  ExtremizerMode mode = ExtremizerMode::ball;
  /// Ball radius exponent; empty means deltas[0] + 0.05.
  std::optional<double> delta_prime;
  /// Empty: omega_preset(n, mode).
  std::vector<double> omega;
  double cap_constant = 1.0;
  int a_min = 4;
  int a_max = 16;

  // fold
  double x_window = 4.0;
  int x_points = 81;

  // lemma62; empty selects the defaults
  std::vector<double> eps_grid;
  std::vector<double> x_grid;

  std::string out_dir = "causticlab-out";
  int workers = 1;
  std::uint64_t seed = 0;
  /// Keeps only the 6 largest h values (more when the experiment needs them).
  bool quick = false;

  /// Throws ConfigError.  Called by parse_config and run.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON object.  Unknown keys are errors; missing keys keep their
/// defaults.  Omega entries may be numbers or "p/q" strings.  Throws
/// ConfigError.
RunConfig parse_config(const std::string& json_text);
/// Canonical JSON form; parse_config(config_to_json(c)) == c.
std::string config_to_json(const RunConfig& config);

enum class Comparison { within, at_most, at_least };
std::string to_string(Comparison c);

/// One fitted quantity with its reference and verdict.
struct FitRecord {
  std::string label;
  double slope = 0.0;
  double r_squared = 0.0;
  double reference = 0.0;
  std::optional<Rational> reference_exact;
  double tolerance = 0.0;
  Comparison comparison = Comparison::within;
  Verdict verdict = Verdict::inconclusive;
  /// False for exploratory fits, which never affect the exit status.
  bool expected_pass = true;
};

struct RunReport {
  int status = 0;
  std::vector<FitRecord> fits;
  /// File name -> contents, including summary.json.  Deterministic.
  std::map<std::string, std::string> files;
  /// Not part of `files`; written to timing.json.
  double wall_seconds = 0.0;
};

/// Runs the experiment in memory.  Throws ConfigError on invalid config.
RunReport execute(const RunConfig& config);

/// execute() and write the files under config.out_dir.  Returns the exit
/// status: 0 all expected fits pass, 1 some fit failed or was inconclusive,
/// 2 invalid configuration (message on stderr).
int run(const RunConfig& config);

// ---------------------------------------------------------------------------

enum class CriterionStatus { pass, fail, skipped };
std::string to_string(CriterionStatus s);

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::fail;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct VerifyOptions {
  /// Skips the 2D scans (D4, E series).
  bool quick = false;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Restrict to these criterion ids; empty runs all.
  std::vector<int> only;
};

struct VerifySummary {
  std::vector<CriterionResult> criteria;

  bool all_passed() const;
  /// Deterministic reports: no timings.
  std::string to_csv() const;
  std::string to_json() const;
  std::string timing_json() const;
  /// Human-readable matrix, one line per criterion.
  std::string matrix() const;
};

VerifySummary verify_all(const VerifyOptions& options = {});

}  // namespace causticlab
