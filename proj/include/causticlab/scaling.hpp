#pragma once

// Sup-norm scans of I(x; h) over quasi-homogeneous shells, exponent fits and
// threshold sweeps.

#include "causticlab/oscint.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace causticlab {

enum class XStrategy { origin_only, omega_shells, full_grid };

std::string to_string(XStrategy s);
XStrategy parse_x_strategy(const std::string& s);

struct ScanPlan {
  ScanPlan(PhaseFunction phase, AmplitudeProfile amplitude) : phase(std::move(phase)), amplitude(std::move(amplitude)) {}

  PhaseFunction phase;
  AmplitudeProfile amplitude;
  /// Strictly decreasing, at least 5 points.
  std::vector<double> h_grid;
  XStrategy x_strategy = XStrategy::origin_only;
  /// Empty: 8 geometric points from h to 1, per h.
  std::vector<double> shell_lambdas;
  int points_per_shell = 4;
  /// Shell points beyond this many are subsampled with `seed`.
  int max_shell_points = 64;
  /// full_grid: points per axis on [-1, 1]^{k0}.
  int grid_points = 9;
  double rel_tol = 1e-8;
  QuadratureOptions quadrature;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

/// One evaluated point.  The origin has lambda = 0 and y_index = 0; shell
/// points have y_index >= 1 in sample order; full-grid points use lambda = 1.
struct ScanRow {
  double h = 0.0;
  double lambda = 0.0;
  int y_index = 0;
  std::vector<double> x;
  double abs_I = 0.0;
  double est_error = 0.0;
  bool converged = false;
};

struct SupRow {
  double h = 0.0;
  double sup_abs = 0.0;
  std::vector<double> argmax_x;
  /// False when any integral at this h failed to converge.
  bool converged = false;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<SupRow> sup;
};

/// Points of the boundary of Omega(1) = {sum |y_j|^{1/(1-s_j)} <= 1}: sign
/// patterns times a simplex grid with `points_per_shell` steps.  Coordinates
/// equal to zero are not sign-flipped, so the list has no duplicates.
std::vector<std::vector<double>> shell_points(const HomogeneityProfile& hom, int points_per_shell);

/// shell_points() subsampled to at most `max_points` by a seeded draw; the
/// kept points stay in their original order.
std::vector<std::vector<double>> sample_shell(const HomogeneityProfile& hom, int points_per_shell, int max_points,
                                              std::uint64_t seed);

/// x_j = lambda^{1 - s_j} y_j
std::vector<double> shell_to_x(const HomogeneityProfile& hom, std::span<const double> y, double lambda);

ScanResult supnorm_scan(const ScanPlan& plan);

/// Direct |I(lambda^{1-s} y; h)| against lambda^{|r|} h^{-k/2} |K(y; h/lambda)|.
struct ShellCheck {
  double direct = 0.0;
  double rescaled = 0.0;
  double relative_difference = 0.0;
};
ShellCheck shell_consistency(const ScanPlan& plan, double h, double lambda, std::span<const double> y);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double reference = 0.0;
  /// Set when the reference is an exact rational (caustic orders).
  std::optional<Rational> reference_exact;
  double tolerance = 0.0;
  Verdict verdict = Verdict::inconclusive;
  int rows_used = 0;
};

/// Fit of log sup against log(1/h) over converged rows.  Fewer than 4 rows
/// gives an inconclusive verdict.
ExponentFit fit_exponent(std::span<const double> h, std::span<const double> sup, std::span<const bool> converged,
                         double reference, double tolerance);
ExponentFit fit_exponent(const std::vector<SupRow>& rows, double reference, double tolerance);
ExponentFit fit_exponent(const std::vector<SupRow>& rows, Rational reference, double tolerance);

/// Default tolerances for exponent fits.
inline constexpr double kTolerance1D = 0.03;
inline constexpr double kTolerance2D = 0.06;
inline constexpr double kToleranceESeries = 0.10;

struct SweepEntry {
  double delta = 0.0;
  /// delta above the tabulated threshold: no pass/fail expectation, except
  /// for A2, which is compared against the fold's sharp exponent.
  bool exploratory = false;
  ExponentFit fit;
};

/// supnorm_scan with a narrow_bump amplitude per delta, fitted against the
/// caustic order.  `plan` supplies grids and options; its amplitude is
/// replaced.
std::vector<SweepEntry> threshold_sweep(const SingularityType& t, std::span<const double> deltas, const ScanPlan& plan,
                                        double tolerance);

/// geometric_grid(2^-6, 2^-14, 10) for k = 1, geometric_grid(2^-4, 2^-10, 10) for k = 2.
std::vector<double> default_h_grid(int k);

}  // namespace causticlab
