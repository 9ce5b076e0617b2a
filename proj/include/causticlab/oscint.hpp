#pragma once

// I(x; h) = h^{-k/2} \int a(x, theta; h) e^{i phi(x, theta) / h} d theta for
// k in {1, 2}, by composite Gauss-Legendre quadrature on panels sized to the
// local oscillation of the phase.

#include "causticlab/amplitudes.hpp"
#include "causticlab/catalog.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace causticlab {

struct QuadratureOptions {
  /// Gauss-Legendre nodes per panel and axis.  24 nodes over at most 6 local
  /// periods gives a level-0 rule error near 1e-14 relative; the cost per
  /// node is what dominates for k = 2.
  int order = 24;
  /// Level-0 panel length in local oscillation periods; level l uses
  /// periods_per_panel / 2^l.
  double periods_per_panel = 6.0;
  /// Minimum number of panels across the amplitude support on each axis.
  int min_panels = 16;
  /// Maximum integrand evaluations per integral; 0 selects default_budget(k).
  std::int64_t budget = 0;
  int max_levels = 12;

  friend bool operator==(const QuadratureOptions&, const QuadratureOptions&) = default;
};

/// 2^24 for k = 1, 2^33 for k = 2.
std::int64_t default_budget(int k);

struct IntegralSpec {
  IntegralSpec(PhaseFunction phase, AmplitudeProfile amplitude, std::vector<double> x, double h);

  PhaseFunction phase;
  AmplitudeProfile amplitude;
  std::vector<double> x;
  double h;
  double rel_tol = 1e-8;
  bool includes_prefactor = true;
  QuadratureOptions quadrature;

  /// Throws std::invalid_argument when h, rel_tol, x or k are out of range.
  void validate() const;
};

struct IntegralResult {
  Complex value;
  double abs_value = 0.0;
  double est_error = 0.0;
  std::int64_t panels_used = 0;
  std::int64_t evaluations = 0;
  int levels = 0;
  bool converged = false;
};

IntegralResult evaluate(const IntegralSpec& spec);

/// Same integral after theta = lambda^r eta and x = lambda^{1-s} y, so that
/// the phase frequency becomes lambda / h.  lambda must lie in [h, 1];
/// lambda = 1 reproduces evaluate() bit for bit.
IntegralResult evaluate_rescaled(const IntegralSpec& spec, double lambda);

/// The integral K(y; h/lambda) appearing after rescaling, i.e. the rescaled
/// integral without the lambda^{|r|} h^{-k/2} factor.
IntegralResult rescaled_kernel(const IntegralSpec& spec, double lambda);

// ---------------------------------------------------------------------------
// Closed forms for the two non-oscillatory model integrals.

/// pi Im (alpha - i)^{-1/2} = \int d eta / ((eta^2 + alpha)^2 + 1).
double m_alpha(double alpha);
/// eps^{-1} (pi/2 + arctan(x / eps)) = \int |theta| / ((x - theta^2)^2 + eps^2) d theta.
double weighted_cauchy(double x, double eps);
/// eps^{-3/2} M(-x / eps) = \int 1 / ((x - theta^2)^2 + eps^2) d theta.
double cauchy_square(double x, double eps);

/// Dispatch by name: "M_alpha" {alpha}, "weighted_cauchy" {x, eps},
/// "cauchy_square" {x, eps}.
double closed_form_oracle(const std::string& name, std::span<const double> params);

/// Adaptive quadrature of the same two integrands.
double integrate_cauchy_square(double x, double eps, double rel_tol = 1e-12);
double integrate_weighted_cauchy(double x, double eps, double rel_tol = 1e-12);

}  // namespace causticlab
