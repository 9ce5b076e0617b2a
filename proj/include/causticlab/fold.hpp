#pragma once

// The fold beyond its regularity threshold: the two-regime sharp exponent,
// the saturating families on either side of delta = 1/3, and the two exact
// integrals used in the upper bound.

#include "causticlab/regression.hpp"
#include "causticlab/scaling.hpp"

#include <vector>

namespace causticlab {

/// (1 + 3 delta)/6 on [0, 1/3], (1 + delta)/4 on [1/3, 1].
double sharp_exponent(double delta);

enum class FoldSide { below, above, at_threshold };
std::string to_string(FoldSide s);
FoldSide parse_fold_side(const std::string& s);

/// below / at_threshold: u(x) = \int chi(theta / h^delta) e^{i(x theta + theta^3)/h} d theta.
/// above: u(x) = h^{(delta-3)/4} \int chi(theta / h^{(1-delta)/2}) e^{i theta^3 / 3h}
///        e^{i(x theta - theta^3/3)/h} d theta.
struct FoldExperiment {
  double delta = 0.0;
  FoldSide side = FoldSide::below;
  std::vector<double> h_grid;
  /// The sup is taken over x = y h^{2/3} with y on x_points uniform points
  /// of [-x_window, x_window], plus x = 0.
  double x_window = 4.0;
  int x_points = 81;
  double rel_tol = 1e-8;
  double tolerance = 0.04;
  QuadratureOptions quadrature;
  int workers = 1;

  /// Throws std::invalid_argument when the side does not match delta.
  void validate() const;
  PhaseFunction phase() const;
  AmplitudeProfile amplitude() const;
};

/// Picks below for delta < 1/3, at_threshold at 1/3 and above otherwise.
FoldSide side_for(double delta);

struct FoldRow {
  double delta = 0.0;
  double h = 0.0;
  double sup_abs = 0.0;
  double argmax_x = 0.0;
  double u0 = 0.0;
  double l2 = 0.0;
  double ratio = 0.0;
  bool converged = false;
};

struct FoldResult {
  std::vector<FoldRow> rows;
  /// Exponent of ||u||_inf / ||u||_2 against sharp_exponent(delta).
  ExponentFit fit;
  /// Exponent of |u(0)| / ||u||_2 alone.
  ExponentFit origin_fit;
};

FoldResult run_fold(const FoldExperiment& exp);

/// ||u||_2 = (2 pi h)^{1/2} ||a||_{L^2(theta)} with ||a|| by adaptive quadrature.
double l2_from_coefficients(const FoldExperiment& exp, double h);

/// ||u||_2 by quadrature of |u(x)|^2 over |x| <= window.
struct DirectL2 {
  double l2 = 0.0;
  /// max(|u(-window)|, |u(window)|), a crude indicator of the tail left out.
  double edge_abs = 0.0;
  bool converged = false;
};
DirectL2 l2_direct(const FoldExperiment& exp, double h, double window = 8.0);

struct FoldSweep {
  std::vector<double> deltas;
  std::vector<FoldResult> results;
  HingeFit breakpoint;
};

/// run_fold for each delta with side_for(delta), then a hinge fit of the
/// fitted exponents on a 0.01 grid.
FoldSweep fold_regime_sweep(std::span<const double> deltas, const std::vector<double>& h_grid, int workers,
                            double tolerance = 0.04);

struct Lemma62Row {
  double eps = 0.0;
  double x = 0.0;
  double first_numeric = 0.0;
  double first_closed = 0.0;
  double second_numeric = 0.0;
  double second_closed = 0.0;
};

struct Lemma62Report {
  std::vector<Lemma62Row> rows;
  double max_relative_error_first = 0.0;
  double max_relative_error_second = 0.0;
  /// Fits of log sup_x against log(1/eps); expected slopes 3/2 and 1.
  LineFit first_exponent;
  LineFit second_exponent;
};

/// Empty grids select the defaults: eps geometric in [1e-3, 1e-1] (9 points)
/// and x in {0} and +-geometric(1e-5, 10, 200).
Lemma62Report lemma_62_suite(std::vector<double> eps_grid, std::vector<double> x_grid, int workers = 1);

}  // namespace causticlab
