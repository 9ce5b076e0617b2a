#pragma once

#include <functional>
#include <span>
#include <vector>

namespace causticlab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights by Newton iteration on P_n; cached per order.
const GaussLegendre& gauss_legendre(int order);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) bisection on [a, b] for smooth real
/// integrands.  Stops when the summed error estimate is below
/// max(abs_tol, rel_tol * |value|).
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-12, double abs_tol = 0.0, int max_intervals = 20000);

/// Integral over the whole real line, split at the sorted `breakpoints`; the
/// two unbounded pieces are mapped to finite intervals by t -> t / (1 - t).
AdaptiveResult integrate_real_line(const std::function<double(double)>& f, std::vector<double> breakpoints,
                                   double rel_tol = 1e-12, int max_intervals = 20000);

}  // namespace causticlab
