#pragma once

#include <span>
#include <string>
#include <vector>

namespace causticlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x.  Data with no spread in y
/// (total sum of squares below 1e-12 per point) is reported as a perfect fit.
/// Throws std::invalid_argument for fewer than two points.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Slope of log(value) against log(1/h): value ~ C h^{-slope}.  Rows with
/// non-positive or non-finite values must be filtered by the caller.
LineFit fit_power_law(std::span<const double> h, std::span<const double> value);

/// Continuous two-segment (hinge) fit y = c + a x + b max(0, x - x0) with the
/// breakpoint x0 scanned on a uniform grid over [lo, hi].
struct HingeFit {
  double breakpoint = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  double sse = 0.0;
};
HingeFit fit_hinge(std::span<const double> x, std::span<const double> y, double lo, double hi, double step);

/// n geometric points from `first` to `last` inclusive.
std::vector<double> geometric_grid(double first, double last, int n);
/// n uniform points from `first` to `last` inclusive.
std::vector<double> linear_grid(double first, double last, int n);

}  // namespace causticlab
