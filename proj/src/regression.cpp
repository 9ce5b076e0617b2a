#include "causticlab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace causticlab {

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("least_squares: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: abscissae are all equal");
  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.r_squared = syy <= 1e-12 * static_cast<double>(n) ? 1.0 : 1.0 - sse / syy;
  return fit;
}

LineFit fit_power_law(std::span<const double> h, std::span<const double> value) {
  std::vector<double> lx(h.size());
  std::vector<double> ly(value.size());
  for (std::size_t i = 0; i < h.size(); ++i) lx[i] = -std::log(h[i]);
  for (std::size_t i = 0; i < value.size(); ++i) ly[i] = std::log(value[i]);
  return least_squares(lx, ly);
}

HingeFit fit_hinge(std::span<const double> x, std::span<const double> y, double lo, double hi, double step) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("fit_hinge: need at least three points");
  HingeFit best;
  best.sse = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::floor((hi - lo) / step + 0.5));
  for (int s = 0; s <= steps; ++s) {
    const double x0 = lo + step * s;
    // Normal equations for (c, a, b) with basis {1, x, max(0, x - x0)}.
    double m[3][3] = {};
    double v[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double basis[3] = {1.0, x[i], std::max(0.0, x[i] - x0)};
      for (int r = 0; r < 3; ++r) {
        v[r] += basis[r] * y[i];
        for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      }
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (int col = 0; col < 3 && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
      if (std::abs(m[piv][col]) < 1e-14) {
        singular = true;
        break;
      }
      std::swap(m[piv], m[col]);
      std::swap(v[piv], v[col]);
      for (int r = col + 1; r < 3; ++r) {
        const double f = m[r][col] / m[col][col];
        for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
        v[r] -= f * v[col];
      }
    }
    if (singular) continue;
    double coef[3];
    for (int r = 2; r >= 0; --r) {
      double acc = v[r];
      for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * coef[c];
      coef[r] = acc / m[r][r];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double pred = coef[0] + coef[1] * x[i] + coef[2] * std::max(0.0, x[i] - x0);
      sse += (y[i] - pred) * (y[i] - pred);
    }
    if (sse < best.sse - 1e-15) {
      best.sse = sse;
      best.breakpoint = x0;
      best.left_slope = coef[1];
      best.right_slope = coef[1] + coef[2];
    }
  }
  if (!std::isfinite(best.sse)) throw std::invalid_argument("fit_hinge: no admissible breakpoint");
  return best;
}

std::vector<double> geometric_grid(double first, double last, int n) {
  if (n < 1 || first <= 0.0 || last <= 0.0) throw std::invalid_argument("geometric_grid: bad arguments");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = first;
    return out;
  }
  const double lf = std::log(first);
  const double ll = std::log(last);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(lf + (ll - lf) * i / (n - 1));
  out.front() = first;
  out.back() = last;
  return out;
}

std::vector<double> linear_grid(double first, double last, int n) {
  if (n < 1) throw std::invalid_argument("linear_grid: bad arguments");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = first;
    return out;
  }
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = first + (last - first) * i / (n - 1);
  out.back() = last;
  return out;
}

}  // namespace causticlab
