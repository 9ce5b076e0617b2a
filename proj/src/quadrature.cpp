#include "causticlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace causticlab {

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1 || order > 256) throw std::invalid_argument("Gauss-Legendre order must lie in [1, 256]");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  GaussLegendre rule;
  rule.nodes.assign(static_cast<std::size_t>(order), 0.0);
  rule.weights.assign(static_cast<std::size_t>(order), 2.0);
  // P_n(x) and P_n'(x) by the three-term recurrence.
  const auto legendre = [order](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };
  if (order > 1) {
    for (int i = 0; i < order / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(x).second;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.nodes[static_cast<std::size_t>(i)] = -x;
      rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
      rule.weights[static_cast<std::size_t>(i)] = w;
      rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    if (order % 2 == 1) {
      const double dp = legendre(0.0).second;
      rule.weights[static_cast<std::size_t>(order / 2)] = 2.0 / (dp * dp);
    }
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

// QUADPACK G7/K15 abscissae and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * hw, std::abs((resk - resg) * hw)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_intervals) {
  AdaptiveResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> heap;
  auto first = kronrod15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = kronrod15(f, worst.a, mid);
    const auto right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  out.intervals = count;
  out.converged = esum <= std::max(abs_tol, rel_tol * std::abs(sum));
  return out;
}

AdaptiveResult integrate_real_line(const std::function<double(double)>& f, std::vector<double> breakpoints,
                                   double rel_tol, int max_intervals) {
  if (breakpoints.empty()) breakpoints.push_back(0.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::vector<AdaptiveResult> parts;
  const double lo = breakpoints.front();
  const double hi = breakpoints.back();
  // (-inf, lo]: theta = lo - t / (1 - t)
  parts.push_back(integrate_adaptive(
      [&](double t) {
        const double u = 1.0 - t;
        return f(lo - t / u) / (u * u);
      },
      0.0, 1.0, rel_tol, 0.0, max_intervals));
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    parts.push_back(integrate_adaptive(f, breakpoints[i], breakpoints[i + 1], rel_tol, 0.0, max_intervals));
  parts.push_back(integrate_adaptive(
      [&](double t) {
        const double u = 1.0 - t;
        return f(hi + t / u) / (u * u);
      },
      0.0, 1.0, rel_tol, 0.0, max_intervals));

  AdaptiveResult out;
  out.converged = true;
  for (const auto& p : parts) {
    out.value += p.value;
    out.error += p.error;
    out.intervals += p.intervals;
    out.converged = out.converged && p.converged;
  }
  out.converged = out.error <= rel_tol * std::abs(out.value) * 10.0 || out.converged;
  return out;
}

}  // namespace causticlab
