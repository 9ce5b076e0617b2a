#include "causticlab/scaling.hpp"

#include "causticlab/fold.hpp"
#include "causticlab/parallel.hpp"
#include "causticlab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

namespace causticlab {

std::string to_string(XStrategy s) {
  switch (s) {
    case XStrategy::origin_only: return "origin_only";
    case XStrategy::omega_shells: return "omega_shells";
    case XStrategy::full_grid: return "full_grid";
  }
  return "?";
}

XStrategy parse_x_strategy(const std::string& s) {
  for (auto v : {XStrategy::origin_only, XStrategy::omega_shells, XStrategy::full_grid})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown x strategy '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

void ScanPlan::validate() const {
  if (h_grid.size() < 5) throw std::invalid_argument("h_grid needs at least 5 points");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > 0.0 && h_grid[i] < 1.0)) throw std::invalid_argument("h_grid values must lie in (0, 1)");
    if (i > 0 && !(h_grid[i] < h_grid[i - 1])) throw std::invalid_argument("h_grid must be strictly decreasing");
  }
  if (points_per_shell < 1) throw std::invalid_argument("points_per_shell must be at least 1");
  if (max_shell_points < 1) throw std::invalid_argument("max_shell_points must be at least 1");
  if (grid_points < 1) throw std::invalid_argument("grid_points must be at least 1");
  for (double l : shell_lambdas)
    if (!(l > 0.0 && l <= 1.0)) throw std::invalid_argument("shell lambdas must lie in (0, 1]");
  if (phase.k() > 2) throw std::invalid_argument("scans support k <= 2 only");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

std::vector<double> default_h_grid(int k) {
  return k == 1 ? geometric_grid(std::ldexp(1.0, -6), std::ldexp(1.0, -14), 10)
                : geometric_grid(std::ldexp(1.0, -4), std::ldexp(1.0, -10), 10);
}

// ---------------------------------------------------------------------------

namespace {

// Compositions of `total` into `parts` non-negative integers, in lexicographic
// order.
void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int c = total; c >= 0; --c) {
    cur.push_back(c);
    compositions(total - c, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<double>> shell_points(const HomogeneityProfile& hom, int points_per_shell) {
  const int k0 = hom.k0;
  if (k0 == 0) return {};
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(points_per_shell, k0, cur, comps);

  std::vector<std::vector<double>> out;
  for (const auto& c : comps) {
    std::vector<double> base(static_cast<std::size_t>(k0));
    for (int j = 0; j < k0; ++j) {
      const double u = static_cast<double>(c[static_cast<std::size_t>(j)]) / points_per_shell;
      // |y_j|^{1/(1-s_j)} = u_j
      base[static_cast<std::size_t>(j)] = std::pow(u, 1.0 - to_double(hom.s[static_cast<std::size_t>(j)]));
    }
    for (unsigned mask = 0; mask < (1u << k0); ++mask) {
      bool duplicate = false;
      auto y = base;
      for (int j = 0; j < k0; ++j) {
        if (mask & (1u << j)) {
          if (y[static_cast<std::size_t>(j)] == 0.0) duplicate = true;
          y[static_cast<std::size_t>(j)] = -y[static_cast<std::size_t>(j)];
        }
      }
      if (!duplicate) out.push_back(std::move(y));
    }
  }
  return out;
}

std::vector<std::vector<double>> sample_shell(const HomogeneityProfile& hom, int points_per_shell, int max_points,
                                              std::uint64_t seed) {
  auto all = shell_points(hom, points_per_shell);
  if (static_cast<int>(all.size()) <= max_points) return all;
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates with an explicitly specified engine, so the draw is
  // the same on every platform.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(max_points); ++i) {
    const auto span = idx.size() - i;
    const auto j = i + static_cast<std::size_t>(rng() % span);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(max_points));
  std::sort(idx.begin(), idx.end());
  std::vector<std::vector<double>> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(std::move(all[i]));
  return out;
}

std::vector<double> shell_to_x(const HomogeneityProfile& hom, std::span<const double> y, double lambda) {
  std::vector<double> x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) x[j] = std::pow(lambda, 1.0 - to_double(hom.s[j])) * y[j];
  return x;
}

namespace {

struct Task {
  std::size_t h_index;
  double lambda;
  int y_index;
  std::vector<double> x;
};

IntegralSpec make_spec(const ScanPlan& plan, std::vector<double> x, double h) {
  IntegralSpec spec(plan.phase, plan.amplitude, std::move(x), h);
  spec.rel_tol = plan.rel_tol;
  spec.quadrature = plan.quadrature;
  return spec;
}

}  // namespace

ScanResult supnorm_scan(const ScanPlan& plan) {
  plan.validate();
  const auto& hom = plan.phase.homogeneity();
  const int k0 = plan.phase.k0();

  std::vector<Task> tasks;
  std::vector<std::vector<double>> shell;
  if (plan.x_strategy == XStrategy::omega_shells)
    shell = sample_shell(hom, plan.points_per_shell, plan.max_shell_points, plan.seed);
  std::vector<std::vector<double>> grid;
  if (plan.x_strategy == XStrategy::full_grid && k0 > 0) {
    const auto axis = linear_grid(-1.0, 1.0, plan.grid_points);
    std::vector<std::size_t> digit(static_cast<std::size_t>(k0), 0);
    for (;;) {
      std::vector<double> x(static_cast<std::size_t>(k0));
      for (int j = 0; j < k0; ++j) x[static_cast<std::size_t>(j)] = axis[digit[static_cast<std::size_t>(j)]];
      grid.push_back(std::move(x));
      int j = k0 - 1;
      while (j >= 0 && ++digit[static_cast<std::size_t>(j)] == axis.size()) digit[static_cast<std::size_t>(j--)] = 0;
      if (j < 0) break;
    }
  }

  for (std::size_t hi = 0; hi < plan.h_grid.size(); ++hi) {
    const double h = plan.h_grid[hi];
    tasks.push_back({hi, 0.0, 0, std::vector<double>(static_cast<std::size_t>(k0), 0.0)});
    if (plan.x_strategy == XStrategy::omega_shells) {
      const auto lambdas = plan.shell_lambdas.empty() ? geometric_grid(h, 1.0, 8) : plan.shell_lambdas;
      for (double lambda : lambdas) {
        for (std::size_t yi = 0; yi < shell.size(); ++yi)
          tasks.push_back({hi, lambda, static_cast<int>(yi) + 1, shell_to_x(hom, shell[yi], lambda)});
      }
    } else if (plan.x_strategy == XStrategy::full_grid) {
      for (std::size_t gi = 0; gi < grid.size(); ++gi) tasks.push_back({hi, 1.0, static_cast<int>(gi) + 1, grid[gi]});
    }
  }

  ScanResult out;
  out.rows.resize(tasks.size());
  parallel_for(tasks.size(), plan.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const double h = plan.h_grid[t.h_index];
    const auto r = evaluate(make_spec(plan, t.x, h));
    out.rows[i] = {h, t.lambda, t.y_index, t.x, r.abs_value, r.est_error, r.converged};
  });

  for (std::size_t hi = 0; hi < plan.h_grid.size(); ++hi) {
    SupRow s;
    s.h = plan.h_grid[hi];
    s.converged = true;
    bool first = true;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].h_index != hi) continue;
      const auto& row = out.rows[i];
      s.converged = s.converged && row.converged;
      if (first || row.abs_I > s.sup_abs) {
        s.sup_abs = row.abs_I;
        s.argmax_x = row.x;
        first = false;
      }
    }
    out.sup.push_back(std::move(s));
  }
  return out;
}

ShellCheck shell_consistency(const ScanPlan& plan, double h, double lambda, std::span<const double> y) {
  const auto& hom = plan.phase.homogeneity();
  const auto x = shell_to_x(hom, y, lambda);
  const auto spec = make_spec(plan, x, h);
  ShellCheck c;
  c.direct = evaluate(spec).abs_value;
  const auto kernel = rescaled_kernel(make_spec(plan, x, h), lambda);
  // rescaled_kernel already carries lambda^{|r|}; only h^{-k/2} is missing.
  c.rescaled = kernel.abs_value * std::pow(h, -0.5 * plan.phase.k());
  c.relative_difference = std::abs(c.direct - c.rescaled) / std::max(c.direct, 1e-300);
  return c;
}

// ---------------------------------------------------------------------------

ExponentFit fit_exponent(std::span<const double> h, std::span<const double> sup, std::span<const bool> converged,
                         double reference, double tolerance) {
  ExponentFit fit;
  fit.reference = reference;
  fit.tolerance = tolerance;
  std::vector<double> hs;
  std::vector<double> vs;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!converged[i] || !(sup[i] > 0.0) || !std::isfinite(sup[i])) continue;
    hs.push_back(h[i]);
    vs.push_back(sup[i]);
  }
  fit.rows_used = static_cast<int>(hs.size());
  if (hs.size() < 4) return fit;
  const auto line = fit_power_law(hs, vs);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  if (fit.r_squared >= 0.98)
    fit.verdict = std::abs(fit.slope - reference) <= tolerance ? Verdict::pass : Verdict::fail;
  return fit;
}

ExponentFit fit_exponent(const std::vector<SupRow>& rows, double reference, double tolerance) {
  std::vector<double> h;
  std::vector<double> s;
  // std::vector<bool> has no contiguous storage to take a span of.
  auto flags = std::make_unique<bool[]>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    h.push_back(rows[i].h);
    s.push_back(rows[i].sup_abs);
    flags[i] = rows[i].converged;
  }
  return fit_exponent(h, s, std::span<const bool>(flags.get(), rows.size()), reference, tolerance);
}

ExponentFit fit_exponent(const std::vector<SupRow>& rows, Rational reference, double tolerance) {
  auto fit = fit_exponent(rows, to_double(reference), tolerance);
  fit.reference_exact = reference;
  return fit;
}

std::vector<SweepEntry> threshold_sweep(const SingularityType& t, std::span<const double> deltas, const ScanPlan& plan,
                                        double tolerance) {
  const auto kappa = caustic_order(t);
  const double delta0 = to_double(threshold(t));
  std::vector<SweepEntry> out;
  for (double delta : deltas) {
    SweepEntry e;
    e.delta = delta;
    // Exact rationals such as 1/3 arrive as doubles; allow for the rounding.
    e.exploratory = delta > delta0 + 1e-12;
    if (e.exploratory && t == make_A(1)) {
      FoldExperiment exp;
      exp.delta = delta;
      exp.side = side_for(delta);
      exp.h_grid = plan.h_grid;
      exp.rel_tol = plan.rel_tol;
      exp.quadrature = plan.quadrature;
      exp.workers = plan.workers;
      exp.tolerance = tolerance;
      e.fit = run_fold(exp).fit;
    } else {
      ScanPlan p = plan;
      p.amplitude = make_amplitude(AmplitudeKind::narrow_bump, delta, {});
      e.fit = fit_exponent(supnorm_scan(p).sup, kappa, tolerance);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace causticlab
