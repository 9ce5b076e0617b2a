#include "causticlab/fold.hpp"

#include "causticlab/parallel.hpp"
#include "causticlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace causticlab {

namespace {

constexpr double kThird = 1.0 / 3.0;
// Deltas written as decimals (0.3333) or computed as 1.0/3 both count as the
// threshold.
constexpr double kThresholdSlack = 1e-9;

}  // namespace

double sharp_exponent(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0, 1]");
  return delta <= kThird ? (1.0 + 3.0 * delta) / 6.0 : (1.0 + delta) / 4.0;
}

std::string to_string(FoldSide s) {
  switch (s) {
    case FoldSide::below: return "below";
    case FoldSide::above: return "above";
    case FoldSide::at_threshold: return "at_threshold";
  }
  return "?";
}

FoldSide parse_fold_side(const std::string& s) {
  for (auto v : {FoldSide::below, FoldSide::above, FoldSide::at_threshold})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown fold side '" + s + "'");
}

FoldSide side_for(double delta) {
  if (std::abs(delta - kThird) <= kThresholdSlack) return FoldSide::at_threshold;
  return delta < kThird ? FoldSide::below : FoldSide::above;
}

void FoldExperiment::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("fold delta must lie in [0, 1]");
  switch (side) {
    case FoldSide::below:
      if (delta > kThird + kThresholdSlack) throw std::invalid_argument("the below family needs delta <= 1/3");
      break;
    case FoldSide::above:
      if (delta < kThird - kThresholdSlack) throw std::invalid_argument("the above family needs delta >= 1/3");
      break;
    case FoldSide::at_threshold:
      if (std::abs(delta - kThird) > kThresholdSlack) throw std::invalid_argument("at_threshold needs delta = 1/3");
      break;
  }
  if (h_grid.size() < 4) throw std::invalid_argument("fold h_grid needs at least 4 points");
  for (double h : h_grid)
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("fold h values must lie in (0, 1)");
  if (!(x_window >= 0.0)) throw std::invalid_argument("x_window must be non-negative");
  if (x_points < 1) throw std::invalid_argument("x_points must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

PhaseFunction FoldExperiment::phase() const {
  const auto fold = build_phase(make_A(1));
  if (side != FoldSide::above) return fold;
  // x theta - theta^3 / 3: same weights as the fold normal form.
  return PhaseFunction(make_A(1, Sign::minus), fold.homogeneity(), {{-1.0 / 3.0, 3, 0}}, {{1.0, 1, 0}});
}

AmplitudeProfile FoldExperiment::amplitude() const {
  return make_amplitude(side == FoldSide::above ? AmplitudeKind::fold_saturator_above
                                                : AmplitudeKind::fold_saturator_below,
                        delta, {});
}

namespace {

double amplitude_l2(const AmplitudeProfile& a, double h) {
  const double c = a.center_of(0);
  const double r = a.support_radius(h);
  const auto f = [&](double theta) { return std::norm(a(theta, h)); };
  // Split where the cutoff starts to fall so the plateau edges are panel ends.
  const double w = 0.5 * r;
  double total = 0.0;
  for (auto [lo, hi] : {std::pair{c - r, c - w}, {c - w, c + w}, {c + w, c + r}})
    total += integrate_adaptive(f, lo, hi, 1e-12, 0.0, 20000).value;
  return std::sqrt(total);
}

IntegralSpec fold_spec(const FoldExperiment& exp, double x, double h) {
  IntegralSpec spec(exp.phase(), exp.amplitude(), {x}, h);
  spec.includes_prefactor = false;
  spec.rel_tol = exp.rel_tol;
  spec.quadrature = exp.quadrature;
  return spec;
}

}  // namespace

double l2_from_coefficients(const FoldExperiment& exp, double h) {
  return std::sqrt(2.0 * std::numbers::pi * h) * amplitude_l2(exp.amplitude(), h);
}

FoldResult run_fold(const FoldExperiment& exp) {
  exp.validate();
  const auto ys = exp.x_points == 1 ? std::vector<double>{0.0} : linear_grid(-exp.x_window, exp.x_window, exp.x_points);
  const std::size_t per_h = ys.size() + 1;
  const std::size_t nh = exp.h_grid.size();

  std::vector<IntegralResult> values(nh * per_h);
  parallel_for(nh * per_h, exp.workers, [&](std::size_t i) {
    const double h = exp.h_grid[i / per_h];
    const std::size_t j = i % per_h;
    const double x = j == 0 ? 0.0 : ys[j - 1] * std::pow(h, 2.0 / 3.0);
    values[i] = evaluate(fold_spec(exp, x, h));
  });

  FoldResult out;
  std::vector<SupRow> ratio_rows;
  std::vector<SupRow> origin_rows;
  for (std::size_t hi = 0; hi < nh; ++hi) {
    const double h = exp.h_grid[hi];
    FoldRow row;
    row.delta = exp.delta;
    row.h = h;
    row.converged = true;
    for (std::size_t j = 0; j < per_h; ++j) {
      const auto& v = values[hi * per_h + j];
      row.converged = row.converged && v.converged;
      if (j == 0 || v.abs_value > row.sup_abs) {
        row.sup_abs = v.abs_value;
        row.argmax_x = j == 0 ? 0.0 : ys[j - 1] * std::pow(h, 2.0 / 3.0);
      }
    }
    row.u0 = values[hi * per_h].abs_value;
    row.l2 = l2_from_coefficients(exp, h);
    row.ratio = row.sup_abs / row.l2;
    ratio_rows.push_back({h, row.ratio, {row.argmax_x}, row.converged});
    origin_rows.push_back({h, row.u0 / row.l2, {0.0}, values[hi * per_h].converged});
    out.rows.push_back(row);
  }
  const double reference = sharp_exponent(exp.delta);
  out.fit = fit_exponent(ratio_rows, reference, exp.tolerance);
  out.origin_fit = fit_exponent(origin_rows, reference, exp.tolerance);
  return out;
}

DirectL2 l2_direct(const FoldExperiment& exp, double h, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  const auto amplitude = exp.amplitude();
  // |u|^2 oscillates in x with frequency at most 2 max|theta| / h.
  const double radius = std::abs(amplitude.center_of(0)) + amplitude.support_radius(h);
  const double freq = 2.0 * radius / h;
  const auto& rule = gauss_legendre(24);
  const double panel = std::min(2.0 * window / 16.0, 3.0 * 2.0 * std::numbers::pi / freq);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * window / panel));
  const double width = 2.0 * window / static_cast<double>(panels);
  const std::size_t n = rule.nodes.size();

  std::vector<double> contrib(panels * n);
  std::vector<char> ok(panels * n);
  parallel_for(panels * n, exp.workers, [&](std::size_t i) {
    const double mid = -window + (static_cast<double>(i / n) + 0.5) * width;
    const double x = mid + 0.5 * width * rule.nodes[i % n];
    const auto r = evaluate(fold_spec(exp, x, h));
    contrib[i] = 0.5 * width * rule.weights[i % n] * std::norm(r.value);
    ok[i] = r.converged;
  });
  DirectL2 out;
  double total = 0.0;
  for (double c : contrib) total += c;
  out.l2 = std::sqrt(total);
  out.converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  out.edge_abs = std::max(evaluate(fold_spec(exp, -window, h)).abs_value, evaluate(fold_spec(exp, window, h)).abs_value);
  return out;
}

FoldSweep fold_regime_sweep(std::span<const double> deltas, const std::vector<double>& h_grid, int workers,
                            double tolerance) {
  FoldSweep sweep;
  std::vector<double> slopes;
  for (double delta : deltas) {
    FoldExperiment exp;
    exp.delta = delta;
    exp.side = side_for(delta);
    exp.h_grid = h_grid;
    exp.workers = workers;
    exp.tolerance = tolerance;
    sweep.deltas.push_back(delta);
    sweep.results.push_back(run_fold(exp));
    slopes.push_back(sweep.results.back().fit.slope);
  }
  if (sweep.deltas.size() >= 4) sweep.breakpoint = fit_hinge(sweep.deltas, slopes, 0.05, 0.95, 0.01);
  return sweep;
}

// ---------------------------------------------------------------------------

Lemma62Report lemma_62_suite(std::vector<double> eps_grid, std::vector<double> x_grid, int workers) {
  if (eps_grid.empty()) eps_grid = geometric_grid(1e-3, 1e-1, 9);
  if (x_grid.empty()) {
    const auto g = geometric_grid(1e-5, 10.0, 200);
    x_grid.push_back(0.0);
    for (double v : g) {
      x_grid.push_back(v);
      x_grid.push_back(-v);
    }
    std::sort(x_grid.begin(), x_grid.end());
  }
  for (double e : eps_grid)
    if (!(e > 0.0)) throw std::invalid_argument("eps values must be positive");

  Lemma62Report report;
  report.rows.resize(eps_grid.size() * x_grid.size());
  parallel_for(report.rows.size(), workers, [&](std::size_t i) {
    const double eps = eps_grid[i / x_grid.size()];
    const double x = x_grid[i % x_grid.size()];
    report.rows[i] = {eps,
                      x,
                      integrate_cauchy_square(x, eps),
                      cauchy_square(x, eps),
                      integrate_weighted_cauchy(x, eps),
                      weighted_cauchy(x, eps)};
  });

  std::vector<double> sup1(eps_grid.size(), 0.0);
  std::vector<double> sup2(eps_grid.size(), 0.0);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    report.max_relative_error_first =
        std::max(report.max_relative_error_first, std::abs(r.first_numeric - r.first_closed) / r.first_closed);
    report.max_relative_error_second =
        std::max(report.max_relative_error_second, std::abs(r.second_numeric - r.second_closed) / r.second_closed);
    sup1[i / x_grid.size()] = std::max(sup1[i / x_grid.size()], r.first_numeric);
    sup2[i / x_grid.size()] = std::max(sup2[i / x_grid.size()], r.second_numeric);
  }
  if (eps_grid.size() >= 2) {
    report.first_exponent = fit_power_law(eps_grid, sup1);
    report.second_exponent = fit_power_law(eps_grid, sup2);
  }
  return report;
}

}  // namespace causticlab
