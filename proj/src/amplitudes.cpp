#include "causticlab/amplitudes.hpp"

#include "causticlab/parallel.hpp"
#include "causticlab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace causticlab {

namespace {

double transition(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = transition(u);
  const double b = transition(1.0 - u);
  return a / (a + b);
}

double bump(double t) { return smooth_step(2.0 - std::abs(t)); }

std::string to_string(AmplitudeKind kind) {
  switch (kind) {
    case AmplitudeKind::fixed_bump: return "fixed_bump";
    case AmplitudeKind::narrow_bump: return "narrow_bump";
    case AmplitudeKind::modulated_bump: return "modulated_bump";
    case AmplitudeKind::fold_saturator_below: return "fold_saturator_below";
    case AmplitudeKind::fold_saturator_above: return "fold_saturator_above";
    case AmplitudeKind::gaussian: return "gaussian";
    case AmplitudeKind::custom: return "custom";
  }
  return "?";
}

AmplitudeKind parse_amplitude_kind(const std::string& name) {
  for (auto k : {AmplitudeKind::fixed_bump, AmplitudeKind::narrow_bump, AmplitudeKind::modulated_bump,
                 AmplitudeKind::fold_saturator_below, AmplitudeKind::fold_saturator_above, AmplitudeKind::gaussian,
                 AmplitudeKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw AmplitudeError("unknown amplitude kind '" + name + "'");
}

double AmplitudeProfile::center_of(int axis) const {
  if (center.empty()) return 0.0;
  if (center.size() == 1) return center[0];
  return center.at(static_cast<std::size_t>(axis));
}

double AmplitudeProfile::scale(double h) const { return width_exponent == 0.0 ? 1.0 : std::pow(h, width_exponent); }

double AmplitudeProfile::prefactor(double h) const {
  return prefactor_exponent == 0.0 ? 1.0 : std::pow(h, prefactor_exponent);
}

double AmplitudeProfile::support_radius(double h) const {
  switch (kind) {
    case AmplitudeKind::gaussian: return std::min(4.0, 8.0 * scale(h));
    case AmplitudeKind::custom: return profile_support * scale(h);
    default: return 2.0 * scale(h);
  }
}

Complex AmplitudeProfile::axis_factor(int axis, double theta, double h) const {
  const double c = center_of(axis);
  const double t = (theta - c) / scale(h);
  switch (kind) {
    case AmplitudeKind::fixed_bump:
    case AmplitudeKind::narrow_bump:
    case AmplitudeKind::fold_saturator_below: return bump(t);
    case AmplitudeKind::modulated_bump: {
      const double b = bump(t);
      return b == 0.0 ? Complex{} : b * std::polar(1.0, modulation * t);
    }
    case AmplitudeKind::fold_saturator_above: {
      const double b = bump(t);
      return b == 0.0 ? Complex{} : b * std::polar(1.0, theta * theta * theta / (3.0 * h));
    }
    case AmplitudeKind::gaussian: return std::exp(-t * t) * bump((theta - c) / 2.0);
    case AmplitudeKind::custom: return profile ? profile(t, h) : Complex{};
  }
  return {};
}

Complex AmplitudeProfile::operator()(std::span<const double> /*x*/, std::span<const double> theta, double h) const {
  Complex v = prefactor(h);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    v *= axis_factor(static_cast<int>(i), theta[i], h);
    if (v == Complex{}) break;
  }
  return v;
}

Complex AmplitudeProfile::operator()(double theta, double h) const { return prefactor(h) * axis_factor(0, theta, h); }

AmplitudeProfile make_amplitude(AmplitudeKind kind, double delta, const AmplitudeParams& params) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw AmplitudeError("delta must lie in [0, 1], got " + std::to_string(delta));
  if (params.center.empty()) throw AmplitudeError("amplitude center must have at least one entry");
  for (double c : params.center)
    if (!std::isfinite(c) || std::abs(c) > 2.0) throw AmplitudeError("amplitude center entries must lie in [-2, 2]");

  AmplitudeProfile a;
  a.kind = kind;
  a.delta = delta;
  a.center = params.center;
  switch (kind) {
    case AmplitudeKind::fixed_bump:
      a.width_exponent = params.width_exponent.value_or(0.0);
      break;
    case AmplitudeKind::narrow_bump:
    case AmplitudeKind::fold_saturator_below:
      a.width_exponent = params.width_exponent.value_or(delta);
      break;
    case AmplitudeKind::modulated_bump:
      a.width_exponent = params.width_exponent.value_or(delta);
      a.modulation = params.modulation;
      break;
    case AmplitudeKind::fold_saturator_above:
      a.width_exponent = params.width_exponent.value_or((1.0 - delta) / 2.0);
      a.prefactor_exponent = (delta - 3.0) / 4.0;
      a.declared_order = (3.0 - delta) / 4.0;
      break;
    case AmplitudeKind::gaussian:
      a.width_exponent = params.width_exponent.value_or(delta);
      a.prefactor_exponent = -delta / 2.0;
      a.declared_order = delta / 2.0;
      break;
    case AmplitudeKind::custom:
      if (!params.profile) throw AmplitudeError("custom amplitude needs a profile function");
      if (!(params.profile_support > 0.0)) throw AmplitudeError("custom amplitude needs a positive support");
      a.width_exponent = params.width_exponent.value_or(0.0);
      a.profile = params.profile;
      a.profile_support = params.profile_support;
      a.declared_order = params.declared_order;
      break;
  }
  if (a.width_exponent < 0.0 || a.width_exponent > 1.0)
    throw AmplitudeError("width_exponent must lie in [0, 1], got " + std::to_string(a.width_exponent));
  return a;
}

// ---------------------------------------------------------------------------

double central_difference_sup(const std::function<Complex(double)>& f, double lo, double hi, double step, int alpha) {
  if (alpha < 0 || alpha > 4) throw std::invalid_argument("derivative order must lie in [0, 4]");
  constexpr int pad = 3;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  std::vector<Complex> v(n + 2 * pad);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f(lo + (static_cast<double>(i) - pad) * step);

  // Fourth-order central stencils.
  static constexpr double d1[] = {0.0, 1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12, 0.0};
  static constexpr double d2[] = {0.0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0.0};
  static constexpr double d3[] = {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8};
  static constexpr double d4[] = {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6};
  const double* w = alpha == 1 ? d1 : alpha == 2 ? d2 : alpha == 3 ? d3 : d4;
  const double norm = std::pow(step, alpha);

  double best = 0.0;
  for (std::size_t i = pad; i < n + pad; ++i) {
    if (alpha == 0) {
      best = std::max(best, std::abs(v[i]));
      continue;
    }
    Complex acc{};
    for (int j = 0; j < 7; ++j) acc += w[j] * v[i + static_cast<std::size_t>(j) - pad];
    best = std::max(best, std::abs(acc) / norm);
  }
  return best;
}

SymbolOrderReport check_symbol_order(const AmplitudeProfile& a, std::span<const double> h_grid, int alpha_max,
                                     double tolerance, int workers) {
  if (h_grid.size() < 6) throw std::invalid_argument("check_symbol_order: the h grid needs at least 6 points");
  if (alpha_max < 0 || alpha_max > 4) throw std::invalid_argument("check_symbol_order: alpha_max must lie in [0, 4]");
  for (std::size_t i = 1; i < h_grid.size(); ++i) {
    const double ratio = h_grid[i] / h_grid[i - 1];
    const double first = h_grid[1] / h_grid[0];
    if (!(h_grid[i] > 0.0 && h_grid[i] < 1.0) || std::abs(ratio / first - 1.0) > 1e-6)
      throw std::invalid_argument("check_symbol_order: the h grid must be geometric in (0, 1)");
  }

  const auto nh = h_grid.size();
  const auto na = static_cast<std::size_t>(alpha_max + 1);
  std::vector<double> sups(nh * na, 0.0);
  parallel_for(nh, workers, [&](std::size_t i) {
    const double h = h_grid[i];
    const double step = std::min(std::pow(h, a.delta), a.scale(h)) / 64.0;
    const double c = a.center_of(0);
    const double r = a.support_radius(h);
    const auto f = [&](double theta) { return a(theta, h); };
    for (std::size_t al = 0; al < na; ++al)
      sups[i * na + al] = central_difference_sup(f, c - r, c + r, step, static_cast<int>(al));
  });

  SymbolOrderReport report;
  report.kind = to_string(a.kind);
  report.delta = a.delta;
  report.declared_order = a.declared_order;
  report.tolerance = tolerance;
  for (std::size_t al = 0; al < na; ++al) {
    SymbolOrderRow row;
    row.alpha = static_cast<int>(al);
    row.expected_order = a.declared_order + a.delta * static_cast<double>(al);
    for (std::size_t i = 0; i < nh; ++i) {
      const double s = sups[i * na + al];
      if (s > 0.0 && std::isfinite(s)) {
        row.h.push_back(h_grid[i]);
        row.sup_derivative.push_back(s);
      }
    }
    if (row.h.size() < 3)
      throw std::runtime_error("check_symbol_order: fewer than 3 usable points for alpha = " + std::to_string(al));
    const auto fit = fit_power_law(row.h, row.sup_derivative);
    row.fitted_order = fit.slope;
    row.r_squared = fit.r_squared;
    for (std::size_t i = 0; i < row.h.size(); ++i) {
      const double pred = fit.intercept + fit.slope * (-std::log(row.h[i]));
      row.max_residual = std::max(row.max_residual, std::abs(std::log(row.sup_derivative[i]) - pred));
    }
    row.within_class = row.fitted_order <= row.expected_order + tolerance;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------

bool TorusRegularityReport::all_bounded() const {
  return std::all_of(moments.begin(), moments.end(), [](const auto& m) { return m.bounded; });
}

TorusRegularityReport check_delta_regularity_torus(std::span<const LatticeCoefficient> coeffs, double h, double delta,
                                                   std::span<const double> omega, double bound) {
  double mass = 0.0;
  for (const auto& c : coeffs) {
    if (c.alpha.size() != omega.size()) throw std::invalid_argument("lattice point and omega dimensions differ");
    mass += std::norm(c.value);
  }
  if (std::abs(mass - 1.0) > 1e-10)
    throw std::invalid_argument("coefficients are not l2-normalized (sum |a|^2 = " + std::to_string(mass) + ")");

  TorusRegularityReport report;
  report.h = h;
  report.delta = delta;
  report.bound = bound;
  const double hd = std::pow(h, delta);
  for (int order : {1, 2, 4, 8}) {
    double total = 0.0;
    for (const auto& c : coeffs) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < omega.size(); ++i) {
        const double d = static_cast<double>(c.alpha[i]) - omega[i] / h;
        d2 += d * d;
      }
      total += std::pow(hd * std::sqrt(d2), order) * std::norm(c.value);
    }
    report.moments.push_back({order, total, total <= bound * (1.0 + 1e-12)});
  }
  return report;
}

}  // namespace causticlab
