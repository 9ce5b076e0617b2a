#include "causticlab/oscint.hpp"

#include "causticlab/quadrature.hpp"
#include "phase_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace causticlab {

std::int64_t default_budget(int k) { return k == 1 ? (std::int64_t{1} << 24) : (std::int64_t{1} << 33); }

IntegralSpec::IntegralSpec(PhaseFunction phase_, AmplitudeProfile amplitude_, std::vector<double> x_, double h_)
    : phase(std::move(phase_)), amplitude(std::move(amplitude_)), x(std::move(x_)), h(h_) {}

void IntegralSpec::validate() const {
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("h must lie in (0, 1]");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel_tol must lie in (0, 1)");
  if (phase.k() < 1 || phase.k() > 2) throw std::invalid_argument("only k = 1 and k = 2 are supported");
  if (static_cast<int>(x.size()) != phase.k0())
    throw std::invalid_argument("x has " + std::to_string(x.size()) + " entries, the phase needs " +
                                std::to_string(phase.k0()));
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("x must be finite");
  if (quadrature.order < 1 || quadrature.order > 64) throw std::invalid_argument("quadrature order must lie in [1, 64]");
  if (!(quadrature.periods_per_panel > 0.0)) throw std::invalid_argument("periods_per_panel must be positive");
  if (quadrature.min_panels < 1) throw std::invalid_argument("min_panels must be positive");
  if (quadrature.budget < 0) throw std::invalid_argument("budget must be non-negative");
  if (quadrature.max_levels < 1) throw std::invalid_argument("max_levels must be at least 1");
}

namespace {

struct BudgetExceeded {};

struct PassResult {
  Complex sum;
  double mass = 0.0;
  std::int64_t panels = 0;
  std::int64_t evaluations = 0;
};

// Bound on |d/d eta arg a| over [lo, hi] in the scaled variable, for
// amplitudes that oscillate on their own.
double amplitude_frequency(const AmplitudeProfile& a, double theta_lo, double theta_hi, double scale, double h) {
  switch (a.kind) {
    case AmplitudeKind::fold_saturator_above: {
      const double m = std::max(theta_lo * theta_lo, theta_hi * theta_hi);
      return scale * m / h;
    }
    case AmplitudeKind::modulated_bump: return scale * std::abs(a.modulation) / a.scale(h);
    default: return 0.0;
  }
}

class Integrator {
 public:
  Integrator(const IntegralSpec& spec, const ThetaPolynomial& poly, double inv_h, std::array<double, 2> scale,
             std::array<double, 2> lo, std::array<double, 2> hi)
      : spec_(spec),
        amp_(spec.amplitude),
        poly_(poly),
        rule_(gauss_legendre(spec.quadrature.order)),
        inv_h_(inv_h),
        scale_(scale),
        lo_(lo),
        hi_(hi),
        k_(spec.phase.k()) {
    if (k_ == 1) {
      c1_.assign(static_cast<std::size_t>(poly.degree1() + 1), 0.0);
      poly.restrict_theta2(0.0, c1_);
    }
    row_.assign(static_cast<std::size_t>(poly.degree1() + 1), 0.0);
    const auto n = rule_.nodes.size();
    t1_.assign(n, 0.0);
    wr_.assign(n, 0.0);
    wi_.assign(n, 0.0);
    amp1_.assign(n, Complex{});
  }

  PassResult run(double periods, int level, std::int64_t allowance) {
    periods_ = periods;
    allowance_ = allowance;
    result_ = {};
    const double refine = std::ldexp(1.0, level);
    for (int i = 0; i < k_; ++i)
      max_width_[i] = (hi_[i] - lo_[i]) / (spec_.quadrature.min_panels * refine);
    if (k_ == 1)
      result_.sum = panel1(lo_[0], hi_[0], 0);
    else
      result_.sum = panel2(lo_[0], hi_[0], lo_[1], hi_[1], 0);
    return result_;
  }

 private:
  static constexpr int kMaxDepth = 60;

  void charge(std::int64_t n) {
    result_.evaluations += n;
    ++result_.panels;
    if (result_.evaluations > allowance_) throw BudgetExceeded{};
  }

  // p, p', p'' of the 1D phase polynomial.
  std::array<double, 3> horner1(double t) const {
    double p = 0.0;
    double d = 0.0;
    double dd = 0.0;
    for (auto i = c1_.size(); i-- > 0;) {
      dd = dd * t + 2.0 * d;
      d = d * t + p;
      p = p * t + c1_[i];
    }
    return {p, d, dd};
  }

  Complex panel1(double a, double b, int depth) {
    const double w = b - a;
    const double m = 0.5 * (a + b);
    bool split = w > max_width_[0] * (1.0 + 1e-12);
    if (!split) {
      const auto ha = horner1(a);
      const auto hb = horner1(b);
      const auto hm = horner1(m);
      double omega = std::max({std::abs(ha[1]), std::abs(hb[1]), std::abs(hm[1])}) + 0.25 * std::abs(hm[2]) * w;
      omega *= inv_h_;
      omega += amplitude_frequency(amp_, scale_[0] * a, scale_[0] * b, scale_[0], spec_.h);
      split = omega * w > 2.0 * std::numbers::pi * periods_;
    }
    if (split && depth < kMaxDepth) return panel1(a, m, depth + 1) + panel1(m, b, depth + 1);

    const auto n = rule_.nodes.size();
    charge(static_cast<std::int64_t>(n));
    const double hw = 0.5 * w;
    for (std::size_t i = 0; i < n; ++i) {
      t1_[i] = m + hw * rule_.nodes[i];
      const Complex av = rule_.weights[i] * hw * amp_.axis_factor(0, scale_[0] * t1_[i], spec_.h);
      wr_[i] = av.real();
      wi_[i] = av.imag();
      result_.mass += std::abs(av);
    }
    double re = 0.0;
    double im = 0.0;
    detail::phase_row(t1_.data(), wr_.data(), wi_.data(), static_cast<int>(n), c1_.data(),
                      static_cast<int>(c1_.size()) - 1, inv_h_, re, im);
    return {re, im};
  }

  Complex panel2(double a1, double b1, double a2, double b2, int depth) {
    const double w1 = b1 - a1;
    const double w2 = b2 - a2;
    const double m1 = 0.5 * (a1 + b1);
    const double m2 = 0.5 * (a2 + b2);
    bool split1 = w1 > max_width_[0] * (1.0 + 1e-12);
    bool split2 = w2 > max_width_[1] * (1.0 + 1e-12);
    if (!split1 || !split2) {
      double g1 = 0.0;
      double g2 = 0.0;
      for (auto [t1, t2] : {std::pair{a1, a2}, {a1, b2}, {b1, a2}, {b1, b2}, {m1, m2}}) {
        const auto g = poly_.gradient(t1, t2);
        g1 = std::max(g1, std::abs(g[0]));
        g2 = std::max(g2, std::abs(g[1]));
      }
      const auto hs = poly_.hessian(m1, m2);
      const double om1 = (g1 + 0.25 * (std::abs(hs[0]) * w1 + std::abs(hs[1]) * w2)) * inv_h_ +
                         amplitude_frequency(amp_, scale_[0] * a1, scale_[0] * b1, scale_[0], spec_.h);
      const double om2 = (g2 + 0.25 * (std::abs(hs[1]) * w1 + std::abs(hs[2]) * w2)) * inv_h_ +
                         amplitude_frequency(amp_, scale_[1] * a2, scale_[1] * b2, scale_[1], spec_.h);
      const double limit = 2.0 * std::numbers::pi * periods_;
      split1 = split1 || om1 * w1 > limit;
      split2 = split2 || om2 * w2 > limit;
    }
    if (depth < kMaxDepth) {
      if (split1 && split2)
        return (panel2(a1, m1, a2, m2, depth + 1) + panel2(m1, b1, a2, m2, depth + 1)) +
               (panel2(a1, m1, m2, b2, depth + 1) + panel2(m1, b1, m2, b2, depth + 1));
      if (split1) return panel2(a1, m1, a2, b2, depth + 1) + panel2(m1, b1, a2, b2, depth + 1);
      if (split2) return panel2(a1, b1, a2, m2, depth + 1) + panel2(a1, b1, m2, b2, depth + 1);
    }

    const auto n = rule_.nodes.size();
    charge(static_cast<std::int64_t>(n * n));
    const double hw1 = 0.5 * w1;
    const double hw2 = 0.5 * w2;
    // Axis-1 amplitude values and weights are shared by every row.
    double row_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t1_[i] = m1 + hw1 * rule_.nodes[i];
      amp1_[i] = rule_.weights[i] * hw1 * amp_.axis_factor(0, scale_[0] * t1_[i], spec_.h);
      row_mass += std::abs(amp1_[i]);
    }
    if (row_mass == 0.0) return {};
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double t2 = m2 + hw2 * rule_.nodes[j];
      const Complex a2v = rule_.weights[j] * hw2 * amp_.axis_factor(1, scale_[1] * t2, spec_.h);
      if (a2v == Complex{}) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Complex v = a2v * amp1_[i];
        wr_[i] = v.real();
        wi_[i] = v.imag();
      }
      poly_.restrict_theta2(t2, row_);
      double re = 0.0;
      double im = 0.0;
      detail::phase_row(t1_.data(), wr_.data(), wi_.data(), static_cast<int>(n), row_.data(),
                        static_cast<int>(row_.size()) - 1, inv_h_, re, im);
      acc += Complex{re, im};
      result_.mass += std::abs(a2v) * row_mass;
    }
    return acc;
  }

  const IntegralSpec& spec_;
  const AmplitudeProfile& amp_;
  const ThetaPolynomial& poly_;
  const GaussLegendre& rule_;
  double inv_h_;
  std::array<double, 2> scale_;
  std::array<double, 2> lo_;
  std::array<double, 2> hi_;
  int k_;
  std::vector<double> c1_;
  std::vector<double> row_;
  std::vector<Complex> amp1_;
  std::vector<double> t1_;
  std::vector<double> wr_;
  std::vector<double> wi_;
  double periods_ = 1.0;
  std::int64_t allowance_ = 0;
  std::array<double, 2> max_width_{};
  PassResult result_;
};

// Integral over eta of a(lambda^r eta) e^{i (lambda/h) phi(y, eta)}, together
// with the Jacobian lambda^{|r|}.
IntegralResult integrate_scaled(const IntegralSpec& spec, double lambda) {
  spec.validate();
  if (!(lambda >= spec.h && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [h, 1]");
  const auto& hom = spec.phase.homogeneity();
  const int k = spec.phase.k();

  std::vector<double> y(spec.x.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    y[j] = spec.x[j] * std::pow(lambda, to_double(hom.s[j]) - 1.0);
  const auto poly = spec.phase.at(y);

  std::array<double, 2> scale{1.0, 1.0};
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
  double jacobian = 1.0;
  const double radius = spec.amplitude.support_radius(spec.h);
  for (int i = 0; i < k; ++i) {
    scale[i] = std::pow(lambda, to_double(hom.r[static_cast<std::size_t>(i)]));
    jacobian *= scale[i];
    const double c = spec.amplitude.center_of(i);
    lo[i] = (c - radius) / scale[i];
    hi[i] = (c + radius) / scale[i];
  }

  Integrator integ(spec, poly, lambda / spec.h, scale, lo, hi);
  const auto& q = spec.quadrature;
  const std::int64_t budget = q.budget > 0 ? q.budget : default_budget(k);
  const std::int64_t growth = std::int64_t{1} << k;

  IntegralResult out;
  out.value = Complex{std::nan(""), std::nan("")};
  out.est_error = std::numeric_limits<double>::infinity();
  std::int64_t used = 0;
  std::int64_t last = 0;
  for (int level = 0; level < q.max_levels; ++level) {
    // Halving the panel length multiplies the cost by about 2^k.
    if (level > 0 && used + growth * last > budget) break;
    PassResult pass;
    try {
      pass = integ.run(q.periods_per_panel / std::ldexp(1.0, level), level, budget - used);
    } catch (const BudgetExceeded&) {
      break;
    }
    used += pass.evaluations;
    last = pass.evaluations;
    if (level > 0) {
      const double diff = std::abs(pass.sum - out.value);
      out.est_error = diff;
      out.converged = diff <= spec.rel_tol * std::abs(pass.sum) || diff <= 1e-13 * pass.mass;
    } else {
      out.est_error = std::abs(pass.sum);
    }
    out.value = pass.sum;
    out.levels = level + 1;
    out.panels_used = pass.panels;
    if (out.converged) break;
  }
  out.evaluations = used;

  out.value *= jacobian * spec.amplitude.prefactor(spec.h);
  out.est_error *= jacobian * std::abs(spec.amplitude.prefactor(spec.h));
  out.abs_value = std::abs(out.value);
  return out;
}

}  // namespace

IntegralResult rescaled_kernel(const IntegralSpec& spec, double lambda) { return integrate_scaled(spec, lambda); }

IntegralResult evaluate_rescaled(const IntegralSpec& spec, double lambda) {
  auto out = integrate_scaled(spec, lambda);
  if (spec.includes_prefactor) {
    const double pre = std::pow(spec.h, -0.5 * spec.phase.k());
    out.value *= pre;
    out.est_error *= pre;
    out.abs_value = std::abs(out.value);
  }
  return out;
}

IntegralResult evaluate(const IntegralSpec& spec) { return evaluate_rescaled(spec, 1.0); }

// ---------------------------------------------------------------------------

double m_alpha(double alpha) { return std::numbers::pi * std::imag(std::pow(Complex{alpha, -1.0}, -0.5)); }

double weighted_cauchy(double x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return (0.5 * std::numbers::pi + std::atan(x / eps)) / eps;
}

double cauchy_square(double x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return std::pow(eps, -1.5) * m_alpha(-x / eps);
}

double closed_form_oracle(const std::string& name, std::span<const double> params) {
  const auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument(name + " takes " + std::to_string(n) + " parameters, got " +
                                  std::to_string(params.size()));
  };
  if (name == "M_alpha") {
    need(1);
    return m_alpha(params[0]);
  }
  if (name == "weighted_cauchy") {
    need(2);
    return weighted_cauchy(params[0], params[1]);
  }
  if (name == "cauchy_square") {
    need(2);
    return cauchy_square(params[0], params[1]);
  }
  throw std::invalid_argument("unknown closed form '" + name + "'");
}

namespace {

std::vector<double> cauchy_breakpoints(double x, double eps) {
  std::vector<double> b{0.0};
  if (x > 0.0) {
    const double r = std::sqrt(x);
    // The peak at theta = +-sqrt(x) has width about eps / (2 sqrt(x)).
    const double half = std::min(0.5 * r, eps / (2.0 * r));
    for (double s : {-1.0, 1.0}) {
      b.push_back(s * r);
      b.push_back(s * (r - half));
      b.push_back(s * (r + half));
    }
  }
  return b;
}

}  // namespace

double integrate_cauchy_square(double x, double eps, double rel_tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const auto f = [=](double t) {
    const double d = x - t * t;
    return 1.0 / (d * d + eps * eps);
  };
  return integrate_real_line(f, cauchy_breakpoints(x, eps), rel_tol, 100000).value;
}

double integrate_weighted_cauchy(double x, double eps, double rel_tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const auto f = [=](double t) {
    const double d = x - t * t;
    return std::abs(t) / (d * d + eps * eps);
  };
  return integrate_real_line(f, cauchy_breakpoints(x, eps), rel_tol, 100000).value;
}

}  // namespace causticlab
