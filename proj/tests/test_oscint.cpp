#include "causticlab/oscint.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace causticlab;

namespace {

constexpr double kPi = std::numbers::pi;

IntegralSpec bare(const char* type, std::vector<double> x, double h, double rel_tol = 1e-10) {
  IntegralSpec s(build_phase(parse_singularity(type)), make_amplitude(AmplitudeKind::fixed_bump, 0.0), std::move(x), h);
  s.includes_prefactor = false;
  s.rel_tol = rel_tol;
  return s;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// The cutoff is 1 near every stationary point, so replacing it by 1 changes
// the integrals below by O(h^infinity).

TEST_CASE("Fresnel integral") {
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const auto r = evaluate(bare("A1", {}, h));
    CHECK(r.converged);
    CHECK(rel(r.value, std::sqrt(kPi * h) * std::polar(1.0, kPi / 4)) < 1e-6);
  }
}

TEST_CASE("cubic and quartic integrals at the origin") {
  const double h = 1e-3;
  // \int e^{i theta^3 / h} = 2 h^{1/3} Gamma(4/3) cos(pi/6)
  const auto a2 = evaluate(bare("A2", {0.0}, h));
  CHECK(rel(a2.value, 2.0 * std::cbrt(h) * std::tgamma(4.0 / 3.0) * std::cos(kPi / 6)) < 1e-7);
  // \int e^{i theta^4 / h} = 2 h^{1/4} Gamma(5/4) e^{i pi / 8}
  const auto a3 = evaluate(bare("A3", {0.0, 0.0}, h));
  CHECK(rel(a3.value, 2.0 * std::pow(h, 0.25) * std::tgamma(1.25) * std::polar(1.0, kPi / 8)) < 1e-7);
}

TEST_CASE("fold integral against the Airy function") {
  // \int e^{i(x theta + theta^3)/h} d theta = 2 pi (h/3)^{1/3} Ai(x 3^{-1/3} h^{-2/3})
  const double h = 1e-3;
  for (double x : {-0.5, -0.1, -0.01, 0.0, 0.02}) {
    const auto r = evaluate(bare("A2", {x}, h));
    const double expected = 2 * kPi * std::cbrt(h / 3) * boost::math::airy_ai(x / std::cbrt(3.0) / std::pow(h, 2.0 / 3));
    CHECK(std::abs(r.value - expected) <= 1e-7 * std::cbrt(h));
    CHECK(std::abs(r.value.imag()) <= 1e-9 * std::abs(r.value) + 1e-12);
  }
}

TEST_CASE("odd phases with even real amplitudes give real integrals") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-0.8, 0.8);
  std::uniform_real_distribution<double> uh(std::log(1e-3), std::log(1e-1));
  for (int i = 0; i < 10; ++i) {
    const double h = std::exp(uh(rng));
    const auto r = evaluate(bare("A2", {ux(rng)}, h));
    CHECK(std::abs(r.value.imag()) <= 1e-8 * std::max(1.0, std::abs(r.value)));
  }
}

TEST_CASE("two-dimensional integrals scale exactly at the origin") {
  // theta -> lambda^r eta turns I(0; h) into h^{|r|} I(0; 1) up to O(h^infinity).
  for (const char* t : {"D4+", "D4-"}) {
    const auto a = evaluate(bare(t, {0.0, 0.0, 0.0}, 1.0 / 64, 1e-9));
    const auto b = evaluate(bare(t, {0.0, 0.0, 0.0}, 1.0 / 256, 1e-9));
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(rel(b.value, a.value * std::pow(0.25, 2.0 / 3.0)) < 1e-6);
  }
}

TEST_CASE("zero amplitude gives zero") {
  AmplitudeParams p;
  p.profile = [](double, double) { return Complex(0.0, 0.0); };
  IntegralSpec s(build_phase(make_A(1)), make_amplitude(AmplitudeKind::custom, 0.0, p), {0.1}, 1e-3);
  const auto r = evaluate(s);
  CHECK(r.value == Complex(0.0, 0.0));
  CHECK(r.converged);
}

TEST_CASE("prefactor and rescaling") {
  IntegralSpec s(build_phase(make_A(2)), make_amplitude(AmplitudeKind::fixed_bump, 0.0), {0.01, -0.02}, 1e-3);
  const auto with = evaluate(s);
  s.includes_prefactor = false;
  const auto without = evaluate(s);
  CHECK(rel(with.value, without.value / std::sqrt(1e-3)) < 1e-12);

  s.includes_prefactor = true;
  for (double lambda : {1.0, 0.5, 0.05}) {
    const auto r = evaluate_rescaled(s, lambda);
    CHECK(rel(r.value, with.value) < 1e-7);
  }
  CHECK(evaluate_rescaled(s, 1.0).value == with.value);
  CHECK_THROWS_AS(evaluate_rescaled(s, 2.0), std::invalid_argument);
}

TEST_CASE("narrow amplitudes and the D4 kernel") {
  IntegralSpec s(build_phase(parse_singularity("D4-")), make_amplitude(AmplitudeKind::narrow_bump, 0.2),
                 {0.05, 0.0, -0.03}, 1.0 / 32);
  s.rel_tol = 1e-9;
  const auto r = evaluate(s);
  CHECK(r.converged);
  CHECK(rel(evaluate_rescaled(s, 0.3).value, r.value) < 1e-7);
}

TEST_CASE("invalid specs") {
  auto s = bare("A2", {0.0}, 1e-3);
  s.h = 0.0;
  CHECK_THROWS_AS(evaluate(s), std::invalid_argument);
  s = bare("A2", {0.0, 1.0}, 1e-3);
  CHECK_THROWS_AS(evaluate(s), std::invalid_argument);
  s = bare("A2", {0.0}, 1e-3);
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(evaluate(s), std::invalid_argument);
}

TEST_CASE("an exhausted budget is reported, not hidden") {
  auto s = bare("A2", {0.0}, 1e-4);
  s.quadrature.budget = 1000;
  const auto r = evaluate(s);
  CHECK_FALSE(r.converged);
}

TEST_CASE("closed forms") {
  CHECK(m_alpha(0.0) == doctest::Approx(kPi * std::cos(kPi / 4)).epsilon(1e-14));
  // Reference values by independent quadrature.
  CHECK(m_alpha(1.0) == doctest::Approx(1.0109554884104).epsilon(1e-12));
  CHECK(m_alpha(-1.0) == doctest::Approx(2.4406624510759).epsilon(1e-12));
  CHECK(weighted_cauchy(0.0, 0.1) == doctest::Approx(15.70796).epsilon(1e-6));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  std::uniform_real_distribution<double> ue(std::log(1e-3), 0.0);
  for (int i = 0; i < 20; ++i) {
    const double eps = std::exp(ue(rng));
    const double alpha = ua(rng);
    CHECK(cauchy_square(-eps * alpha, eps) == doctest::Approx(std::pow(eps, -1.5) * m_alpha(alpha)).epsilon(1e-13));
    const double x = ua(rng);
    CHECK(integrate_cauchy_square(x, eps) == doctest::Approx(cauchy_square(x, eps)).epsilon(1e-8));
    CHECK(integrate_weighted_cauchy(x, eps) == doctest::Approx(weighted_cauchy(x, eps)).epsilon(1e-8));
  }
  const std::vector<double> p{0.0, 0.1};
  CHECK(closed_form_oracle("weighted_cauchy", p) == weighted_cauchy(0.0, 0.1));
  CHECK_THROWS(closed_form_oracle("unknown", p));
}
