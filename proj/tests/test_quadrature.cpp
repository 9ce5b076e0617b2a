#include "causticlab/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace causticlab;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {1, 2, 5, 8, 24, 64}) {
    const auto& rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
  CHECK(&gauss_legendre(24) == &gauss_legendre(24));
}

TEST_CASE("adaptive integration") {
  const auto s = integrate_adaptive([](double t) { return std::sin(t); }, 0.0, std::numbers::pi);
  CHECK(s.converged);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
  const auto peak = integrate_adaptive([](double t) { return 1e-3 / (t * t + 1e-6); }, -1.0, 1.0);
  CHECK(peak.value == doctest::Approx(2.0 * std::atan(1e3)).epsilon(1e-11));
  const auto line = integrate_real_line([](double t) { return 1.0 / (1.0 + t * t); }, {0.0});
  CHECK(line.value == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  const auto gauss = integrate_real_line([](double t) { return std::exp(-t * t); }, {-1.0, 1.0});
  CHECK(gauss.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}
