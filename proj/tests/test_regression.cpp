#include "causticlab/regression.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace causticlab;

TEST_CASE("least squares recovers random lines exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng);
    const double b = u(rng);
    std::vector<double> x;
    std::vector<double> y;
    const int n = 2 + trial % 9;
    for (int i = 0; i < n; ++i) {
      x.push_back(u(rng) + 10.0 * i);
      y.push_back(a + b * x.back());
    }
    const auto f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(b).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(a).epsilon(1e-9));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(least_squares(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("flat data is a perfect fit") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{2, 2, 2, 2};
  const auto f = least_squares(x, y);
  CHECK(f.slope == 0.0);
  CHECK(f.r_squared == 1.0);
}

TEST_CASE("power-law fit") {
  const auto h = geometric_grid(1e-2, 1e-6, 9);
  std::vector<double> v;
  for (double t : h) v.push_back(3.0 * std::pow(t, -0.4));
  const auto f = fit_power_law(h, v);
  CHECK(f.slope == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("hinge fit locates the breakpoint") {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(i / 20.0);
    y.push_back(0.1 + 0.5 * x.back() + std::max(0.0, x.back() - 0.35) * -0.25);
  }
  const auto f = fit_hinge(x, y, 0.05, 0.95, 0.01);
  CHECK(f.breakpoint == doctest::Approx(0.35).epsilon(1e-9));
  CHECK(f.left_slope == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(f.right_slope == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(f.sse < 1e-20);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1.0 / 64, 1.0 / 16384, 9);
  CHECK(g.front() == 1.0 / 64);
  CHECK(g.back() == doctest::Approx(1.0 / 16384).epsilon(1e-15));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(0.5));
  const auto l = linear_grid(-1.0, 1.0, 5);
  CHECK(l == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}
