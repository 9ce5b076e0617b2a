#include "causticlab/torus.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace causticlab;

namespace {

std::int64_t brute_ball(const std::vector<double>& c, double radius) {
  const int n = static_cast<int>(c.size());
  std::int64_t count = 0;
  LatticePoint a(static_cast<std::size_t>(n));
  std::vector<std::int64_t> lo(c.size());
  std::vector<std::int64_t> hi(c.size());
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(c[i] - radius)) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil(c[i] + radius)) + 1;
    a[i] = lo[i];
  }
  for (;;) {
    long double d = 0;
    for (int i = 0; i < n; ++i) d += (a[i] - static_cast<long double>(c[i])) * (a[i] - static_cast<long double>(c[i]));
    count += d < static_cast<long double>(radius) * radius;
    int i = 0;
    while (i < n && a[i] == hi[i]) a[i] = lo[i], ++i;
    if (i == n) return count;
    ++a[i];
  }
}

}  // namespace

TEST_CASE("ball counts") {
  const std::vector<double> origin{0.0, 0.0};
  CHECK(ball_count(origin, 2.6) == 21);
  CHECK(ball_count(origin, 1.0) == 1);  // open ball
  CHECK(ball_count(std::vector<double>{0.5}, 1.0) == 2);
  CHECK(ball_points(origin, 1.5).size() == 9);
  CHECK_THROWS(ball_count(origin, 2e4));
}

TEST_CASE("ball counts match brute force on random instances") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uc(-40.0, 40.0);
  std::uniform_real_distribution<double> ur(0.0, 12.0);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<double> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = uc(rng);
    if (trial % 5 == 0)
      for (auto& v : c) v = std::round(v);
    const double radius = trial % 7 == 0 ? std::round(ur(rng)) : ur(rng);
    CHECK(ball_count(c, radius) == brute_ball(c, radius));
  }
}

TEST_CASE("sphere caps") {
  CapQuery q;
  q.n = 2;
  q.omega = {0.6, 0.8};
  q.j = 25;
  q.mu = 1.0;
  q.cap_constant = 0.5;
  CHECK(sphere_cap_count(q) == 2);
  const auto pts = sphere_cap_points(q);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) CHECK(p[0] * p[0] + p[1] * p[1] == 25);
  q.cap_constant = 3.0;
  CHECK(sphere_cap_count(q) == 12);

  CHECK(sum_of_squares_count(2, 25) == 12);
  CHECK(sum_of_squares_count(3, 3) == 8);
  CHECK(sum_of_squares_count(4, 1) == 8);
  CHECK(sum_of_squares_count(2, 3) == 0);
  // r_4(n) = 8 sigma(n) for odd n.
  CHECK(sum_of_squares_count(4, 15) == 8 * (1 + 3 + 5 + 15));

  q.j = max_sphere_j(2) + 1;
  CHECK_THROWS(sphere_cap_count(q));
}

TEST_CASE("extremizers attain sqrt(count) at the origin") {
  CapQuery q;
  q.n = 2;
  q.omega = omega_preset(2, ExtremizerMode::sphere);
  q.j = 65 * 65;
  q.mu = 1.0;
  q.cap_constant = 1.0;
  const auto f = extremizer(q, ExtremizerMode::sphere);
  const auto count = static_cast<double>(f.support.size());
  REQUIRE(count > 1);
  CHECK(f.l2_norm() == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<double> zero{0.0, 0.0};
  CHECK(std::abs(eval_sum(f, zero)) == doctest::Approx(std::sqrt(count)).epsilon(1e-12));
  CHECK(grid_sup(f) == doctest::Approx(std::sqrt(count)).epsilon(1e-12));

  // Parseval on the sampling grid.
  CHECK(grid_mean_square(f) == doctest::Approx(1.0).epsilon(1e-9));

  const auto raw = extremizer(q, ExtremizerMode::sphere, Normalization::raw);
  CHECK(raw.l2_norm() == doctest::Approx(std::sqrt(count)).epsilon(1e-14));

  CapQuery empty = q;
  empty.j = 3;
  CHECK_THROWS_AS(extremizer(empty, ExtremizerMode::sphere), std::invalid_argument);
}

TEST_CASE("a single frequency has modulus one everywhere") {
  ExtremizerSum s;
  s.n = 2;
  s.support = {{3, -7}};
  s.coefficients = {Complex(1.0, 0.0)};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 6.3);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    CHECK(std::abs(eval_sum(s, x)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ball mode counts grow like h^{-n mu}") {
  std::vector<double> hs = geometric_grid(1e-2, 1e-6, 9);
  std::vector<double> counts;
  for (double h : hs) {
    CapQuery q;
    q.n = 2;
    q.omega = omega_preset(2, ExtremizerMode::ball);
    q.h = h;
    q.mu = 0.5;
    counts.push_back(static_cast<double>(ball_count(q)));
  }
  CHECK(fit_power_law(hs, counts).slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("dyadic blocks match the cap volume") {
  const auto s = dyadic_lower_bound_search(2, 1.0, 8, 12, {}, 1.0, 1);
  REQUIRE(s.blocks.size() == 5);
  for (const auto& b : s.blocks) CHECK(std::abs(b.block_sum - b.volume) / b.volume < 0.05);

  const auto again = dyadic_lower_bound_search(2, 1.0, 8, 12, {}, 1.0, 3);
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    CHECK(again.blocks[i].block_sum == s.blocks[i].block_sum);
    CHECK(again.blocks[i].best_j == s.blocks[i].best_j);
  }
}

TEST_CASE("sphere-mode ratio exponents respect the eigenfunction bound") {
  for (double delta : {0.5, 0.75}) {
    const auto s = dyadic_lower_bound_search(3, delta, 4, 14);
    CHECK(s.ratio_fit.slope <= delta + 0.1);
    CHECK(s.ratio_fit.slope >= delta - 0.5 - 0.15);
  }
}

TEST_CASE("presets") {
  for (int n = 1; n <= 4; ++n) {
    for (auto mode : {ExtremizerMode::ball, ExtremizerMode::sphere}) {
      const auto w = omega_preset(n, mode);
      double norm = 0.0;
      for (double v : w) norm += v * v;
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK(omega_preset(2, ExtremizerMode::sphere) == std::vector<double>{0.6, 0.8});
  CHECK(parse_extremizer_mode("sphere") == ExtremizerMode::sphere);
}
