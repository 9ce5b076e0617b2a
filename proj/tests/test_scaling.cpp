#include "causticlab/regression.hpp"
#include "causticlab/scaling.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace causticlab;

namespace {

std::vector<SupRow> synthetic(double kappa, double c = 2.0) {
  std::vector<SupRow> rows;
  for (double h : default_h_grid(1)) rows.push_back({h, c * std::pow(h, -kappa), {0.0}, true});
  return rows;
}

double shell_norm(const HomogeneityProfile& hom, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) s += std::pow(std::abs(y[j]), 1.0 / (1.0 - to_double(hom.s[j])));
  return s;
}

}  // namespace

TEST_CASE("exponent fits on synthetic data") {
  const auto pass = fit_exponent(synthetic(1.0 / 6), Rational(1, 6), 0.03);
  CHECK(pass.verdict == Verdict::pass);
  CHECK(pass.slope == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(pass.reference_exact == Rational(1, 6));
  CHECK(pass.rows_used == 10);

  CHECK(fit_exponent(synthetic(0.25), Rational(1, 6), 0.03).verdict == Verdict::fail);

  // One wild point drags r^2 below 0.98: inconclusive, not fail.
  auto outlier = synthetic(1.0 / 6);
  outlier[4].sup_abs *= 50.0;
  CHECK(fit_exponent(outlier, 1.0 / 6, 0.03).verdict == Verdict::inconclusive);

  // Unconverged rows are dropped; fewer than 4 left is inconclusive.
  auto sparse = synthetic(1.0 / 6);
  for (std::size_t i = 0; i < 7; ++i) sparse[i].converged = false;
  const auto few = fit_exponent(sparse, 1.0 / 6, 0.03);
  CHECK(few.verdict == Verdict::inconclusive);
  CHECK(few.rows_used == 3);
}

TEST_CASE("fits are stable under subsampling the grid") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto rows = synthetic(0.25);
  for (auto& r : rows) r.sup_abs *= std::exp(noise(rng));
  const auto all = fit_exponent(rows, 0.25, 0.04);
  std::vector<SupRow> even;
  for (std::size_t i = 0; i < rows.size(); i += 2) even.push_back(rows[i]);
  const auto half = fit_exponent(even, 0.25, 0.04);
  CHECK(all.verdict == Verdict::pass);
  CHECK(std::abs(all.slope - half.slope) < 0.01);
}

TEST_CASE("shell points lie on the unit shell without duplicates") {
  for (const char* t : {"A2", "A3", "A4", "D4+", "E6"}) {
    const auto hom = build_phase(parse_singularity(t)).homogeneity();
    const auto pts = shell_points(hom, 4);
    CHECK(!pts.empty());
    std::set<std::vector<double>> seen(pts.begin(), pts.end());
    CHECK(seen.size() == pts.size());
    for (const auto& y : pts) CHECK(shell_norm(hom, y) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto a2 = shell_points(build_phase(make_A(1)).homogeneity(), 4);
  CHECK(a2 == std::vector<std::vector<double>>{{1.0}, {-1.0}});
}

TEST_CASE("shell subsampling is seeded") {
  const auto hom = build_phase(make_A(4)).homogeneity();
  const auto all = shell_points(hom, 4);
  REQUIRE(all.size() > 20);
  const auto a = sample_shell(hom, 4, 10, 42);
  const auto b = sample_shell(hom, 4, 10, 42);
  const auto c = sample_shell(hom, 4, 10, 43);
  CHECK(a.size() == 10);
  CHECK(a == b);
  CHECK(a != c);
  const std::set<std::vector<double>> pool(all.begin(), all.end());
  for (const auto& y : a) CHECK(pool.count(y) == 1);
  CHECK(sample_shell(hom, 4, 100000, 1) == all);
}

TEST_CASE("shell coordinates") {
  const auto hom = build_phase(make_A(2)).homogeneity();  // s = (1/4, 1/2)
  const std::vector<double> y{0.5, -0.25};
  const auto x = shell_to_x(hom, y, 0.01);
  CHECK(x[0] == doctest::Approx(0.5 * std::pow(0.01, 0.75)));
  CHECK(x[1] == doctest::Approx(-0.25 * std::pow(0.01, 0.5)));
}

TEST_CASE("direct and rescaled shell evaluations agree") {
  std::mt19937_64 rng(17);
  for (const char* t : {"A2", "A3"}) {
    const auto phase = build_phase(parse_singularity(t));
    ScanPlan plan(phase, make_amplitude(AmplitudeKind::fixed_bump, 0.0));
    plan.h_grid = default_h_grid(1);
    const auto pts = shell_points(phase.homogeneity(), 3);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int i = 0; i < 4; ++i) {
      const auto& y = pts[pick(rng)];
      const auto c = shell_consistency(plan, 1.0 / 512, 1.0 / 16, y);
      CHECK(c.relative_difference < 1e-6);
      CHECK(c.direct > 0.0);
    }
  }
}

TEST_CASE("scan plan validation") {
  ScanPlan plan(build_phase(make_A(1)), make_amplitude(AmplitudeKind::fixed_bump, 0.0));
  plan.h_grid = {0.1, 0.05, 0.02, 0.01};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan.h_grid = {0.1, 0.05, 0.06, 0.01, 0.005};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan.h_grid = {1.5, 0.5, 0.05, 0.01, 0.005};
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan.h_grid = default_h_grid(1);
  plan.points_per_shell = 0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}

TEST_CASE("A2 sup-norm scan") {
  ScanPlan plan(build_phase(make_A(1)), make_amplitude(AmplitudeKind::fixed_bump, 0.0));
  plan.h_grid = default_h_grid(1);
  plan.x_strategy = XStrategy::omega_shells;
  const auto r = supnorm_scan(plan);
  REQUIRE(r.sup.size() == 10);
  const auto fit = fit_exponent(r.sup, caustic_order(make_A(1)), kTolerance1D);
  CHECK(fit.verdict == Verdict::pass);
  CHECK(fit.r_squared >= 0.98);

  plan.workers = 3;
  const auto again = supnorm_scan(plan);
  REQUIRE(again.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(again.rows[i].abs_I == r.rows[i].abs_I);
}

TEST_CASE("threshold sweep marks deltas beyond the threshold") {
  ScanPlan plan(build_phase(make_A(1)), make_amplitude(AmplitudeKind::fixed_bump, 0.0));
  plan.h_grid = geometric_grid(1.0 / 64, 1.0 / 2048, 6);
  const std::vector<double> deltas{0.2, 0.5};
  const auto sweep = threshold_sweep(make_A(1), deltas, plan, 0.05);
  REQUIRE(sweep.size() == 2);
  CHECK_FALSE(sweep[0].exploratory);
  CHECK(sweep[0].fit.verdict == Verdict::pass);
  CHECK(sweep[1].exploratory);
  // Beyond threshold the fold comparison is against (1 + delta)/4.
  CHECK(sweep[1].fit.reference == doctest::Approx(0.375));
}

TEST_CASE("x strategies parse") {
  for (auto s : {XStrategy::origin_only, XStrategy::omega_shells, XStrategy::full_grid})
    CHECK(parse_x_strategy(to_string(s)) == s);
  CHECK_THROWS(parse_x_strategy("spiral"));
}
