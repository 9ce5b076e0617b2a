#include "causticlab/amplitudes.hpp"
#include "causticlab/regression.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace causticlab;

TEST_CASE("bump shape") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(1.0) == 1.0);
  CHECK(bump(-1.0) == 1.0);
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(-2.5) == 0.0);
  CHECK(bump(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    // Even and non-increasing on [1, 2].
    CHECK(bump(a) == bump(-a));
    if (a < b) CHECK(bump(a) >= bump(b));
    CHECK(bump(a) + bump(3.0 - a) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("amplitude parameters") {
  const auto narrow = make_amplitude(AmplitudeKind::narrow_bump, 0.25);
  CHECK(narrow.width_exponent == 0.25);
  CHECK(narrow.scale(1e-4) == doctest::Approx(0.1));
  CHECK(narrow.support_radius(1e-4) == doctest::Approx(0.2));
  CHECK(narrow(0.0, 1e-4) == Complex(1.0, 0.0));
  CHECK(narrow(0.25, 1e-4) == Complex(0.0, 0.0));

  const auto above = make_amplitude(AmplitudeKind::fold_saturator_above, 0.5);
  CHECK(above.width_exponent == doctest::Approx(0.25));
  CHECK(above.prefactor(1e-4) == doctest::Approx(std::pow(1e-4, -0.625)));

  const auto g = make_amplitude(AmplitudeKind::gaussian, 0.4);
  CHECK(g.declared_order == doctest::Approx(0.2));

  AmplitudeParams two;
  two.center = {0.5, -0.5};
  const auto shifted = make_amplitude(AmplitudeKind::fixed_bump, 0.0, two);
  CHECK(shifted.center_of(0) == 0.5);
  CHECK(shifted.center_of(1) == -0.5);

  CHECK(to_string(parse_amplitude_kind("modulated_bump")) == "modulated_bump");
  CHECK_THROWS_AS(parse_amplitude_kind("square"), std::invalid_argument);
}

TEST_CASE("invalid amplitudes") {
  CHECK_THROWS_AS(make_amplitude(AmplitudeKind::narrow_bump, 1.5), AmplitudeError);
  CHECK_THROWS_AS(make_amplitude(AmplitudeKind::narrow_bump, -0.1), AmplitudeError);
  CHECK_THROWS_AS(make_amplitude(AmplitudeKind::custom, 0.0), AmplitudeError);
  AmplitudeParams p;
  p.width_exponent = 1.5;
  CHECK_THROWS_AS(make_amplitude(AmplitudeKind::fixed_bump, 0.0, p), AmplitudeError);
  AmplitudeParams none;
  none.center.clear();
  CHECK_THROWS_AS(make_amplitude(AmplitudeKind::fixed_bump, 0.0, none), AmplitudeError);
}

TEST_CASE("central differences on known functions") {
  const auto f = [](double t) { return Complex(std::sin(t), 0.0); };
  for (int alpha = 0; alpha <= 4; ++alpha)
    CHECK(central_difference_sup(f, 0.0, 2 * std::numbers::pi, 1e-2, alpha) == doctest::Approx(1.0).epsilon(1e-5));
  const auto cubic = [](double t) { return Complex(t * t * t, 0.0); };
  CHECK(central_difference_sup(cubic, -1.0, 1.0, 1e-2, 3) == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("symbol order calibration") {
  const auto hs = geometric_grid(1e-1, 1e-6, 11);
  const auto fixed = check_symbol_order(make_amplitude(AmplitudeKind::fixed_bump, 0.0), hs, 3);
  REQUIRE(fixed.rows.size() == 4);
  for (const auto& row : fixed.rows) {
    CHECK(std::abs(row.fitted_order) <= 0.05);
    CHECK(row.within_class);
  }
  for (double delta : {0.2, 0.4, 0.6}) {
    const auto g = check_symbol_order(make_amplitude(AmplitudeKind::gaussian, delta), hs, 2);
    for (const auto& row : g.rows) {
      CHECK(row.fitted_order == doctest::Approx(delta / 2.0 + delta * row.alpha).epsilon(0.05));
      CHECK(row.within_class);
    }
  }
  const auto narrow = check_symbol_order(make_amplitude(AmplitudeKind::narrow_bump, 0.5), hs, 3);
  for (const auto& row : narrow.rows) CHECK(row.fitted_order == doctest::Approx(0.5 * row.alpha).epsilon(0.05));

  // Declaring the wrong class is caught: a narrow bump is not in S^0_0.
  auto wrong = make_amplitude(AmplitudeKind::narrow_bump, 0.5);
  wrong.delta = 0.0;
  const auto flagged = check_symbol_order(wrong, hs, 2);
  CHECK_FALSE(flagged.rows[2].within_class);

  const std::vector<double> few{0.1, 0.01, 0.001};
  CHECK_THROWS_AS(check_symbol_order(make_amplitude(AmplitudeKind::fixed_bump, 0.0), few, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_symbol_order(make_amplitude(AmplitudeKind::fixed_bump, 0.0), hs, 5), std::invalid_argument);
}

TEST_CASE("torus regularity moments") {
  const double h = 1e-3;
  const std::vector<double> omega{0.6, 0.8};
  const std::vector<LatticeCoefficient> near{{{600, 800}, Complex(1.0, 0.0)}};
  const auto ok = check_delta_regularity_torus(near, h, 0.5, omega);
  CHECK(ok.all_bounded());
  REQUIRE(ok.moments.size() == 4);
  CHECK(ok.moments[0].moment == doctest::Approx(0.0).epsilon(1e-12));

  // |alpha - omega/h| = 100 with h^delta = 0.03: weight 3.2 > 1.
  const std::vector<LatticeCoefficient> far{{{660, 880}, Complex(1.0, 0.0)}};
  const auto bad = check_delta_regularity_torus(far, h, 0.5, omega);
  CHECK_FALSE(bad.all_bounded());

  const std::vector<LatticeCoefficient> unnormalized{{{600, 800}, Complex(2.0, 0.0)}};
  CHECK_THROWS(check_delta_regularity_torus(unnormalized, h, 0.5, omega));
}
