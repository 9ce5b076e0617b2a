#include "causticlab/catalog.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace causticlab;

namespace {

Rational r(std::int64_t p, std::int64_t q) { return Rational(p, q); }

/// Milnor number: A_{m+1}, D_{m+1} -> m + 1; E_n -> n.
int milnor(const SingularityType& t) { return t.family == Family::E ? t.index : t.index + 1; }

}  // namespace

TEST_CASE("table entries for the common types") {
  CHECK(caustic_order(make_A(0)) == r(0, 1));
  CHECK(threshold(make_A(0)) == r(1, 1));
  CHECK(caustic_order(make_A(1)) == r(1, 6));
  CHECK(threshold(make_A(1)) == r(1, 3));
  CHECK(caustic_order(make_A(2)) == r(1, 4));
  CHECK(caustic_order(parse_singularity("D4+")) == r(1, 3));
  CHECK(threshold(parse_singularity("D4+")) == r(1, 3));
  CHECK(threshold(parse_singularity("D4-")) == r(1, 4));
  CHECK(caustic_order(make_E(6)) == r(5, 12));
  CHECK(threshold(make_E(6)) == r(1, 6));
  CHECK(caustic_order(make_E(7)) == r(4, 9));
  CHECK(caustic_order(make_E(8)) == r(7, 15));
  CHECK(threshold(make_E(8)) == r(1, 8));
}

TEST_CASE("order formulas hold across the series") {
  for (int m = 1; m <= 7; ++m) {
    CHECK(caustic_order(make_A(m)) == r(1, 2) - r(1, m + 2));
    CHECK(threshold(make_A(m)) == r(1, m + 2));
  }
  for (int m = 3; m <= 7; ++m) {
    const auto kappa = r(1, 2) - r(1, 2 * m);
    if (m % 2 == 0) {
      CHECK(caustic_order(make_D(m)) == kappa);
      CHECK(threshold(make_D(m)) == r(1, m + 1));
    } else {
      CHECK(caustic_order(make_D(m, Sign::minus)) == kappa);
      CHECK(caustic_order(make_D(m, Sign::plus)) == kappa);
      CHECK(threshold(make_D(m, Sign::minus)) == r(1, m + 1));
      CHECK(threshold(make_D(m, Sign::plus)) == r(1, m));
    }
  }
}

TEST_CASE("kappa equals k/2 minus the phase weights") {
  for (const auto& t : catalog_types()) {
    const auto hom = build_phase(t).homogeneity();
    CHECK(caustic_order(t) == Rational(hom.k, 2) - hom.r_sum());
    CHECK(static_cast<int>(hom.r.size()) == hom.k);
    CHECK(static_cast<int>(hom.s.size()) == hom.k0);
  }
}

TEST_CASE("labels round-trip and invalid types are rejected") {
  for (const auto& t : catalog_types()) CHECK(parse_singularity(t.label()) == t);
  CHECK(parse_singularity("A3-").sign == Sign::minus);
  CHECK(parse_singularity("E6-").label() == "E6-");
  CHECK_THROWS_AS(parse_singularity("Z3"), CatalogError);
  CHECK_THROWS_AS(parse_singularity("E9"), CatalogError);
  CHECK_THROWS_AS(parse_singularity("D3"), CatalogError);
  CHECK_THROWS_AS(make_E(7, Sign::minus), CatalogError);
  CHECK_THROWS_AS(make_A(-1), CatalogError);
}

TEST_CASE("quasi-homogeneity on random samples") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> ul(-2.0, 2.0);
  for (const auto& t : catalog_types()) {
    const auto phase = build_phase(t);
    const auto& hom = phase.homogeneity();
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x(static_cast<std::size_t>(hom.k0));
      std::vector<double> th(static_cast<std::size_t>(hom.k));
      for (auto& v : x) v = u(rng);
      for (auto& v : th) v = u(rng);
      const double lambda = std::exp(ul(rng));
      auto xs = x;
      auto ts = th;
      for (std::size_t j = 0; j < xs.size(); ++j) xs[j] *= std::pow(lambda, 1.0 - to_double(hom.s[j]));
      for (std::size_t j = 0; j < ts.size(); ++j) ts[j] *= std::pow(lambda, to_double(hom.r[j]));
      const double lhs = phase(xs, ts);
      const double rhs = lambda * phase(x, th);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)) * lambda);
    }
  }
}

TEST_CASE("theta polynomial derivatives match finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (const auto& t : catalog_types()) {
    const auto phase = build_phase(t);
    std::vector<double> x(static_cast<std::size_t>(phase.k0()));
    for (auto& v : x) v = u(rng);
    const auto p = phase.at(x);
    const double a = u(rng);
    const double b = phase.k() == 2 ? u(rng) : 0.0;
    const double e = 1e-5;
    const auto g = p.gradient(a, b);
    CHECK(g[0] == doctest::Approx((p.value(a + e, b) - p.value(a - e, b)) / (2 * e)).epsilon(1e-6));
    const auto hs = p.hessian(a, b);
    CHECK(hs[0] == doctest::Approx((p.gradient(a + e, b)[0] - p.gradient(a - e, b)[0]) / (2 * e)).epsilon(1e-6));
    if (phase.k() == 2) {
      CHECK(g[1] == doctest::Approx((p.value(a, b + e) - p.value(a, b - e)) / (2 * e)).epsilon(1e-6));
      CHECK(hs[1] == doctest::Approx((p.gradient(a, b + e)[0] - p.gradient(a, b - e)[0]) / (2 * e)).epsilon(1e-6));
      CHECK(hs[2] == doctest::Approx((p.gradient(a, b + e)[1] - p.gradient(a, b - e)[1]) / (2 * e)).epsilon(1e-6));
      // Freezing theta2 gives a polynomial in theta1 with the same values.
      std::vector<double> c(static_cast<std::size_t>(p.degree1() + 1));
      p.restrict_theta2(b, c);
      double v = 0.0;
      for (int i = p.degree1(); i >= 0; --i) v = v * a + c[static_cast<std::size_t>(i)];
      CHECK(v == doctest::Approx(p.value(a, b)).epsilon(1e-12));
    }
    // The phase evaluated directly agrees with the frozen polynomial.
    std::vector<double> th{a};
    if (phase.k() == 2) th.push_back(b);
    CHECK(phase(x, th) == doctest::Approx(p.value(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("subordination diagram") {
  const auto dag = SubordinationDag::standard();
  CHECK(dag.is_acyclic());
  CHECK(dag.nodes().size() == 19);

  const std::set<std::pair<std::string, std::string>> fixture = {
      {"A2", "A1"},   {"A3", "A2"},   {"A4", "A3"},   {"A5", "A4"},   {"A6", "A5"},   {"A7", "A6"},
      {"A8", "A7"},   {"D4-", "A3"},  {"D4+", "A3"},  {"D5", "D4-"},  {"D5", "D4+"},  {"D5", "A4"},
      {"D6-", "D5"},  {"D6+", "D5"},  {"D6-", "A5"},  {"E6", "A5"},   {"E6", "D5"},   {"D7", "D6-"},
      {"D7", "D6+"},  {"D7", "A6"},   {"E7", "E6"},   {"E7", "A6"},   {"E7", "D6-"},  {"D8-", "D7"},
      {"D8+", "D7"},  {"D8-", "A7"},  {"E8", "E7"},   {"E8", "A7"},   {"E8", "D7"},
  };
  std::set<std::pair<std::string, std::string>> actual;
  for (const auto& [from, to] : dag.edges()) actual.insert({from.label(), to.label()});
  CHECK(actual == fixture);

  // Subordinate types are simpler.
  for (const auto& [from, to] : dag.edges()) CHECK(milnor(to) < milnor(from));

  const auto below_e8 = subordinates(make_E(8), dag);
  CHECK(below_e8.size() > 3);
  CHECK(subordinates(make_A(0), dag).empty());
  CHECK(dag_min_homogeneity(parse_singularity("D4+"), dag) == r(1, 4));
}

TEST_CASE("a diagram with a cycle is reported") {
  const SubordinationDag dag({make_A(1), make_A(2)}, {{make_A(1), make_A(2)}, {make_A(2), make_A(1)}});
  CHECK_FALSE(dag.is_acyclic());
}

TEST_CASE("catalog CSV") {
  const auto csv = catalog_csv();
  CHECK(csv.rfind("family,index,sign,k,k0,r,s,kappa,delta0\n", 0) == 0);
  CHECK(csv.find("A,1,plus,1,1,1/3,1/3,1/6,1/3\n") != std::string::npos);
  CHECK(csv.find("E,8,plus,2,7,1/3;1/5,") != std::string::npos);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 1 + catalog_types().size());
}

TEST_CASE("monomial degrees are bounded") {
  const std::vector<Monomial> bad{{1.0, 17, 0}};
  CHECK_THROWS_AS(ThetaPolynomial(1, bad), std::invalid_argument);
}
