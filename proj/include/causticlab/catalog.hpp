#pragma once

// Normal forms of the stable simple Lagrangian singularities (A, D, E series),
// their quasi-homogeneity weights, caustic orders, regularity thresholds and the
// subordination diagram.

#include "causticlab/rational.hpp"

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causticlab {

enum class Family { A, Dminus, Dplus, D, E };
enum class Sign { plus, minus };

std::string to_string(Family f);
std::string to_string(Sign s);
Family parse_family(const std::string& s);
Sign parse_sign(const std::string& s);

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Identifies one normal form.  `index` is m for A_{m+1} / D_{m+1} and 6, 7, 8
/// for the E series.
struct SingularityType {
  Family family = Family::A;
  int index = 1;
  Sign sign = Sign::plus;

  /// Throws CatalogError when the family/index/sign combination is not a
  /// catalog entry.
  void validate() const;

  /// Conventional label: A2, A3-, D4+, D4-, D5, E6, E6-.
  std::string label() const;

  friend bool operator==(const SingularityType&, const SingularityType&) = default;
};

SingularityType make_A(int m, Sign sign = Sign::plus);
SingularityType make_D(int m, Sign sign = Sign::plus);
SingularityType make_E(int index, Sign sign = Sign::plus);

/// Inverse of SingularityType::label().  Throws CatalogError.
SingularityType parse_singularity(const std::string& label);

struct HomogeneityProfile {
  std::vector<Rational> r;  // phase-variable weights, length k
  std::vector<Rational> s;  // base-variable weights, length k0
  int k = 0;
  int k0 = 0;

  Rational r_sum() const;
};

/// c * theta1^e1 * theta2^e2
struct Monomial {
  double coeff = 1.0;
  int e1 = 0;
  int e2 = 0;
};

/// Dense polynomial in at most two phase variables, obtained by freezing the
/// base point x in a phase function.  Coefficient c(a, b) multiplies
/// theta1^a theta2^b.
class ThetaPolynomial {
 public:
  ThetaPolynomial() = default;
  ThetaPolynomial(int k, std::span<const Monomial> terms);

  int k() const { return k_; }
  int degree1() const { return deg1_; }
  int degree2() const { return deg2_; }
  double coeff(int a, int b) const { return coeffs_[static_cast<std::size_t>(a * (deg2_ + 1) + b)]; }

  double value(double t1, double t2 = 0.0) const;
  std::array<double, 2> gradient(double t1, double t2 = 0.0) const;
  /// (d11, d12, d22)
  std::array<double, 3> hessian(double t1, double t2 = 0.0) const;

  /// Coefficients of the polynomial in theta1 obtained by fixing theta2,
  /// written into `out` (size degree1() + 1).
  void restrict_theta2(double t2, std::span<double> out) const;

 private:
  int k_ = 1;
  int deg1_ = 0;
  int deg2_ = 0;
  std::vector<double> coeffs_;
};

/// phi(x, theta) = sum_{j < k0} x_j f_j(theta) + f(theta).
class PhaseFunction {
 public:
  PhaseFunction(SingularityType type, HomogeneityProfile homogeneity,
                std::vector<Monomial> f, std::vector<Monomial> fj);

  const SingularityType& type() const { return type_; }
  const HomogeneityProfile& homogeneity() const { return homogeneity_; }
  int k() const { return homogeneity_.k; }
  int k0() const { return homogeneity_.k0; }
  const std::vector<Monomial>& f_terms() const { return f_; }
  const std::vector<Monomial>& fj_terms() const { return fj_; }

  double operator()(std::span<const double> x, std::span<const double> theta) const;
  std::array<double, 2> grad_theta(std::span<const double> x, std::span<const double> theta) const;
  /// d phi / d x_j = f_j(theta)
  std::vector<double> grad_x(std::span<const double> theta) const;
  /// Gradient of the x-free part f alone.
  std::array<double, 2> grad_f(std::span<const double> theta) const;

  /// The phase with x frozen, as a polynomial in theta.
  ThetaPolynomial at(std::span<const double> x) const;

 private:
  SingularityType type_;
  HomogeneityProfile homogeneity_;
  std::vector<Monomial> f_;
  std::vector<Monomial> fj_;
};

/// Minimal phase-variable count is used: k = 1 for A, k = 2 for D and E.
PhaseFunction build_phase(const SingularityType& t);

/// kappa = k/2 - sum r_j, exact.
Rational caustic_order(const SingularityType& t);

/// Tabulated regularity threshold delta_0.
Rational threshold(const SingularityType& t);

/// Every type appearing in the subordination diagram, in column order
/// A1..A8, D4-, D4+, D5, D6-, D6+, D7, D8-, D8+, E6, E7, E8.
std::vector<SingularityType> catalog_types();

class SubordinationDag {
 public:
  /// The diagram of subordinate caustics for the simple singularities.
  static SubordinationDag standard();

  SubordinationDag(std::vector<SingularityType> nodes,
                   std::vector<std::pair<SingularityType, SingularityType>> edges);

  const std::vector<SingularityType>& nodes() const { return nodes_; }
  const std::vector<std::pair<SingularityType, SingularityType>>& edges() const { return edges_; }

  bool contains(const SingularityType& t) const;
  std::vector<SingularityType> successors(const SingularityType& t) const;
  bool is_acyclic() const;

 private:
  std::size_t index_of(const SingularityType& t) const;

  std::vector<SingularityType> nodes_;
  std::vector<std::pair<SingularityType, SingularityType>> edges_;
};

/// Transitive closure of the out-edges of t, in node order.
std::vector<SingularityType> subordinates(const SingularityType& t, const SubordinationDag& dag);

/// min r_j over t and every type reachable from it.  Diagnostic only: for
/// D4+ it gives 1/4 while the tabulated threshold is 1/3.
Rational dag_min_homogeneity(const SingularityType& t, const SubordinationDag& dag);

/// CSV dump: family,index,sign,k,k0,r,s,kappa,delta0 with rationals as p/q and
/// vectors joined by ';'.
std::string catalog_csv();

}  // namespace causticlab
