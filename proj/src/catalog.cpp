#include "causticlab/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace causticlab {

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::Dminus: return "Dminus";
    case Family::Dplus: return "Dplus";
    case Family::D: return "D";
    case Family::E: return "E";
  }
  return "?";
}

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "Dminus") return Family::Dminus;
  if (s == "Dplus") return Family::Dplus;
  if (s == "D") return Family::D;
  if (s == "E") return Family::E;
  throw CatalogError("unknown family '" + s + "'");
}

Sign parse_sign(const std::string& s) {
  if (s == "plus" || s == "+") return Sign::plus;
  if (s == "minus" || s == "-") return Sign::minus;
  throw CatalogError("unknown sign '" + s + "'");
}

void SingularityType::validate() const {
  switch (family) {
    case Family::A:
      if (index < 0) throw CatalogError("A-series needs m >= 0, got " + std::to_string(index));
      return;
    case Family::D:
      if (index < 3 || index % 2 != 0)
        throw CatalogError("family D (no sign variant) needs an even m >= 4, got " + std::to_string(index));
      return;
    case Family::Dplus:
    case Family::Dminus: {
      if (index < 3 || index % 2 == 0)
        throw CatalogError("D+/D- variants need an odd m >= 3, got " + std::to_string(index));
      const Sign expected = family == Family::Dplus ? Sign::plus : Sign::minus;
      if (sign != expected)
        throw CatalogError(to_string(family) + " carries sign " + to_string(expected) + ", got " + to_string(sign));
      return;
    }
    case Family::E:
      if (index < 6 || index > 8) throw CatalogError("E-series index must be 6, 7 or 8, got " + std::to_string(index));
      if (index != 6 && sign == Sign::minus) throw CatalogError("only E6 has a sign variant");
      return;
  }
}

std::string SingularityType::label() const {
  switch (family) {
    case Family::A: return "A" + std::to_string(index + 1) + (sign == Sign::minus ? "-" : "");
    case Family::Dplus: return "D" + std::to_string(index + 1) + "+";
    case Family::Dminus: return "D" + std::to_string(index + 1) + "-";
    case Family::D: return "D" + std::to_string(index + 1) + (sign == Sign::minus ? "-" : "");
    case Family::E: return "E" + std::to_string(index) + (sign == Sign::minus ? "-" : "");
  }
  return "?";
}

SingularityType make_A(int m, Sign sign) {
  SingularityType t{Family::A, m, sign};
  t.validate();
  return t;
}

SingularityType make_D(int m, Sign sign) {
  SingularityType t{Family::D, m, sign};
  if (m % 2 != 0) t.family = sign == Sign::plus ? Family::Dplus : Family::Dminus;
  t.validate();
  return t;
}

SingularityType make_E(int index, Sign sign) {
  SingularityType t{Family::E, index, sign};
  t.validate();
  return t;
}

SingularityType parse_singularity(const std::string& label) {
  if (label.size() < 2) throw CatalogError("bad singularity label '" + label + "'");
  const char letter = label.front();
  std::string digits;
  std::size_t pos = 1;
  while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) digits += label[pos++];
  const std::string suffix = label.substr(pos);
  if (digits.empty() || (!suffix.empty() && suffix != "+" && suffix != "-"))
    throw CatalogError("bad singularity label '" + label + "'");
  const int number = std::stoi(digits);
  const Sign sign = suffix == "-" ? Sign::minus : Sign::plus;
  switch (letter) {
    case 'A':
      if (suffix == "+") return make_A(number - 1, Sign::plus);
      return make_A(number - 1, sign);
    case 'D': {
      const int m = number - 1;
      if (m % 2 != 0 && suffix.empty())
        throw CatalogError("'" + label + "' needs a + or - suffix (odd m)");
      return make_D(m, sign);
    }
    case 'E': return make_E(number, sign);
    default: throw CatalogError("bad singularity label '" + label + "'");
  }
}

Rational HomogeneityProfile::r_sum() const {
  Rational total{0};
  for (const auto& q : r) total += q;
  return total;
}

// ---------------------------------------------------------------------------

ThetaPolynomial::ThetaPolynomial(int k, std::span<const Monomial> terms) : k_(k) {
  for (const auto& m : terms) {
    if (m.e1 < 0 || m.e2 < 0 || m.e1 > 16 || m.e2 > 16) throw std::invalid_argument("monomial degree out of range");
    deg1_ = std::max(deg1_, m.e1);
    deg2_ = std::max(deg2_, m.e2);
  }
  coeffs_.assign(static_cast<std::size_t>((deg1_ + 1) * (deg2_ + 1)), 0.0);
  for (const auto& m : terms) coeffs_[static_cast<std::size_t>(m.e1 * (deg2_ + 1) + m.e2)] += m.coeff;
}

void ThetaPolynomial::restrict_theta2(double t2, std::span<double> out) const {
  for (int a = 0; a <= deg1_; ++a) {
    double acc = 0.0;
    for (int b = deg2_; b >= 0; --b) acc = acc * t2 + coeff(a, b);
    out[static_cast<std::size_t>(a)] = acc;
  }
}

double ThetaPolynomial::value(double t1, double t2) const {
  double outer = 0.0;
  for (int a = deg1_; a >= 0; --a) {
    double inner = 0.0;
    for (int b = deg2_; b >= 0; --b) inner = inner * t2 + coeff(a, b);
    outer = outer * t1 + inner;
  }
  return outer;
}

namespace {

// p[i] = t^i for i <= n, with p[-1] treated as 0 by the callers.
constexpr int kMaxDegree = 16;

void powers(double t, int n, double* p) {
  p[0] = 1.0;
  for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * t;
}

}  // namespace

std::array<double, 2> ThetaPolynomial::gradient(double t1, double t2) const {
  double p1[kMaxDegree + 1];
  double p2[kMaxDegree + 1];
  powers(t1, deg1_, p1);
  powers(t2, deg2_, p2);
  double d1 = 0.0;
  double d2 = 0.0;
  for (int a = 0; a <= deg1_; ++a) {
    for (int b = 0; b <= deg2_; ++b) {
      const double c = coeff(a, b);
      if (c == 0.0) continue;
      if (a > 0) d1 += c * a * p1[a - 1] * p2[b];
      if (b > 0) d2 += c * b * p1[a] * p2[b - 1];
    }
  }
  return {d1, d2};
}

std::array<double, 3> ThetaPolynomial::hessian(double t1, double t2) const {
  double p1[kMaxDegree + 1];
  double p2[kMaxDegree + 1];
  powers(t1, deg1_, p1);
  powers(t2, deg2_, p2);
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
  for (int a = 0; a <= deg1_; ++a) {
    for (int b = 0; b <= deg2_; ++b) {
      const double c = coeff(a, b);
      if (c == 0.0) continue;
      if (a > 1) d11 += c * a * (a - 1) * p1[a - 2] * p2[b];
      if (a > 0 && b > 0) d12 += c * a * b * p1[a - 1] * p2[b - 1];
      if (b > 1) d22 += c * b * (b - 1) * p1[a] * p2[b - 2];
    }
  }
  return {d11, d12, d22};
}

// ---------------------------------------------------------------------------

namespace {

double monomial_value(const Monomial& m, std::span<const double> theta) {
  double v = m.coeff;
  if (m.e1 > 0) v *= std::pow(theta[0], m.e1);
  if (m.e2 > 0) v *= std::pow(theta[1], m.e2);
  return v;
}

std::array<double, 2> monomial_gradient(const Monomial& m, std::span<const double> theta) {
  std::array<double, 2> g{0.0, 0.0};
  const double t1 = theta[0];
  const double t2 = theta.size() > 1 ? theta[1] : 0.0;
  if (m.e1 > 0) g[0] = m.coeff * m.e1 * std::pow(t1, m.e1 - 1) * (m.e2 > 0 ? std::pow(t2, m.e2) : 1.0);
  if (m.e2 > 0) g[1] = m.coeff * m.e2 * std::pow(t2, m.e2 - 1) * (m.e1 > 0 ? std::pow(t1, m.e1) : 1.0);
  return g;
}

Rational weighted_degree(const Monomial& m, const std::vector<Rational>& r) {
  Rational d = Rational(m.e1) * r[0];
  if (m.e2 > 0) d += Rational(m.e2) * r[1];
  return d;
}

}  // namespace

PhaseFunction::PhaseFunction(SingularityType type, HomogeneityProfile homogeneity,
                             std::vector<Monomial> f, std::vector<Monomial> fj)
    : type_(type), homogeneity_(std::move(homogeneity)), f_(std::move(f)), fj_(std::move(fj)) {}

double PhaseFunction::operator()(std::span<const double> x, std::span<const double> theta) const {
  double v = 0.0;
  for (const auto& m : f_) v += monomial_value(m, theta);
  for (std::size_t j = 0; j < fj_.size(); ++j) v += x[j] * monomial_value(fj_[j], theta);
  return v;
}

std::array<double, 2> PhaseFunction::grad_f(std::span<const double> theta) const {
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& m : f_) {
    const auto d = monomial_gradient(m, theta);
    g[0] += d[0];
    g[1] += d[1];
  }
  return g;
}

std::array<double, 2> PhaseFunction::grad_theta(std::span<const double> x, std::span<const double> theta) const {
  auto g = grad_f(theta);
  for (std::size_t j = 0; j < fj_.size(); ++j) {
    const auto d = monomial_gradient(fj_[j], theta);
    g[0] += x[j] * d[0];
    g[1] += x[j] * d[1];
  }
  return g;
}

std::vector<double> PhaseFunction::grad_x(std::span<const double> theta) const {
  std::vector<double> g;
  g.reserve(fj_.size());
  for (const auto& m : fj_) g.push_back(monomial_value(m, theta));
  return g;
}

ThetaPolynomial PhaseFunction::at(std::span<const double> x) const {
  std::vector<Monomial> terms = f_;
  for (std::size_t j = 0; j < fj_.size(); ++j) {
    if (x[j] == 0.0) continue;
    Monomial m = fj_[j];
    m.coeff *= x[j];
    terms.push_back(m);
  }
  return ThetaPolynomial(k(), terms);
}

PhaseFunction build_phase(const SingularityType& t) {
  t.validate();
  const double sgn = t.sign == Sign::plus ? 1.0 : -1.0;
  HomogeneityProfile hp;
  std::vector<Monomial> f;
  std::vector<Monomial> fj;

  switch (t.family) {
    case Family::A: {
      const int m = t.index;
      hp.k = 1;
      hp.r = {Rational(1, m + 2)};
      f = {{sgn, m + 2, 0}};
      for (int j = 1; j <= m; ++j) fj.push_back({1.0, j, 0});
      break;
    }
    case Family::D:
    case Family::Dplus:
    case Family::Dminus: {
      const int m = t.index;
      hp.k = 2;
      hp.r = {Rational(1, 2) - Rational(1, 2 * m), Rational(1, m)};
      f = {{1.0, 2, 1}, {sgn, 0, m}};
      fj.push_back({1.0, 1, 0});
      for (int j = 1; j <= m - 1; ++j) fj.push_back({1.0, 0, j});
      break;
    }
    case Family::E: {
      hp.k = 2;
      if (t.index == 6) {
        hp.r = {Rational(1, 3), Rational(1, 4)};
        f = {{1.0, 3, 0}, {sgn, 0, 4}};
        fj = {{1.0, 1, 0}, {1.0, 0, 1}, {1.0, 0, 2}, {1.0, 1, 1}, {1.0, 1, 2}};
      } else if (t.index == 7) {
        hp.r = {Rational(1, 3), Rational(2, 9)};
        f = {{1.0, 3, 0}, {1.0, 1, 3}};
        fj = {{1.0, 1, 0}, {1.0, 0, 1}, {1.0, 0, 2}, {1.0, 0, 3}, {1.0, 0, 4}, {1.0, 1, 1}};
      } else {
        hp.r = {Rational(1, 3), Rational(1, 5)};
        f = {{1.0, 3, 0}, {1.0, 0, 5}};
        fj = {{1.0, 1, 0}, {1.0, 0, 1}, {1.0, 0, 2}, {1.0, 0, 3}, {1.0, 1, 1}, {1.0, 1, 2}, {1.0, 1, 3}};
      }
      break;
    }
  }

  hp.k0 = static_cast<int>(fj.size());
  for (const auto& m : f) {
    if (weighted_degree(m, hp.r) != Rational(1))
      throw std::logic_error("normal form of " + t.label() + " is not quasi-homogeneous of degree 1");
  }
  for (const auto& m : fj) hp.s.push_back(weighted_degree(m, hp.r));
  return PhaseFunction(t, std::move(hp), std::move(f), std::move(fj));
}

Rational caustic_order(const SingularityType& t) {
  const auto phase = build_phase(t);
  const auto& hp = phase.homogeneity();
  return Rational(hp.k, 2) - hp.r_sum();
}

Rational threshold(const SingularityType& t) {
  t.validate();
  switch (t.family) {
    case Family::A: return t.index == 0 ? Rational(1) : Rational(1, t.index + 2);
    case Family::D:
    case Family::Dminus: return Rational(1, t.index + 1);
    case Family::Dplus: return Rational(1, t.index);
    case Family::E: return Rational(1, t.index);
  }
  return Rational(0);
}

std::vector<SingularityType> catalog_types() {
  std::vector<SingularityType> out;
  for (int m = 0; m <= 7; ++m) out.push_back(make_A(m));
  out.push_back(make_D(3, Sign::minus));
  out.push_back(make_D(3, Sign::plus));
  out.push_back(make_D(4));
  out.push_back(make_D(5, Sign::minus));
  out.push_back(make_D(5, Sign::plus));
  out.push_back(make_D(6));
  out.push_back(make_D(7, Sign::minus));
  out.push_back(make_D(7, Sign::plus));
  for (int e = 6; e <= 8; ++e) out.push_back(make_E(e));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Sign variants that do not change the diagram node collapse onto one key.
SingularityType dag_key(SingularityType t) {
  if (t.family == Family::A || t.family == Family::E || t.family == Family::D) t.sign = Sign::plus;
  return t;
}

}  // namespace

SubordinationDag SubordinationDag::standard() {
  const auto A = [](int n) { return make_A(n - 1); };
  const auto Dm = [](int n) { return make_D(n - 1, Sign::minus); };
  const auto Dp = [](int n) { return make_D(n - 1, Sign::plus); };
  const auto D = [](int n) { return make_D(n - 1); };
  const auto E = [](int n) { return make_E(n); };

  std::vector<std::pair<SingularityType, SingularityType>> edges = {
      {A(2), A(1)},  {A(3), A(2)},  {A(4), A(3)},  {A(5), A(4)},  {A(6), A(5)},  {A(7), A(6)},
      {A(8), A(7)},  {Dm(4), A(3)}, {Dp(4), A(3)}, {D(5), Dm(4)}, {D(5), Dp(4)}, {D(5), A(4)},
      {Dm(6), D(5)}, {Dp(6), D(5)}, {Dm(6), A(5)}, {E(6), A(5)},  {E(6), D(5)},  {D(7), Dm(6)},
      {D(7), Dp(6)}, {D(7), A(6)},  {E(7), E(6)},  {E(7), A(6)},  {E(7), Dm(6)}, {Dm(8), D(7)},
      {Dp(8), D(7)}, {Dm(8), A(7)}, {E(8), E(7)},  {E(8), A(7)},  {E(8), D(7)},
  };
  return SubordinationDag(catalog_types(), std::move(edges));
}

SubordinationDag::SubordinationDag(std::vector<SingularityType> nodes,
                                   std::vector<std::pair<SingularityType, SingularityType>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (auto& n : nodes_) n = dag_key(n);
  for (auto& [from, to] : edges_) {
    from = dag_key(from);
    to = dag_key(to);
    if (!contains(from) || !contains(to))
      throw CatalogError("edge " + from.label() + " -> " + to.label() + " references an unknown node");
  }
}

std::size_t SubordinationDag::index_of(const SingularityType& t) const {
  const auto key = dag_key(t);
  const auto it = std::find(nodes_.begin(), nodes_.end(), key);
  if (it == nodes_.end()) throw CatalogError(t.label() + " is not a node of the subordination diagram");
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool SubordinationDag::contains(const SingularityType& t) const {
  return std::find(nodes_.begin(), nodes_.end(), dag_key(t)) != nodes_.end();
}

std::vector<SingularityType> SubordinationDag::successors(const SingularityType& t) const {
  const auto key = nodes_[index_of(t)];
  std::vector<SingularityType> out;
  for (const auto& [from, to] : edges_)
    if (from == key) out.push_back(to);
  return out;
}

bool SubordinationDag::is_acyclic() const {
  // Kahn's algorithm.
  std::vector<int> indegree(nodes_.size(), 0);
  for (const auto& e : edges_) ++indegree[index_of(e.second)];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const auto i = ready.back();
    ready.pop_back();
    ++removed;
    for (const auto& e : edges_) {
      if (!(e.first == nodes_[i])) continue;
      if (--indegree[index_of(e.second)] == 0) ready.push_back(index_of(e.second));
    }
  }
  return removed == nodes_.size();
}

std::vector<SingularityType> subordinates(const SingularityType& t, const SubordinationDag& dag) {
  std::vector<bool> seen(dag.nodes().size(), false);
  std::vector<SingularityType> stack = dag.successors(t);
  while (!stack.empty()) {
    const auto cur = stack.back();
    stack.pop_back();
    const auto pos = static_cast<std::size_t>(
        std::find(dag.nodes().begin(), dag.nodes().end(), cur) - dag.nodes().begin());
    if (seen[pos]) continue;
    seen[pos] = true;
    for (const auto& nxt : dag.successors(cur)) stack.push_back(nxt);
  }
  std::vector<SingularityType> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(dag.nodes()[i]);
  return out;
}

Rational dag_min_homogeneity(const SingularityType& t, const SubordinationDag& dag) {
  if (!dag.contains(t)) throw CatalogError(t.label() + " is not a node of the subordination diagram");
  auto types = subordinates(t, dag);
  types.push_back(t);
  Rational best{1};
  for (const auto& s : types) {
    const auto phase = build_phase(s);
    for (const auto& r : phase.homogeneity().r) best = std::min(best, r);
  }
  return best;
}

std::string catalog_csv() {
  std::ostringstream os;
  os << "family,index,sign,k,k0,r,s,kappa,delta0\n";
  const auto join = [](const std::vector<Rational>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ';';
      out += to_string(v[i]);
    }
    return out;
  };
  for (const auto& t : catalog_types()) {
    const auto phase = build_phase(t);
    const auto& hp = phase.homogeneity();
    os << to_string(t.family) << ',' << t.index << ',' << to_string(t.sign) << ',' << hp.k << ',' << hp.k0 << ','
       << join(hp.r) << ',' << join(hp.s) << ',' << to_string(caustic_order(t)) << ',' << to_string(threshold(t))
       << '\n';
  }
  return os.str();
}

}  // namespace causticlab
