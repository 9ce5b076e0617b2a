#include "causticlab/torus.hpp"

#include "causticlab/parallel.hpp"
#include "causticlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace causticlab {

namespace {

void check_dimension(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("lattice enumeration supports 1 <= n <= 4, got n = " + std::to_string(n));
}

void check_unit(std::span<const double> omega) {
  long double s = 0.0L;
  for (double w : omega) s += static_cast<long double>(w) * w;
  if (std::abs(static_cast<double>(s) - 1.0) > 1e-12) throw std::invalid_argument("omega must be a unit vector");
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

long double dist2(const LatticePoint& a, std::span<const double> c) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - c[i];
    s += d * d;
  }
  return s;
}

std::int64_t norm2(const LatticePoint& a) {
  std::int64_t s = 0;
  for (auto v : a) s += v * v;
  return s;
}

// Enumerates the first n-1 coordinates of a in [lo_i, hi_i] and calls
// visit(a) with a[n-1] unset.
template <class Visit>
void enumerate_prefix(std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi, LatticePoint& a, std::size_t depth,
                      Visit&& visit) {
  if (depth + 1 >= a.size()) {
    visit(a);
    return;
  }
  for (std::int64_t v = lo[depth]; v <= hi[depth]; ++v) {
    a[depth] = v;
    enumerate_prefix(lo, hi, a, depth + 1, visit);
  }
}

double sphere_cap_radius(const CapQuery& q) {
  return q.cap_constant * std::pow(static_cast<double>(q.j), 0.5 * q.mu);
}

}  // namespace

bool in_open_ball(const LatticePoint& a, std::span<const double> center, double radius) {
  return dist2(a, center) < static_cast<long double>(radius) * radius;
}

bool in_sphere_cap(const LatticePoint& a, std::int64_t j, std::span<const double> omega, double cap_radius) {
  if (norm2(a) != j) return false;
  const long double r = std::sqrt(static_cast<long double>(j));
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - r * omega[i];
    s += d * d;
  }
  return s <= static_cast<long double>(cap_radius) * cap_radius;
}

// ---------------------------------------------------------------------------

namespace {

// Visits every lattice point of the open ball, last coordinate as a run
// [lo, hi]; both run ends are settled with the membership predicate itself.
template <class Run>
void ball_runs(std::span<const double> center, double radius, Run&& run) {
  const int n = static_cast<int>(center.size());
  check_dimension(n);
  if (!(radius >= 0.0) || radius > kMaxBallRadius)
    throw std::invalid_argument("ball radius must lie in [0, 1e4], got " + std::to_string(radius));
  std::vector<std::int64_t> lo(static_cast<std::size_t>(n));
  std::vector<std::int64_t> hi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(center[static_cast<std::size_t>(i)] - radius)) - 1;
    hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil(center[static_cast<std::size_t>(i)] + radius)) + 1;
  }
  const long double r2 = static_cast<long double>(radius) * radius;
  LatticePoint a(static_cast<std::size_t>(n), 0);
  const auto last = static_cast<std::size_t>(n - 1);
  enumerate_prefix(lo, hi, a, 0, [&](LatticePoint& p) {
    long double partial = 0.0L;
    for (std::size_t i = 0; i < last; ++i) {
      const long double d = static_cast<long double>(p[i]) - center[i];
      partial += d * d;
    }
    if (partial > r2 * (1.0L + 1e-12L)) return;
    const double rem = std::sqrt(static_cast<double>(std::max(0.0L, r2 - partial)));
    const auto in = [&](std::int64_t v) {
      p[last] = v;
      return in_open_ball(p, center, radius);
    };
    auto a0 = static_cast<std::int64_t>(std::ceil(center[last] - rem));
    auto a1 = static_cast<std::int64_t>(std::floor(center[last] + rem));
    while (in(a0 - 1)) --a0;
    while (a0 <= a1 && !in(a0)) ++a0;
    while (in(a1 + 1)) ++a1;
    while (a1 >= a0 && !in(a1)) --a1;
    if (a1 >= a0) run(p, a0, a1);
  });
}

}  // namespace

std::int64_t ball_count(std::span<const double> center, double radius) {
  std::int64_t count = 0;
  ball_runs(center, radius, [&](const LatticePoint&, std::int64_t a0, std::int64_t a1) { count += a1 - a0 + 1; });
  return count;
}

std::vector<LatticePoint> ball_points(std::span<const double> center, double radius) {
  std::vector<LatticePoint> out;
  ball_runs(center, radius, [&](const LatticePoint& p, std::int64_t a0, std::int64_t a1) {
    auto q = p;
    for (auto v = a0; v <= a1; ++v) {
      q.back() = v;
      out.push_back(q);
    }
  });
  return out;
}

namespace {

std::vector<double> ball_center(const CapQuery& q) {
  check_dimension(q.n);
  if (static_cast<int>(q.omega.size()) != q.n) throw std::invalid_argument("omega must have n entries");
  if (!(q.h > 0.0)) throw std::invalid_argument("ball queries need h > 0");
  std::vector<double> c(q.omega.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = q.omega[i] / q.h;
  return c;
}

double ball_radius(const CapQuery& q) { return q.cap_constant * std::pow(q.h, -q.mu); }

}  // namespace

std::int64_t ball_count(const CapQuery& q) { return ball_count(ball_center(q), ball_radius(q)); }

std::int64_t max_sphere_j(int n) { return n == 4 ? 100000 : 1000000; }

namespace {

template <class Visit>
void sphere_cap_visit(const CapQuery& q, Visit&& visit) {
  check_dimension(q.n);
  if (static_cast<int>(q.omega.size()) != q.n) throw std::invalid_argument("omega must have n entries");
  check_unit(q.omega);
  if (q.j < 0) throw std::invalid_argument("j must be non-negative");
  if (q.j > max_sphere_j(q.n))
    throw std::invalid_argument("j = " + std::to_string(q.j) + " exceeds the enumeration bound " +
                                std::to_string(max_sphere_j(q.n)) + " for n = " + std::to_string(q.n));
  const double rho = sphere_cap_radius(q);
  const double r = std::sqrt(static_cast<double>(q.j));
  const auto n = static_cast<std::size_t>(q.n);
  std::vector<std::int64_t> lo(n);
  std::vector<std::int64_t> hi(n);
  const auto rmax = isqrt(q.j);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = std::max(-rmax, static_cast<std::int64_t>(std::floor(r * q.omega[i] - rho)) - 1);
    hi[i] = std::min(rmax, static_cast<std::int64_t>(std::ceil(r * q.omega[i] + rho)) + 1);
  }
  LatticePoint a(n, 0);
  enumerate_prefix(lo, hi, a, 0, [&](LatticePoint& p) {
    std::int64_t partial = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) partial += p[i] * p[i];
    const auto t = isqrt(q.j - partial);
    if (t < 0 || t * t != q.j - partial) return;
    p[n - 1] = t;
    if (in_sphere_cap(p, q.j, q.omega, rho)) visit(p);
    if (t == 0) return;
    p[n - 1] = -t;
    if (in_sphere_cap(p, q.j, q.omega, rho)) visit(p);
  });
}

}  // namespace

std::int64_t sphere_cap_count(const CapQuery& q) {
  std::int64_t count = 0;
  sphere_cap_visit(q, [&](const LatticePoint&) { ++count; });
  return count;
}

std::vector<LatticePoint> sphere_cap_points(const CapQuery& q) {
  std::vector<LatticePoint> out;
  sphere_cap_visit(q, [&](const LatticePoint& p) { out.push_back(p); });
  return out;
}

std::int64_t sum_of_squares_count(int n, std::int64_t j) {
  CapQuery q;
  q.n = n;
  q.omega.assign(static_cast<std::size_t>(n), 0.0);
  q.omega[0] = 1.0;
  q.j = j;
  q.mu = 1.0;
  // The chord between antipodal points is 2 sqrt(j); this cap is the sphere.
  q.cap_constant = 2.0 + 1e-9;
  return sphere_cap_count(q);
}

// ---------------------------------------------------------------------------

double omega_volume(int n, double J, double delta, double cap_constant) {
  check_dimension(n);
  const auto area = [&](double r) {
    const double rho = cap_constant * std::pow(r, delta);
    if (n == 1) return 2.0 * r <= rho ? 2.0 : 1.0;
    // Geodesic radius of the cap cut out by |alpha - r omega| <= rho.
    const double phi0 = 2.0 * std::asin(std::min(rho / (2.0 * r), 1.0));
    switch (n) {
      case 2: return 2.0 * r * phi0;
      case 3: return 2.0 * std::numbers::pi * r * r * (1.0 - std::cos(phi0));
      default: return 4.0 * std::numbers::pi * r * r * r * (phi0 / 2.0 - std::sin(2.0 * phi0) / 4.0);
    }
  };
  return integrate_adaptive(area, std::sqrt(J), std::sqrt(2.0 * J), 1e-10, 0.0, 2000).value;
}

DyadicSearch dyadic_lower_bound_search(int n, double delta, int a_min, int a_max, std::vector<double> omega,
                                       double cap_constant, int workers) {
  check_dimension(n);
  if (omega.empty()) omega = omega_preset(n, ExtremizerMode::sphere);
  if (static_cast<int>(omega.size()) != n) throw std::invalid_argument("omega must have n entries");
  check_unit(omega);
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (a_min < 0 || a_max < a_min) throw std::invalid_argument("need 0 <= a_min <= a_max");
  if (std::ldexp(2.0, a_max) > static_cast<double>(max_sphere_j(n)))
    throw std::invalid_argument("block (2^" + std::to_string(a_max) + ", 2^" + std::to_string(a_max + 1) +
                                "] exceeds the enumeration bound for n = " + std::to_string(n));

  DyadicSearch out;
  out.n = n;
  out.delta = delta;
  out.omega = omega;
  const auto nb = static_cast<std::size_t>(a_max - a_min + 1);
  out.blocks.resize(nb);
  parallel_for(nb, workers, [&](std::size_t b) {
    const std::int64_t J = std::int64_t{1} << (a_min + static_cast<int>(b));
    std::vector<std::int64_t> m(static_cast<std::size_t>(J), 0);  // M(J + 1 + i)
    // Bounding box of Omega_J; every candidate is decided by in_sphere_cap.
    const double r0 = std::sqrt(static_cast<double>(J));
    const double r1 = std::sqrt(2.0 * static_cast<double>(J));
    const double rho = cap_constant * std::pow(r1, delta);
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::int64_t> lo(un);
    std::vector<std::int64_t> hi(un);
    for (std::size_t i = 0; i < un; ++i) {
      lo[i] = static_cast<std::int64_t>(std::floor(std::min(r0 * omega[i], r1 * omega[i]) - rho)) - 1;
      hi[i] = static_cast<std::int64_t>(std::ceil(std::max(r0 * omega[i], r1 * omega[i]) + rho)) + 1;
    }
    LatticePoint a(un, 0);
    enumerate_prefix(lo, hi, a, 0, [&](LatticePoint& p) {
      for (auto v = lo[un - 1]; v <= hi[un - 1]; ++v) {
        p[un - 1] = v;
        const auto j = norm2(p);
        if (j <= J || j > 2 * J) continue;
        const double cap = cap_constant * std::pow(static_cast<double>(j), 0.5 * delta);
        if (in_sphere_cap(p, j, omega, cap)) ++m[static_cast<std::size_t>(j - J - 1)];
      }
    });
    DyadicBlock blk;
    blk.block_id = static_cast<int>(b);
    blk.J = J;
    blk.volume = omega_volume(n, static_cast<double>(J), delta, cap_constant);
    for (std::size_t i = 0; i < m.size(); ++i) {
      blk.block_sum += m[i];
      if (m[i] > 0) ++blk.nonempty;
      if (m[i] > blk.best_count) {
        blk.best_count = m[i];
        blk.best_j = J + 1 + static_cast<std::int64_t>(i);
      }
    }
    out.blocks[b] = blk;
  });

  std::vector<double> hs;
  std::vector<double> ratios;
  for (const auto& blk : out.blocks) {
    if (blk.best_count == 0) continue;
    hs.push_back(1.0 / std::sqrt(static_cast<double>(blk.best_j)));
    ratios.push_back(std::sqrt(static_cast<double>(blk.best_count)));
  }
  if (hs.size() >= 2) out.ratio_fit = fit_power_law(hs, ratios);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ExtremizerMode m) { return m == ExtremizerMode::ball ? "ball" : "sphere"; }

ExtremizerMode parse_extremizer_mode(const std::string& s) {
  if (s == "ball") return ExtremizerMode::ball;
  if (s == "sphere") return ExtremizerMode::sphere;
  throw std::invalid_argument("unknown extremizer mode '" + s + "'");
}

double ExtremizerSum::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return std::sqrt(s);
}

ExtremizerSum extremizer(const CapQuery& q, ExtremizerMode mode, Normalization norm) {
  ExtremizerSum s;
  s.n = q.n;
  s.normalization = norm;
  s.support = mode == ExtremizerMode::ball ? ball_points(ball_center(q), ball_radius(q)) : sphere_cap_points(q);
  if (s.support.empty()) throw std::invalid_argument("empty cap: the extremizer has no support");
  const double a = norm == Normalization::raw ? 1.0 : 1.0 / std::sqrt(static_cast<double>(s.support.size()));
  s.coefficients.assign(s.support.size(), Complex{a, 0.0});
  return s;
}

Complex eval_sum(const ExtremizerSum& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.n) throw std::invalid_argument("x must have n entries");
  Complex total{};
  for (std::size_t k = 0; k < s.support.size(); ++k) {
    double phase = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) phase += static_cast<double>(s.support[k][i]) * x[i];
    total += s.coefficients[k] * std::polar(1.0, -phase);
  }
  return total;
}

namespace {

// f on the grid x_i = 2 pi k_i / m: bin the coefficients by alpha mod m and
// apply a direct DFT along each axis.
std::vector<Complex> grid_values(const ExtremizerSum& s, int m) {
  if (m < 1) throw std::invalid_argument("points_per_axis must be positive");
  check_dimension(s.n);
  const auto um = static_cast<std::size_t>(m);
  std::size_t total = 1;
  for (int i = 0; i < s.n; ++i) total *= um;
  std::vector<Complex> f(total);
  for (std::size_t k = 0; k < s.support.size(); ++k) {
    std::size_t idx = 0;
    for (int i = 0; i < s.n; ++i) {
      const auto r = ((s.support[k][static_cast<std::size_t>(i)] % m) + m) % m;
      idx = idx * um + static_cast<std::size_t>(r);
    }
    f[idx] += s.coefficients[k];
  }
  std::vector<Complex> twiddle(um);
  for (std::size_t t = 0; t < um; ++t) twiddle[t] = std::polar(1.0, -2.0 * std::numbers::pi * t / m);
  std::vector<Complex> line(um);
  std::size_t stride = 1;
  for (int axis = s.n - 1; axis >= 0; --axis) {
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % um != 0) continue;
      for (std::size_t kx = 0; kx < um; ++kx) {
        Complex acc{};
        for (std::size_t r = 0; r < um; ++r) acc += f[base + r * stride] * twiddle[(r * kx) % um];
        line[kx] = acc;
      }
      for (std::size_t kx = 0; kx < um; ++kx) f[base + kx * stride] = line[kx];
    }
    stride *= um;
  }
  return f;
}

}  // namespace

double grid_sup(const ExtremizerSum& s, int points_per_axis) {
  double best = 0.0;
  for (const auto& v : grid_values(s, points_per_axis)) best = std::max(best, std::abs(v));
  return best;
}

double grid_mean_square(const ExtremizerSum& s, int points_per_axis) {
  const auto f = grid_values(s, points_per_axis);
  double total = 0.0;
  for (const auto& v : f) total += std::norm(v);
  return total / static_cast<double>(f.size());
}

std::vector<double> omega_preset(int n, ExtremizerMode mode) {
  check_dimension(n);
  if (mode == ExtremizerMode::sphere) {
    switch (n) {
      case 1: return {1.0};
      case 2: return {3.0 / 5.0, 4.0 / 5.0};
      case 3: return {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
      default: return {0.5, 0.5, 0.5, 0.5};
    }
  }
  static constexpr double primes[] = {2.0, 3.0, 5.0, 7.0};
  std::vector<double> w;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    w.push_back(std::sqrt(primes[i]) - 1.0);
    norm += w.back() * w.back();
  }
  for (double& v : w) v /= std::sqrt(norm);
  return w;
}

std::vector<LatticeCoefficient> as_lattice_coefficients(const ExtremizerSum& s) {
  std::vector<LatticeCoefficient> out;
  out.reserve(s.support.size());
  for (std::size_t k = 0; k < s.support.size(); ++k) out.push_back({s.support[k], s.coefficients[k]});
  return out;
}

}  // namespace causticlab
