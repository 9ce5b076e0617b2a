#pragma once

// Lattice-point counts, cap counts on spheres and extremizer exponential sums
// on the flat torus R^n / 2 pi Z^n.

#include "causticlab/amplitudes.hpp"
#include "causticlab/regression.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace causticlab {

using LatticePoint = std::vector<std::int64_t>;

/// Ball query: centre omega / h, radius C h^{-mu}.  Sphere query: |alpha|^2 = j
/// (h = j^{-1/2}) and |alpha - sqrt(j) omega| <= C j^{mu/2}, |omega| = 1.
struct CapQuery {
  int n = 2;
  std::vector<double> omega;
  double h = 0.0;
  std::int64_t j = 0;
  double mu = 0.5;
  double cap_constant = 1.0;
};

inline constexpr double kMaxBallRadius = 1e4;

/// #{alpha in Z^n : |alpha - center| < radius}.  n <= 4, radius <= 1e4.
std::int64_t ball_count(std::span<const double> center, double radius);
/// N_mu(h) = #{alpha : |alpha - omega/h| < C h^{-mu}}.
std::int64_t ball_count(const CapQuery& q);
std::vector<LatticePoint> ball_points(std::span<const double> center, double radius);

/// Maximum j accepted by sphere-cap enumeration in dimension n.
std::int64_t max_sphere_j(int n);

/// #{alpha : |alpha|^2 = j, |alpha - sqrt(j) omega| <= C j^{mu/2}}.
std::int64_t sphere_cap_count(const CapQuery& q);
std::vector<LatticePoint> sphere_cap_points(const CapQuery& q);
/// r_n(j): all representations of j as a sum of n squares.
std::int64_t sum_of_squares_count(int n, std::int64_t j);

/// The two membership predicates, shared with the brute-force checks.
bool in_open_ball(const LatticePoint& a, std::span<const double> center, double radius);
bool in_sphere_cap(const LatticePoint& a, std::int64_t j, std::span<const double> omega, double cap_radius);

/// Solid angle measure of Omega_J = {J < |alpha|^2 <= 2J, |alpha - |alpha| omega| <= C |alpha|^delta}.
double omega_volume(int n, double J, double delta, double cap_constant);

struct DyadicBlock {
  int block_id = 0;
  std::int64_t J = 0;
  /// Sum of M(j) over J < j <= 2J, i.e. #(Z^n cap Omega_J).
  std::int64_t block_sum = 0;
  double volume = 0.0;
  /// Representable j in the block (M(j) > 0).
  std::int64_t nonempty = 0;
  /// Argmax of M over the block (smallest j on ties); 0 when the block is empty.
  std::int64_t best_j = 0;
  std::int64_t best_count = 0;
};

struct DyadicSearch {
  int n = 0;
  double delta = 0.0;
  std::vector<double> omega;
  std::vector<DyadicBlock> blocks;
  /// Exponent of the selected ratio sqrt(M(j)) against log sqrt(j).
  LineFit ratio_fit;
};

/// M(j) = sphere cap count with mu = delta, for every j in each block
/// (J, 2J], J = 2^a for a in [a_min, a_max].
DyadicSearch dyadic_lower_bound_search(int n, double delta, int a_min, int a_max, std::vector<double> omega = {},
                                       double cap_constant = 1.0, int workers = 1);

enum class ExtremizerMode { ball, sphere };
std::string to_string(ExtremizerMode m);
ExtremizerMode parse_extremizer_mode(const std::string& s);

enum class Normalization { l2_normalized, raw };

/// f(x) = sum a_alpha e^{-i alpha x}, with the normalized measure on the torus
/// so that ||f||_2^2 = sum |a_alpha|^2.
struct ExtremizerSum {
  int n = 0;
  std::vector<LatticePoint> support;
  std::vector<Complex> coefficients;
  Normalization normalization = Normalization::l2_normalized;

  double l2_norm() const;
};

/// Uniform coefficients on the ball (mu as given) or sphere cap of q.
/// Throws std::invalid_argument on an empty set.
ExtremizerSum extremizer(const CapQuery& q, ExtremizerMode mode, Normalization norm = Normalization::l2_normalized);

Complex eval_sum(const ExtremizerSum& s, std::span<const double> x);

/// max |f| over the uniform grid of points_per_axis^n points of [0, 2 pi)^n.
double grid_sup(const ExtremizerSum& s, int points_per_axis = 64);
/// Mean of |f|^2 over the same grid.
double grid_mean_square(const ExtremizerSum& s, int points_per_axis = 64);

/// Default directions: ball mode (sqrt 2 - 1, sqrt 3 - 1, sqrt 5 - 1, ...)
/// normalized; sphere mode (1), (3,4)/5, (1,2,2)/3, (1,1,1,1)/2.
std::vector<double> omega_preset(int n, ExtremizerMode mode);

/// The coefficients of an extremizer as lattice coefficients for the
/// regularity checker.
std::vector<LatticeCoefficient> as_lattice_coefficients(const ExtremizerSum& s);

}  // namespace causticlab
