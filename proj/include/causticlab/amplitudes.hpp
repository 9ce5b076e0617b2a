#pragma once

// h-dependent amplitude families in the symbol classes S^k_delta, plus the two
// numerical regularity checks used on them.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace causticlab {

using Complex = std::complex<double>;

/// Smooth cutoff: 1 on [-1, 1], 0 outside (-2, 2), built as a smoothstep of
/// the e^{-1/t} transition.
double bump(double t);
/// Smoothstep: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

enum class AmplitudeKind {
  fixed_bump,
  narrow_bump,
  modulated_bump,
  fold_saturator_below,
  fold_saturator_above,
  gaussian,
  custom,
};

std::string to_string(AmplitudeKind kind);
AmplitudeKind parse_amplitude_kind(const std::string& name);

class AmplitudeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One-dimensional profile of a custom amplitude, in the scaled variable
/// t = (theta - center) / h^width_exponent.  Must vanish for |t| >= support.
using ProfileFn = std::function<Complex(double t, double h)>;

struct AmplitudeParams {
  std::optional<double> width_exponent;
  std::vector<double> center{0.0};
  /// modulated_bump: frequency nu in e^{i nu t}.
  double modulation = 1.0;
  /// custom only.
  ProfileFn profile;
  double profile_support = 2.0;
  double declared_order = 0.0;
};

/// a(x, theta; h) = h^{prefactor_exponent} * prod_i p((theta_i - c_i) / h^w, theta_i, h).
/// Tensor products of one 1D profile; built-in kinds ignore x.
class AmplitudeProfile {
 public:
  AmplitudeKind kind = AmplitudeKind::fixed_bump;
  double delta = 0.0;
  double declared_order = 0.0;
  std::vector<double> center{0.0};
  double width_exponent = 0.0;
  double prefactor_exponent = 0.0;
  double modulation = 0.0;
  ProfileFn profile;
  double profile_support = 2.0;

  /// Centre used for phase axis `axis`; a single centre is broadcast.
  double center_of(int axis) const;
  /// Scale h^width_exponent of the profile.
  double scale(double h) const;
  /// Half-width of the support along one axis.
  double support_radius(double h) const;

  /// Factor contributed by one phase variable (without the prefactor).
  Complex axis_factor(int axis, double theta, double h) const;
  double prefactor(double h) const;

  Complex operator()(std::span<const double> x, std::span<const double> theta, double h) const;
  Complex operator()(double theta, double h) const;
};

/// Throws AmplitudeError for delta outside [0, 1] or inconsistent parameters.
AmplitudeProfile make_amplitude(AmplitudeKind kind, double delta, const AmplitudeParams& params = {});

// ---------------------------------------------------------------------------

struct SymbolOrderRow {
  int alpha = 0;
  std::vector<double> h;
  std::vector<double> sup_derivative;
  double fitted_order = 0.0;
  double expected_order = 0.0;  // declared_order + delta * alpha
  double r_squared = 0.0;
  double max_residual = 0.0;
  bool within_class = false;  // fitted_order <= expected_order + tolerance
};

struct SymbolOrderReport {
  std::string kind;
  double delta = 0.0;
  double declared_order = 0.0;
  double tolerance = 0.05;
  std::vector<SymbolOrderRow> rows;
};

/// Estimates sup |d^alpha a| for alpha = 0..alpha_max by 4th-order central
/// differences with step h^delta / 64 over the support, then fits the growth
/// rate in 1/h.  The h grid must have at least 6 points; alpha_max <= 4.
SymbolOrderReport check_symbol_order(const AmplitudeProfile& a, std::span<const double> h_grid, int alpha_max,
                                     double tolerance = 0.05, int workers = 1);

/// Derivative of the scaled-profile part used by check_symbol_order; exposed
/// for testing the stencil.
double central_difference_sup(const std::function<Complex(double)>& f, double lo, double hi, double step,
                              int alpha);

// ---------------------------------------------------------------------------

struct LatticeCoefficient {
  std::vector<std::int64_t> alpha;
  Complex value;
};

struct RegularityMoment {
  int order = 0;     // N
  double moment = 0.0;  // sum [h^delta |alpha - omega/h|]^N |a_alpha|^2
  bool bounded = false;
};

struct TorusRegularityReport {
  double h = 0.0;
  double delta = 0.0;
  double bound = 1.0;
  std::vector<RegularityMoment> moments;
  bool all_bounded() const;
};

/// Weighted-coefficient form of iterated regularity on the torus for
/// N in {1, 2, 4, 8}.  Coefficients must be l2-normalized to 1e-10.
TorusRegularityReport check_delta_regularity_torus(std::span<const LatticeCoefficient> coeffs, double h,
                                                   double delta, std::span<const double> omega,
                                                   double bound = 1.0);

}  // namespace causticlab
