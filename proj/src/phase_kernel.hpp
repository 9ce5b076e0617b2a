#pragma once

// Inner loop of the oscillatory quadrature, kept in its own translation unit
// so it can be compiled for vectorized sin/cos.

namespace causticlab::detail {

/// Adds sum_i (wr_i + i wi_i) e^{i p(t_i) inv_h} to (re, im), where p has
/// coefficients c[0..degree] in increasing order.  n <= 64.
void phase_row(const double* t, const double* wr, const double* wi, int n, const double* c, int degree, double inv_h,
               double& re, double& im);

}  // namespace causticlab::detail
