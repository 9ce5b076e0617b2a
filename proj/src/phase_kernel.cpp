#include "phase_kernel.hpp"

#include <cmath>

namespace causticlab::detail {

__attribute__((target_clones("avx2", "default"))) void phase_row(const double* t, const double* wr, const double* wi,
                                                                  int n, const double* c, int degree, double inv_h,
                                                                  double& re, double& im) {
  double arg[64];
  for (int i = 0; i < n; ++i) {
    double p = c[degree];
    for (int d = degree - 1; d >= 0; --d) p = p * t[i] + c[d];
    arg[i] = p * inv_h;
  }
  double cs[64];
  double sn[64];
  for (int i = 0; i < n; ++i) cs[i] = std::cos(arg[i]);
  for (int i = 0; i < n; ++i) sn[i] = std::sin(arg[i]);
  double sr = 0.0;
  double si = 0.0;
  for (int i = 0; i < n; ++i) {
    sr += wr[i] * cs[i] - wi[i] * sn[i];
    si += wr[i] * sn[i] + wi[i] * cs[i];
  }
  re += sr;
  im += si;
}

}  // namespace causticlab::detail
