#pragma once

// Independent oracles for the test suites. Everything here is computed by
// direct summation, closed-form calculus, or finite differences, never
// through the library's own quadrature/sup machinery.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;

// Binomial series coefficients C_l(s) = Gamma(l+s)/(l! Gamma(s)) by the
// ratio recurrence C_l = C_{l-1} (l-1+s)/l (independent of the log-gamma
// route used by the library).
inline std::vector<double> binom_series_recurrence(double s, int count) {
  std::vector<double> c(static_cast<size_t>(count), 0.0);
  if (count == 0) return c;
  c[0] = 1.0;
  for (int l = 1; l < count; ++l) {
    c[static_cast<size_t>(l)] =
        c[static_cast<size_t>(l - 1)] * (l - 1 + s) / l;
  }
  return c;
}

// Boundary integral int |1 - conj(a) zeta|^{-2s} dm(zeta) by direct
// summation: sum_l C_l(s)^2 |a|^{2l}. The s = 1 case is the Poisson kernel
// normalization 1/(1-|a|^2).
inline double boundary_kernel_integral(double abs_a, double s, double tol = 1e-16) {
  double acc = 0.0, c = 1.0;
  const double a2 = abs_a * abs_a;
  double pw = 1.0;
  for (int l = 0; l < 2000000; ++l) {
    const double term = c * c * pw;
    acc += term;
    if (l > 8 && term < tol * acc) break;
    c *= (l + s) / (l + 1);
    pw *= a2;
  }
  return acc;
}

// Area integral int_D |1 - conj(a) z|^{-2s} dA_alpha(z) by direct summation:
// sum_l C_l(s)^2 |a|^{2l} Gamma(alpha+2) l! / Gamma(l+alpha+2).
inline double bergman_kernel_integral(double abs_a, double s, double alpha,
                                      double tol = 1e-16) {
  double acc = 0.0, c = 1.0;
  const double a2 = abs_a * abs_a;
  double pw = 1.0;
  double moment = 1.0;  // Gamma(alpha+2) l! / Gamma(l+alpha+2), l = 0
  for (int l = 0; l < 2000000; ++l) {
    const double term = c * c * pw * moment;
    acc += term;
    if (l > 8 && term < tol * acc) break;
    c *= (l + s) / (l + 1);
    pw *= a2;
    moment *= (l + 1.0) / (l + alpha + 2.0);
  }
  return acc;
}

// Exact maximum of (1-r^2)^beta r^n over r in [0, 1].
inline double power_weight_monomial_sup(int n, double beta) {
  if (beta == 0.0) return 1.0;
  if (n == 0) return 1.0;
  const double r2 = static_cast<double>(n) / (n + 2.0 * beta);
  return std::pow(1.0 - r2, beta) * std::pow(r2, n / 2.0);
}

// k-th derivative along the real direction by 4th-order central stencils
// with one Richardson step. Good to ~1e-8 relative on polynomial data.
inline Complex fd_derivative(const std::function<Complex(Complex)>& f,
                             Complex z, int k, double h = 0.05) {
  const auto stencil = [&](double step) -> Complex {
    const auto at = [&](int offset) { return f(z + step * offset); };
    switch (k) {
      case 0:
        return f(z);
      case 1:
        return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step);
      case 2:
        return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) /
               (12.0 * step * step);
      case 3:
        return (-at(3) + 8.0 * at(2) - 13.0 * at(1) + 13.0 * at(-1) -
                8.0 * at(-2) + at(-3)) /
               (8.0 * step * step * step);
      case 4:
        return (-at(3) + 12.0 * at(2) - 39.0 * at(1) + 56.0 * at(0) -
                39.0 * at(-1) + 12.0 * at(-2) - at(-3)) /
               (6.0 * step * step * step * step);
      default:
        return Complex{0.0, 0.0};
    }
  };
  // Richardson: error ~ h^4, so (16 D(h/2) - D(h)) / 15 kills the lead term.
  return (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0;
}

}  // namespace oracles
