#pragma once

// Truncated power series on the unit disk, Moebius automorphisms, and the
// normalized kernel-type test functions used by the operator criteria.

#include <complex>
#include <optional>
#include <vector>

#include "wdc/errors.hpp"

namespace wdc {

using Complex = std::complex<double>;

namespace analytic {

/// Analytic function represented by its Taylor coefficients about 0,
/// c_0..c_N. Immutable value type; coefficient arithmetic is exact up to
/// the stored degree. `tail_bound`, when present, bounds the modulus of the
/// truncation error of the function this series approximates, uniformly on
/// the closed disk.
struct TaylorFunction {
  std::vector<Complex> coeffs{Complex{0.0, 0.0}};
  std::optional<double> tail_bound;

  TaylorFunction() = default;
  explicit TaylorFunction(std::vector<Complex> c,
                          std::optional<double> tail = std::nullopt);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  static TaylorFunction constant(Complex c) { return TaylorFunction({c}); }
};

/// Point strictly inside the unit disk. Construction with |z| >= 1 throws.
class DiskPoint {
 public:
  explicit DiskPoint(Complex z);
  DiskPoint(double re, double im) : DiskPoint(Complex{re, im}) {}

  Complex value() const { return z_; }
  double abs() const { return std::abs(z_); }

 private:
  Complex z_;
};

/// Horner evaluation of the stored coefficients. Valid anywhere (the stored
/// series is a polynomial); callers track tail_bound when the point matters.
Complex evaluate(const TaylorFunction& f, Complex z);
inline Complex evaluate(const TaylorFunction& f, const DiskPoint& z) {
  return evaluate(f, z.value());
}

/// k-th derivative by coefficient shift: coefficient m of the result is
/// ((m+k)!/m!) c_{m+k}. k > degree gives the zero function; k = 0 is f.
TaylorFunction derivative(const TaylorFunction& f, int k);

TaylorFunction add(const TaylorFunction& f, const TaylorFunction& g);
TaylorFunction scale(const TaylorFunction& f, Complex c);
TaylorFunction multiply(const TaylorFunction& f, const TaylorFunction& g);

/// f(z), f'(z), ..., f^{(order)}(z) from the stored series.
std::vector<Complex> jet(const TaylorFunction& f, Complex z, int order);

/// p_n(z) = z^n.
TaylorFunction monomial(int n);

/// The involutive disk automorphism sigma_a(z) = (a - z)/(1 - conj(a) z),
/// exchanging a and 0.
class MobiusMap {
 public:
  explicit MobiusMap(DiskPoint a) : a_(a.value()) {}

  Complex operator()(Complex z) const;
  Complex anchor() const { return a_; }

  /// Series about 0 with tail below `tol` on the closed disk.
  TaylorFunction truncated(double tol = 1e-12) const;

 private:
  Complex a_;
};

inline MobiusMap mobius(DiskPoint a) { return MobiusMap(a); }

/// Pseudohyperbolic distance d(z, w) = |sigma_z(w)|, in [0, 1).
double pseudo_distance(DiskPoint z, DiskPoint w);

/// Coefficients of the binomial series (1 - w)^{-s} = sum_l C_l(s) w^l,
/// C_l(s) = Gamma(l + s)/(l! Gamma(s)), evaluated in log space. s >= 0;
/// s = 0 gives {1, 0, 0, ...}.
std::vector<double> binomial_series_coeffs(double s, int count);

/// Closed form of the normalized test function
///
///   f_a(z) sigma_a(z)^k = (1-|a|^2)^gamma (a-z)^k (1 - conj(a) z)^{-(2 gamma + k)}
///
/// with unit-bounded norm in each source space when gamma is the space
/// parameter. Non-integer powers use the principal branch, single-valued
/// since Re(1 - conj(a) z) > 0 on the disk. |a| is capped at 0.999 at
/// construction; gamma < 0 is rejected.
class TestFunction {
 public:
  TestFunction(Complex a, double gamma, int k);

  Complex anchor() const { return a_; }
  double gamma() const { return gamma_; }
  int vanishing_order() const { return k_; }

  Complex value(Complex z) const;

  /// Derivatives g(w), g'(w), ..., g^{(order)}(w) computed from a local
  /// re-expansion of the closed form about w, so the interpolation data at
  /// the anchor (zeros of order k) comes out exact rather than as a
  /// cancellation of large series terms.
  std::vector<Complex> jet(Complex w, int order) const;

  /// Series about 0. Degree is adaptive unless forced: the smallest N with
  /// |a|^{N+1} (N+1)^{max(2 gamma + k - 1, 0)} / (1-|a|) below `tol`.
  TaylorFunction truncated(std::optional<int> degree = std::nullopt,
                           double tol = 1e-10) const;

 private:
  Complex a_;
  double gamma_;
  int k_;
};

/// Truncated series of f_a sigma_a^k (see TestFunction).
TaylorFunction test_function(Complex a, double gamma, int k,
                             std::optional<int> degree = std::nullopt);

/// Probe g_k = f_w sigma_w^k anchored at w. Satisfies g_k^{(j)}(w) = 0 for
/// j < k and |g_k^{(k)}(w)| = k!/(1-|w|^2)^{k+gamma}; the exact jet at the
/// anchor is available through TestFunction::jet.
TaylorFunction proof_probe(Complex w, double gamma, int k,
                           std::optional<int> degree = std::nullopt);

}  // namespace analytic
}  // namespace wdc
