#include "wdc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdc::analytic {

namespace {

constexpr double kAnchorCap = 0.999;  // truncation cost blows up as |a| -> 1
constexpr int kMaxAdaptiveDegree = 200000;

Complex clamp_anchor(Complex a) {
  const double r = std::abs(a);
  if (r <= kAnchorCap) return a;
  return a * (kAnchorCap / r);
}

}  // namespace

TaylorFunction::TaylorFunction(std::vector<Complex> c, std::optional<double> tail)
    : coeffs(std::move(c)), tail_bound(tail) {
  if (coeffs.empty()) coeffs.push_back(Complex{0.0, 0.0});
}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::abs(z) < 1.0)) {
    throw ValidationError(ValidationError::Kind::NotADiskPoint,
                          "point has modulus >= 1, not in the open unit disk");
  }
}

Complex evaluate(const TaylorFunction& f, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

TaylorFunction derivative(const TaylorFunction& f, int k) {
  if (k < 0) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "derivative order must be >= 0");
  }
  if (k == 0) return f;
  const int n = f.degree();
  if (k > n) {
    TaylorFunction zero;
    zero.tail_bound = f.tail_bound;
    return zero;
  }
  std::vector<Complex> out(static_cast<size_t>(n - k) + 1);
  for (int m = 0; m + k <= n; ++m) {
    double factor = 1.0;
    for (int i = 1; i <= k; ++i) factor *= static_cast<double>(m + i);
    out[static_cast<size_t>(m)] = factor * f.coeffs[static_cast<size_t>(m + k)];
  }
  TaylorFunction g(std::move(out));
  g.tail_bound = std::nullopt;  // shift rule does not transport the bound
  return g;
}

TaylorFunction add(const TaylorFunction& f, const TaylorFunction& g) {
  std::vector<Complex> out(std::max(f.coeffs.size(), g.coeffs.size()),
                           Complex{0.0, 0.0});
  for (size_t i = 0; i < f.coeffs.size(); ++i) out[i] += f.coeffs[i];
  for (size_t i = 0; i < g.coeffs.size(); ++i) out[i] += g.coeffs[i];
  TaylorFunction h(std::move(out));
  if (f.tail_bound || g.tail_bound) {
    h.tail_bound = f.tail_bound.value_or(0.0) + g.tail_bound.value_or(0.0);
  }
  return h;
}

TaylorFunction scale(const TaylorFunction& f, Complex c) {
  std::vector<Complex> out(f.coeffs.size());
  for (size_t i = 0; i < f.coeffs.size(); ++i) out[i] = c * f.coeffs[i];
  TaylorFunction h(std::move(out));
  if (f.tail_bound) h.tail_bound = std::abs(c) * *f.tail_bound;
  return h;
}

TaylorFunction multiply(const TaylorFunction& f, const TaylorFunction& g) {
  std::vector<Complex> out(f.coeffs.size() + g.coeffs.size() - 1,
                           Complex{0.0, 0.0});
  for (size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == Complex{0.0, 0.0}) continue;
    for (size_t j = 0; j < g.coeffs.size(); ++j) {
      out[i + j] += f.coeffs[i] * g.coeffs[j];
    }
  }
  TaylorFunction h(std::move(out));
  if (f.tail_bound || g.tail_bound) {
    // |fg - f~ g~| <= |f| tail(g) + |g~| tail(f) on the closed disk;
    // crude sup bounds via coefficient sums.
    double sf = 0.0, sg = 0.0;
    for (const auto& c : f.coeffs) sf += std::abs(c);
    for (const auto& c : g.coeffs) sg += std::abs(c);
    h.tail_bound = f.tail_bound.value_or(0.0) * sg +
                   g.tail_bound.value_or(0.0) * (sf + f.tail_bound.value_or(0.0));
  }
  return h;
}

std::vector<Complex> jet(const TaylorFunction& f, Complex z, int order) {
  std::vector<Complex> out(static_cast<size_t>(order) + 1);
  TaylorFunction d = f;
  out[0] = evaluate(d, z);
  for (int k = 1; k <= order; ++k) {
    d = derivative(d, 1);
    out[static_cast<size_t>(k)] = evaluate(d, z);
  }
  return out;
}

TaylorFunction monomial(int n) {
  if (n < 0) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "monomial degree must be >= 0");
  }
  std::vector<Complex> c(static_cast<size_t>(n) + 1, Complex{0.0, 0.0});
  c.back() = Complex{1.0, 0.0};
  return TaylorFunction(std::move(c));
}

Complex MobiusMap::operator()(Complex z) const {
  return (a_ - z) / (1.0 - std::conj(a_) * z);
}

TaylorFunction MobiusMap::truncated(double tol) const {
  // sigma_a(z) = a - (1-|a|^2) sum_{m>=1} conj(a)^{m-1} z^m
  const double r = std::abs(a_);
  if (r == 0.0) {
    return TaylorFunction({Complex{0.0, 0.0}, Complex{-1.0, 0.0}}, 0.0);
  }
  const double head = (1.0 - r * r);
  int n = 1;
  while (head * std::pow(r, n) / (1.0 - r) > tol && n < kMaxAdaptiveDegree) ++n;
  std::vector<Complex> c(static_cast<size_t>(n) + 1);
  c[0] = a_;
  Complex pw{1.0, 0.0};
  for (int m = 1; m <= n; ++m) {
    c[static_cast<size_t>(m)] = -head * pw;
    pw *= std::conj(a_);
  }
  return TaylorFunction(std::move(c), head * std::pow(r, n) / (1.0 - r));
}

double pseudo_distance(DiskPoint z, DiskPoint w) {
  return std::abs(MobiusMap(z)(w.value()));
}

std::vector<double> binomial_series_coeffs(double s, int count) {
  if (s < 0.0) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "binomial series exponent must be >= 0");
  }
  std::vector<double> c(static_cast<size_t>(std::max(count, 0)), 0.0);
  if (c.empty()) return c;
  c[0] = 1.0;
  if (s == 0.0) return c;
  const double lg_s = std::lgamma(s);
  for (int l = 1; l < count; ++l) {
    c[static_cast<size_t>(l)] =
        std::exp(std::lgamma(l + s) - std::lgamma(l + 1.0) - lg_s);
  }
  return c;
}

TestFunction::TestFunction(Complex a, double gamma, int k)
    : a_(clamp_anchor(a)), gamma_(gamma), k_(k) {
  if (gamma < 0.0) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "test function requires gamma >= 0");
  }
  if (k < 0) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "test function requires k >= 0");
  }
}

Complex TestFunction::value(Complex z) const {
  const double s = 2.0 * gamma_ + static_cast<double>(k_);
  const double norm_factor = std::pow(1.0 - std::norm(a_), gamma_);
  Complex poly{1.0, 0.0};
  for (int i = 0; i < k_; ++i) poly *= (a_ - z);
  if (s == 0.0) return norm_factor * poly;
  return norm_factor * poly * std::pow(1.0 - std::conj(a_) * z, -s);
}

std::vector<Complex> TestFunction::jet(Complex w, int order) const {
  const double s = 2.0 * gamma_ + static_cast<double>(k_);
  const int m = order;

  // (a - z)^k about w: sum_i binom(k, i) (a-w)^{k-i} (-1)^i (z-w)^i.
  std::vector<Complex> poly(static_cast<size_t>(std::min(m, k_)) + 1,
                            Complex{0.0, 0.0});
  {
    std::vector<double> binom(static_cast<size_t>(k_) + 1, 1.0);
    for (int i = 1; i <= k_; ++i) {
      binom[static_cast<size_t>(i)] =
          binom[static_cast<size_t>(i - 1)] * (k_ - i + 1) / i;
    }
    const Complex base = a_ - w;
    for (int i = 0; i <= std::min(m, k_); ++i) {
      Complex pw{1.0, 0.0};
      for (int t = 0; t < k_ - i; ++t) pw *= base;
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      poly[static_cast<size_t>(i)] = binom[static_cast<size_t>(i)] * sign * pw;
    }
  }

  // (1 - conj(a) z)^{-s} about w, ratio q = conj(a)/(1 - conj(a) w).
  std::vector<Complex> series(static_cast<size_t>(m) + 1, Complex{0.0, 0.0});
  if (s == 0.0) {
    series[0] = Complex{1.0, 0.0};
  } else {
    const Complex head = 1.0 - std::conj(a_) * w;
    const Complex lead = std::pow(head, -s);
    const Complex q = std::conj(a_) / head;
    const std::vector<double> coeffs = binomial_series_coeffs(s, m + 1);
    Complex pw{1.0, 0.0};
    for (int l = 0; l <= m; ++l) {
      series[static_cast<size_t>(l)] = lead * coeffs[static_cast<size_t>(l)] * pw;
      pw *= q;
    }
  }

  const double norm_factor = std::pow(1.0 - std::norm(a_), gamma_);
  std::vector<Complex> out(static_cast<size_t>(m) + 1, Complex{0.0, 0.0});
  double factorial = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) factorial *= static_cast<double>(j);
    Complex cj{0.0, 0.0};
    for (int i = 0; i <= std::min(j, k_); ++i) {
      cj += poly[static_cast<size_t>(i)] * series[static_cast<size_t>(j - i)];
    }
    out[static_cast<size_t>(j)] = factorial * norm_factor * cj;
  }
  return out;
}

TaylorFunction TestFunction::truncated(std::optional<int> degree, double tol) const {
  const double s = 2.0 * gamma_ + static_cast<double>(k_);
  const double r = std::abs(a_);
  const double norm_factor = std::pow(1.0 - std::norm(a_), gamma_);

  if (r == 0.0 || s == 0.0) {
    // Exact polynomial: (a - z)^k up to the constant-1 degenerate case.
    TaylorFunction acc = TaylorFunction::constant(Complex{norm_factor, 0.0});
    const TaylorFunction lin({a_, Complex{-1.0, 0.0}});
    for (int i = 0; i < k_; ++i) acc = multiply(acc, lin);
    acc.tail_bound = 0.0;
    return acc;
  }

  int n;
  if (degree) {
    n = std::max(*degree - k_, 0);
  } else {
    const double growth = std::max(s - 1.0, 0.0);
    n = 1;
    while (n < kMaxAdaptiveDegree &&
           (n + 1) * std::log(r) + growth * std::log(n + 1.0) -
                   std::log1p(-r) >
               std::log(tol)) {
      ++n;
    }
  }

  const std::vector<double> coeffs = binomial_series_coeffs(s, n + 1);
  std::vector<Complex> kernel(static_cast<size_t>(n) + 1);
  Complex pw{1.0, 0.0};
  for (int l = 0; l <= n; ++l) {
    kernel[static_cast<size_t>(l)] = coeffs[static_cast<size_t>(l)] * pw;
    pw *= std::conj(a_);
  }
  TaylorFunction acc(std::move(kernel));

  const TaylorFunction lin({a_, Complex{-1.0, 0.0}});
  for (int i = 0; i < k_; ++i) acc = multiply(acc, lin);
  acc = scale(acc, Complex{norm_factor, 0.0});

  // Ratio test tail: terms of the kernel series decay at least like
  // q = r (n+1+s)/(n+2) once q < 1.
  const double q = r * (n + 1 + s) / (n + 2);
  double tail = std::numeric_limits<double>::infinity();
  if (q < 1.0) {
    const double next =
        std::exp(std::lgamma(n + 1 + s) - std::lgamma(n + 2.0) - std::lgamma(s)) *
        std::pow(r, n + 1);
    tail = norm_factor * std::pow(1.0 + r, k_) * next / (1.0 - q);
  }
  acc.tail_bound = tail;
  return acc;
}

TaylorFunction test_function(Complex a, double gamma, int k,
                             std::optional<int> degree) {
  return TestFunction(a, gamma, k).truncated(degree);
}

TaylorFunction proof_probe(Complex w, double gamma, int k,
                           std::optional<int> degree) {
  return TestFunction(w, gamma, k).truncated(degree);
}

}  // namespace wdc::analytic
