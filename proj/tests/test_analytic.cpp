#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wdc/analytic.hpp"

using namespace wdc;
using namespace wdc::analytic;

namespace {

double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("evaluate: Horner on stored coefficients") {
  CHECK(evaluate(TaylorFunction::constant({3.0, 0.0}), Complex{0.5, 0.0}) ==
        Complex{3.0, 0.0});

  CHECK(std::abs(evaluate(monomial(2), Complex{0.0, 0.5}) -
                 Complex{-0.25, 0.0}) < 1e-15);

  TaylorFunction ones(std::vector<Complex>(11, Complex{1.0, 0.0}));
  CHECK(std::abs(evaluate(ones, Complex{0.5, 0.0}) -
                 Complex{1.9990234375, 0.0}) < 1e-12);

  CHECK(evaluate(ones, Complex{0.0, 0.0}) == ones.coeffs[0]);
}

TEST_CASE("derivative: coefficient shift rule") {
  CHECK(std::abs(evaluate(derivative(monomial(3), 3), Complex{0.3, 0.2}) -
                 Complex{6.0, 0.0}) < 1e-15);

  for (int n : {1, 2, 5, 9}) {
    const TaylorFunction d = derivative(monomial(n), 1);
    CHECK(d.degree() == n - 1);
    const Complex z{0.4, -0.3};
    CHECK(rel_err(evaluate(d, z),
                  static_cast<double>(n) * evaluate(monomial(n - 1), z)) <
          1e-14);
  }

  const TaylorFunction f({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
  CHECK(evaluate(derivative(f, 2), Complex{0.9, 0.0}) == Complex{6.0, 0.0});

  CHECK(derivative(f, 5).degree() == 0);
  CHECK(evaluate(derivative(f, 5), Complex{0.5, 0.0}) == Complex{0.0, 0.0});
  CHECK(derivative(f, 0).coeffs == f.coeffs);

  CHECK(std::abs(evaluate(derivative(monomial(5), 5), Complex{0.0, 0.0}) -
                 Complex{120.0, 0.0}) < 1e-12);
}

TEST_CASE("derivative matches finite differences on polynomials") {
  const TaylorFunction f(
      {{1.0, 0.5}, {-2.0, 0.0}, {0.0, 1.0}, {3.0, -1.0}, {0.5, 0.5}, {1.0, 0.0}});
  const auto eval = [&](Complex z) { return evaluate(f, z); };
  for (int k = 1; k <= 4; ++k) {
    const TaylorFunction dk = derivative(f, k);
    for (Complex z : {Complex{0.2, 0.1}, Complex{-0.3, 0.4}, Complex{0.0, 0.0}}) {
      const Complex want = evaluate(dk, z);
      const Complex got = oracles::fd_derivative(eval, z, k);
      CHECK(rel_err(got, want) < 1e-6);
    }
  }
}

TEST_CASE("arithmetic is exact on coefficients") {
  const TaylorFunction f({{1.0, 0.0}, {2.0, 0.0}});
  const TaylorFunction g({{0.0, 1.0}, {0.0, 0.0}, {4.0, 0.0}});
  const TaylorFunction sum = add(f, g);
  CHECK(sum.coeffs == std::vector<Complex>{{1.0, 1.0}, {2.0, 0.0}, {4.0, 0.0}});

  const TaylorFunction prod = multiply(f, g);
  // (1 + 2z)(i + 4z^2) = i + 2i z + 4 z^2 + 8 z^3
  CHECK(prod.coeffs == std::vector<Complex>{
                           {0.0, 1.0}, {0.0, 2.0}, {4.0, 0.0}, {8.0, 0.0}});

  const TaylorFunction sc = scale(f, Complex{0.0, 2.0});
  CHECK(sc.coeffs == std::vector<Complex>{{0.0, 2.0}, {0.0, 4.0}});
}

TEST_CASE("DiskPoint rejects points outside the open disk") {
  CHECK_NOTHROW(DiskPoint(Complex{0.99, 0.0}));
  CHECK_THROWS_AS(DiskPoint(Complex{1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(DiskPoint(Complex{0.8, 0.7}), ValidationError);
}

TEST_CASE("mobius: anchor exchange and involution") {
  const MobiusMap sigma0 = mobius(DiskPoint(Complex{0.0, 0.0}));
  CHECK(sigma0(Complex{0.3, 0.2}) == Complex{-0.3, -0.2});

  const MobiusMap sigma = mobius(DiskPoint(Complex{0.5, 0.0}));
  CHECK(std::abs(sigma(Complex{0.5, 0.0})) < 1e-15);
  CHECK(std::abs(sigma(Complex{0.0, 0.0}) - Complex{0.5, 0.0}) < 1e-15);

  // Involution on a grid of anchors and points.
  for (double ra : {0.0, 0.3, 0.7, 0.9}) {
    for (double ta : {0.0, 1.0, 2.5}) {
      const Complex a = std::polar(ra, ta);
      const MobiusMap s = mobius(DiskPoint(a));
      for (double rz : {0.0, 0.5, 0.95}) {
        for (double tz : {0.2, 1.7, 4.0}) {
          const Complex z = std::polar(rz, tz);
          CHECK(std::abs(s(s(z)) - z) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("mobius truncation agrees with the closed form") {
  const Complex a{0.6, 0.3};
  const MobiusMap s = mobius(DiskPoint(a));
  const TaylorFunction t = s.truncated();
  REQUIRE(t.tail_bound.has_value());
  for (double r : {0.3, 0.9, 1.0}) {
    const Complex z = std::polar(r, 0.7);
    CHECK(std::abs(evaluate(t, z) - s(z)) <= *t.tail_bound + 1e-14);
  }
}

TEST_CASE("pseudo_distance") {
  CHECK(pseudo_distance(DiskPoint(Complex{0.3, 0.0}),
                        DiskPoint(Complex{0.3, 0.0})) == 0.0);
  CHECK(std::abs(pseudo_distance(DiskPoint(Complex{0.0, 0.0}),
                                 DiskPoint(Complex{0.3, 0.4})) -
                 0.5) < 1e-15);
  CHECK(std::abs(pseudo_distance(DiskPoint(Complex{0.5, 0.0}),
                                 DiskPoint(Complex{-0.5, 0.0})) -
                 0.8) < 1e-15);
  // Symmetry.
  const DiskPoint z(Complex{0.2, 0.6});
  const DiskPoint w(Complex{-0.4, 0.1});
  CHECK(std::abs(pseudo_distance(z, w) - pseudo_distance(w, z)) < 1e-15);
}

TEST_CASE("test_function: closed-form values and degenerate cases") {
  // gamma = 0, k = 0 is the constant 1.
  const TaylorFunction one = test_function(Complex{0.0, 0.0}, 0.5, 0);
  CHECK(one.degree() == 0);
  CHECK(one.coeffs[0] == Complex{1.0, 0.0});

  const TaylorFunction f = test_function(Complex{0.5, 0.0}, 1.0, 0);
  CHECK(std::abs(evaluate(f, Complex{0.0, 0.0}) - Complex{0.75, 0.0}) < 1e-12);

  const TaylorFunction g = test_function(Complex{0.5, 0.0}, 0.0, 2);
  CHECK(std::abs(evaluate(g, Complex{0.5, 0.0})) < 1e-12);

  CHECK_THROWS_AS(test_function(Complex{0.5, 0.0}, -0.5, 0), ValidationError);
  CHECK_THROWS_AS(TestFunction(Complex{0.5, 0.0}, 1.0, -1), ValidationError);
}

TEST_CASE("test_function series matches the closed form within tail_bound") {
  for (double gamma : {0.0, 0.5, 1.5}) {
    for (int k : {0, 1, 3}) {
      const TestFunction tf(Complex{0.7, -0.4}, gamma, k);
      const TaylorFunction series = tf.truncated();
      REQUIRE(series.tail_bound.has_value());
      // Slack for Horner rounding across a few hundred terms.
      for (double r : {0.2, 0.8, 1.0}) {
        const Complex z = std::polar(r, 1.1);
        CHECK(std::abs(evaluate(series, z) - tf.value(z)) <=
              *series.tail_bound + 1e-9);
      }
    }
  }
}

TEST_CASE("expansion identity: kernel coefficients match log-gamma form") {
  const Complex a{0.62, 0.35};
  const double gamma = 0.75;
  const TaylorFunction f = test_function(a, gamma, 0);
  const double head = std::pow(1.0 - std::norm(a), gamma);
  const std::vector<double> ref =
      oracles::binom_series_recurrence(2.0 * gamma, f.degree() + 1);
  for (int l = 0; l <= f.degree(); ++l) {
    const Complex want = head * ref[static_cast<size_t>(l)] *
                         std::pow(std::conj(a), static_cast<double>(l));
    CHECK(rel_err(f.coeffs[static_cast<size_t>(l)], want) < 1e-10);
  }
}

TEST_CASE("proof probe: derivative interpolation data at the anchor") {
  const Complex anchors[] = {Complex{0.0, 0.0}, Complex{0.3, 0.0},
                             std::polar(0.6, std::numbers::pi / 3.0),
                             Complex{0.9, 0.0}};
  for (Complex w : anchors) {
    for (double gamma : {0.0, 0.5, 1.0, 2.0}) {
      for (int k = 0; k <= 4; ++k) {
        const TestFunction probe(w, gamma, k);
        const std::vector<Complex> jet_at_w = probe.jet(w, k);
        double kfac = 1.0;
        for (int i = 2; i <= k; ++i) kfac *= i;
        const double scale = kfac / std::pow(1.0 - std::norm(w), k + gamma);
        for (int j = 0; j < k; ++j) {
          CHECK(std::abs(jet_at_w[static_cast<size_t>(j)]) < 1e-8 * scale);
        }
        CHECK(std::abs(std::abs(jet_at_w[static_cast<size_t>(k)]) - scale) <
              1e-6 * scale);
        if (k == 0) {
          const double want = std::pow(1.0 - std::norm(w), -gamma);
          CHECK(std::abs(jet_at_w[0] - Complex{want, 0.0}) < 1e-12 * want);
        }
      }
    }
  }
}

TEST_CASE("closed-form jet agrees with the series jet away from the anchor") {
  const TestFunction tf(Complex{0.5, 0.2}, 1.0, 2);
  const TaylorFunction series = tf.truncated();
  for (Complex z : {Complex{0.1, -0.3}, Complex{-0.6, 0.2}}) {
    const std::vector<Complex> closed = tf.jet(z, 3);
    const std::vector<Complex> direct = analytic::jet(series, z, 3);
    for (int j = 0; j <= 3; ++j) {
      CHECK(rel_err(direct[static_cast<size_t>(j)],
                    closed[static_cast<size_t>(j)]) < 1e-8);
    }
  }
}

TEST_CASE("monomial basics") {
  CHECK(monomial(0).coeffs == std::vector<Complex>{{1.0, 0.0}});
  CHECK(std::abs(evaluate(monomial(3), Complex{0.5, 0.0}) -
                 Complex{0.125, 0.0}) < 1e-15);
  CHECK_THROWS_AS(monomial(-1), ValidationError);
}

TEST_CASE("binomial series coefficients: s = 0 and positivity") {
  const auto c = binomial_series_coeffs(0.0, 5);
  CHECK(c == std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0});
  const auto d = binomial_series_coeffs(2.5, 400);
  for (double v : d) CHECK(v > 0.0);
  CHECK_THROWS_AS(binomial_series_coeffs(-1.0, 3), ValidationError);
}
