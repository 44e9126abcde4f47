#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wdc/operator.hpp"

using namespace wdc;
using namespace wdc::ops;
using analytic::monomial;
using analytic::TaylorFunction;
using analytic::TestFunction;

namespace {

TaylorFunction constant(double c) {
  return TaylorFunction::constant(Complex{c, 0.0});
}

TaylorFunction identity_map() {
  return TaylorFunction({Complex{0.0, 0.0}, Complex{1.0, 0.0}});
}

TaylorFunction half_map() {
  return TaylorFunction({Complex{0.0, 0.0}, Complex{0.5, 0.0}});
}

double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("self-map check: strict, touching, violating") {
  const SelfMapCheck ident = self_map_check(identity_map());
  CHECK(rel(ident.tau_sup, 1.0) < 1e-9);
  CHECK(ident.boundary_touching);

  const SelfMapCheck half = self_map_check(half_map());
  CHECK(rel(half.tau_sup, 0.5) < 1e-9);
  CHECK_FALSE(half.boundary_touching);

  // (z^2 + z)/2 reaches modulus 1 only at z = 1.
  const TaylorFunction parab(
      {Complex{0.0, 0.0}, Complex{0.5, 0.0}, Complex{0.5, 0.0}});
  const SelfMapCheck pb = self_map_check(parab);
  CHECK(rel(pb.tau_sup, 1.0) < 1e-9);
  CHECK(pb.boundary_touching);
  CHECK(std::abs(pb.arg_max - Complex{1.0, 0.0}) < 1e-6);

  const TaylorFunction big({Complex{0.0, 0.0}, Complex{1.1, 0.0}});
  CHECK_THROWS_AS(self_map_check(big), ValidationError);
  try {
    self_map_check(big);
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ValidationError::Kind::SelfMapViolation);
  }
}

TEST_CASE("operator validation") {
  CHECK_THROWS_AS(OperatorSpec::validated({}, identity_map()), ValidationError);
  const OperatorSpec S = OperatorSpec::validated({constant(1.0)}, half_map());
  CHECK(S.order() == 0);
  CHECK_FALSE(S.boundary_touching);
  CHECK_THROWS_AS(
      OperatorSpec::validated({constant(1.0)},
                              TaylorFunction({Complex{0.9, 0.0},
                                              Complex{0.3, 0.0}})),
      ValidationError);
}

TEST_CASE("apply: identity, differentiation term, constants") {
  const OperatorSpec ident =
      OperatorSpec::validated({constant(1.0)}, identity_map());
  const TaylorFunction f({{1.0, 0.0}, {2.0, 0.5}, {0.0, -1.0}});
  const Complex z{0.3, 0.0};
  CHECK(std::abs(apply(ident, f, z) - evaluate(f, z)) < 1e-15);

  const OperatorSpec d1 =
      OperatorSpec::validated({constant(0.0), constant(1.0)}, half_map());
  CHECK(std::abs(apply(d1, monomial(2), Complex{0.4, 0.0}) -
                 Complex{0.4, 0.0}) < 1e-15);

  const OperatorSpec generic = OperatorSpec::validated(
      {TaylorFunction({{0.5, 0.0}, {1.0, 0.0}}), monomial(2)}, half_map());
  // Constants kill every derivative term.
  const Complex w{0.2, 0.6};
  CHECK(std::abs(apply(generic, monomial(0), w) -
                 evaluate(generic.symbols[0], w)) < 1e-15);
}

TEST_CASE("apply is linear") {
  const OperatorSpec S = OperatorSpec::validated(
      {TaylorFunction({{0.3, 0.1}, {1.0, 0.0}}), monomial(1), constant(0.7)},
      half_map());
  const TaylorFunction f({{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}, {0.0, -1.0}});
  const TaylorFunction g({{0.5, 0.5}, {-1.0, 0.0}, {0.0, 0.0}, {2.0, 1.0}});
  const Complex a{2.0, -1.0}, b{-0.5, 0.25};
  for (Complex z : {Complex{0.2, 0.3}, Complex{-0.7, 0.1}}) {
    const Complex lhs = apply(S, analytic::add(analytic::scale(f, a),
                                               analytic::scale(g, b)), z);
    const Complex rhs = a * apply(S, f, z) + b * apply(S, g, z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("apply decomposes into single-term operators") {
  const OperatorSpec S = OperatorSpec::validated(
      {TaylorFunction({{0.3, 0.1}, {1.0, 0.0}}), monomial(1),
       TaylorFunction({{0.0, 0.0}, {0.0, 0.5}})},
      TaylorFunction({Complex{0.1, 0.0}, Complex{0.6, 0.0}}));
  const TaylorFunction f({{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}, {0.0, -1.0}});
  for (Complex z : {Complex{0.5, -0.2}, Complex{0.0, 0.0}, Complex{-0.3, 0.8}}) {
    Complex total{0.0, 0.0};
    for (int k = 0; k <= S.order(); ++k) {
      total += apply(S.term(k), f, z);
    }
    const Complex whole = apply(S, f, z);
    CHECK(std::abs(total - whole) <= 1e-12 * std::max(1.0, std::abs(whole)));
  }
}

TEST_CASE("prepared application agrees with apply") {
  const OperatorSpec S = OperatorSpec::validated(
      {monomial(1), constant(2.0)}, half_map());
  const TaylorFunction f({{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}});
  const Applied series(S, f);
  const TestFunction tf(Complex{0.4, 0.3}, 1.0, 1);
  const Applied closed(S, tf);
  for (Complex z : {Complex{0.3, 0.4}, Complex{-0.6, 0.0}}) {
    CHECK(std::abs(series(z) - apply(S, f, z)) < 1e-14);
    CHECK(std::abs(closed(z) - apply(S, tf, z)) < 1e-14);
  }
}

TEST_CASE("closed-form and series routes agree on test functions") {
  const OperatorSpec S = OperatorSpec::validated(
      {monomial(1), constant(1.0)}, half_map());
  const TestFunction tf(Complex{0.6, -0.2}, 0.75, 1);
  const TaylorFunction series = tf.truncated();
  for (Complex z : {Complex{0.25, 0.5}, Complex{-0.8, 0.1}}) {
    const Complex a = apply(S, tf, z);
    const Complex b = apply(S, series, z);
    CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("target norm") {
  const spaces::DiskGrid grid;
  const OperatorSpec ident =
      OperatorSpec::validated({constant(1.0)}, identity_map());
  const spaces::SupResult one =
      target_norm(ident, monomial(0), spaces::Weight::power(0.0), grid);
  CHECK(rel(one.value, 1.0) < 1e-9);

  for (int n : {2, 8, 32}) {
    const spaces::SupResult got =
        target_norm(ident, monomial(n), spaces::Weight::power(1.0), grid);
    CHECK(rel(got.value, oracles::power_weight_monomial_sup(n, 1.0)) < 1e-4);
  }

  const OperatorSpec zero =
      OperatorSpec::validated({constant(0.0), constant(0.0)}, half_map());
  const spaces::SupResult z =
      target_norm(zero, monomial(3), spaces::Weight::power(0.5), grid);
  CHECK(z.value == 0.0);
}

TEST_CASE("operator norm lower bound") {
  const spaces::DiskGrid grid;
  const spaces::QuadratureConfig quad;

  const OperatorSpec zero =
      OperatorSpec::validated({constant(0.0)}, identity_map());
  std::vector<TaylorFunction> p0 = {monomial(0)};
  CHECK(operator_norm_lower_bound(zero, spaces::SpaceSpec::hinf(),
                                  spaces::Weight::power(0.0), p0, grid,
                                  quad) == 0.0);

  const OperatorSpec ident =
      OperatorSpec::validated({constant(1.0)}, identity_map());
  std::vector<TaylorFunction> pns;
  for (int n : {0, 1, 2, 4, 8, 16, 32, 64}) pns.push_back(monomial(n));
  const double ratio = operator_norm_lower_bound(
      ident, spaces::SpaceSpec::hinf(), spaces::Weight::power(0.0), pns, grid,
      quad);
  CHECK(rel(ratio, 1.0) < 1e-6);

  const OperatorSpec doubler =
      OperatorSpec::validated({constant(2.0)}, identity_map());
  CHECK(rel(operator_norm_lower_bound(doubler, spaces::SpaceSpec::hinf(),
                                      spaces::Weight::power(0.0), p0, grid,
                                      quad),
            2.0) < 1e-9);

  // Monotone in the probe set.
  const OperatorSpec S = OperatorSpec::validated(
      {monomial(1), constant(1.0)}, half_map());
  std::vector<TaylorFunction> small = {monomial(0), monomial(1)};
  std::vector<TaylorFunction> large = small;
  for (const TaylorFunction& f : default_probe_family(S.order(), 0.5, 16)) {
    large.push_back(f);
  }
  const auto X = spaces::SpaceSpec::hardy(2.0);
  const auto nu = spaces::Weight::power(1.0);
  const double lo = operator_norm_lower_bound(S, X, nu, small, grid, quad);
  const double hi = operator_norm_lower_bound(S, X, nu, large, grid, quad);
  CHECK(hi >= lo - 1e-12);

  // Degenerate probes are rejected.
  std::vector<TaylorFunction> null_probe = {constant(0.0)};
  CHECK_THROWS_AS(operator_norm_lower_bound(ident, spaces::SpaceSpec::hinf(),
                                            spaces::Weight::power(0.0),
                                            null_probe, grid, quad),
                  ValidationError);
}
