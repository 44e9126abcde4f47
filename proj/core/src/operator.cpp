#include "wdc/operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wdc::ops {

using analytic::TaylorFunction;
using analytic::TestFunction;

namespace {

constexpr double kSelfMapSlack = 1e-9;
constexpr double kBoundaryBand = 1e-6;

int next_pow2(int n) {
  int k = 1;
  while (k < n) k <<= 1;
  return k;
}

}  // namespace

SelfMapCheck self_map_check(const TaylorFunction& tau,
                            const spaces::DiskGrid& grid) {
  const int K =
      next_pow2(std::max(grid.max_angles, 4 * std::max(tau.degree(), 1) + 1));
  const std::vector<Complex> vals = spaces::circle_values(tau, 1.0, K);

  SelfMapCheck check;
  double best_theta = 0.0;
  const double dtheta = 2.0 * std::numbers::pi / K;
  for (int m = 0; m < K; ++m) {
    const double v = std::abs(vals[static_cast<size_t>(m)]);
    if (v > check.tau_sup) {
      check.tau_sup = v;
      best_theta = m * dtheta;
    }
  }
  // Angle zoom on the boundary circle around the running maximizer.
  double dth = dtheta;
  for (int level = 0; level < 40; ++level) {
    for (int j = -2; j <= 2; ++j) {
      const double th = best_theta + j * (dth / 2.0);
      const double v = std::abs(evaluate(tau, std::polar(1.0, th)));
      if (v > check.tau_sup) {
        check.tau_sup = v;
        best_theta = th;
      }
    }
    dth /= 2.0;
  }
  check.arg_max = std::polar(1.0, best_theta);

  const double slack = kSelfMapSlack + tau.tail_bound.value_or(0.0);
  if (check.tau_sup > 1.0 + slack) {
    throw ValidationError(
        ValidationError::Kind::SelfMapViolation,
        "self-map check failed: sup |tau| = " + std::to_string(check.tau_sup));
  }
  check.tau_sup = std::min(check.tau_sup, 1.0);
  check.boundary_touching = check.tau_sup >= 1.0 - kBoundaryBand;
  return check;
}

OperatorSpec OperatorSpec::validated(std::vector<TaylorFunction> symbols,
                                     TaylorFunction tau,
                                     const spaces::DiskGrid& grid) {
  if (symbols.empty()) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "operator needs at least the k = 0 symbol");
  }
  const SelfMapCheck check = self_map_check(tau, grid);
  OperatorSpec spec;
  spec.symbols = std::move(symbols);
  spec.tau = std::move(tau);
  spec.tau_sup = check.tau_sup;
  spec.boundary_touching = check.boundary_touching;
  return spec;
}

OperatorSpec OperatorSpec::term(int k) const {
  if (k < 0 || k > order()) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "term index outside 0..n");
  }
  OperatorSpec t = *this;
  for (int i = 0; i <= order(); ++i) {
    if (i != k) t.symbols[static_cast<size_t>(i)] = TaylorFunction{};
  }
  return t;
}

Complex apply(const OperatorSpec& S, const TaylorFunction& f, Complex z) {
  const Complex w = evaluate(S.tau, z);
  const std::vector<Complex> derivs = analytic::jet(f, w, S.order());
  Complex acc{0.0, 0.0};
  for (int k = 0; k <= S.order(); ++k) {
    acc += evaluate(S.symbols[static_cast<size_t>(k)], z) *
           derivs[static_cast<size_t>(k)];
  }
  return acc;
}

Complex apply(const OperatorSpec& S, const TestFunction& f, Complex z) {
  const Complex w = evaluate(S.tau, z);
  const std::vector<Complex> derivs = f.jet(w, S.order());
  Complex acc{0.0, 0.0};
  for (int k = 0; k <= S.order(); ++k) {
    acc += evaluate(S.symbols[static_cast<size_t>(k)], z) *
           derivs[static_cast<size_t>(k)];
  }
  return acc;
}

Applied::Applied(const OperatorSpec& S, const TaylorFunction& f) : op_(&S) {
  derivs_.reserve(static_cast<size_t>(S.order()) + 1);
  TaylorFunction d = f;
  derivs_.push_back(d);
  for (int k = 1; k <= S.order(); ++k) {
    d = analytic::derivative(d, 1);
    derivs_.push_back(d);
  }
}

Applied::Applied(const OperatorSpec& S, TestFunction f)
    : op_(&S), closed_(std::move(f)) {}

Complex Applied::operator()(Complex z) const {
  const Complex w = evaluate(op_->tau, z);
  Complex acc{0.0, 0.0};
  if (closed_) {
    const std::vector<Complex> derivs = closed_->jet(w, op_->order());
    for (int k = 0; k <= op_->order(); ++k) {
      acc += evaluate(op_->symbols[static_cast<size_t>(k)], z) *
             derivs[static_cast<size_t>(k)];
    }
  } else {
    for (int k = 0; k <= op_->order(); ++k) {
      acc += evaluate(op_->symbols[static_cast<size_t>(k)], z) *
             evaluate(derivs_[static_cast<size_t>(k)], w);
    }
  }
  return acc;
}

spaces::SupResult target_norm(const OperatorSpec& S, const TaylorFunction& f,
                              const spaces::Weight& nu,
                              const spaces::DiskGrid& grid) {
  const Applied applied(S, f);
  return spaces::weighted_sup_norm(
      [&](Complex z) { return applied(z); }, nu, grid);
}

spaces::SupResult target_norm(const OperatorSpec& S, const TestFunction& f,
                              const spaces::Weight& nu,
                              const spaces::DiskGrid& grid) {
  const Applied applied(S, f);
  return spaces::weighted_sup_norm(
      [&](Complex z) { return applied(z); }, nu, grid);
}

double operator_norm_lower_bound(const OperatorSpec& S,
                                 const spaces::SpaceSpec& space,
                                 const spaces::Weight& nu,
                                 std::span<const TaylorFunction> probes,
                                 const spaces::DiskGrid& grid,
                                 const spaces::QuadratureConfig& q) {
  double best = 0.0;
  for (const TaylorFunction& f : probes) {
    const double nf = spaces::norm(f, space, q);
    if (!(nf >= 1e-12)) {
      throw ValidationError(ValidationError::Kind::ParameterRange,
                            "operator_norm_lower_bound: probe norm below 1e-12");
    }
    const spaces::SupResult target = target_norm(S, f, nu, grid);
    if (target.diverged) {
      return std::numeric_limits<double>::infinity();
    }
    best = std::max(best, target.value / nf);
  }
  return best;
}

std::vector<TaylorFunction> default_probe_family(int order, double gamma,
                                                 int n_cap) {
  std::vector<TaylorFunction> probes;
  for (int n = 0; n <= n_cap; n = (n == 0 ? 1 : 2 * n)) {
    probes.push_back(analytic::monomial(n));
  }
  const double moduli[] = {0.5, 0.75, 0.875, 0.95};
  const double args[] = {0.0, 2.0 * std::numbers::pi / 3.0};
  for (double r : moduli) {
    for (double th : args) {
      const Complex a = std::polar(r, th);
      for (int k = 0; k <= order; ++k) {
        probes.push_back(analytic::test_function(a, gamma, k));
      }
    }
  }
  return probes;
}

}  // namespace wdc::ops
