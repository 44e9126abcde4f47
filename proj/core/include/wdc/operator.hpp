#pragma once

// The finite sum of weighted differentiation composition operators
// S f = sum_{k=0}^n u_k (f^{(k)} o tau), its pointwise application, self-map
// validation, and probe-based operator-norm lower bounds.

#include <optional>
#include <span>
#include <vector>

#include "wdc/analytic.hpp"
#include "wdc/spaces.hpp"

namespace wdc::ops {

/// Result of the self-map sweep. `boundary_touching` records whether the
/// estimated sup reaches 1 (within 1e-6); downstream compactness logic
/// consumes the distinction.
struct SelfMapCheck {
  double tau_sup = 0.0;
  bool boundary_touching = false;
  Complex arg_max{0.0, 0.0};
};

/// Estimates sup_{|z|<1} |tau(z)|. The stored series is a polynomial, so the
/// sup equals the boundary-circle maximum; an angle-refined circle scan
/// computes it. Throws ValidationError(SelfMapViolation) when the estimate
/// exceeds 1 + 1e-9.
SelfMapCheck self_map_check(const analytic::TaylorFunction& tau,
                            const spaces::DiskGrid& grid = {});

/// S^n_{u,tau}: order n, symbols u_0..u_n, self-map tau. Immutable after
/// validation; `validated` runs the self-map check and caches its result.
struct OperatorSpec {
  std::vector<analytic::TaylorFunction> symbols;
  analytic::TaylorFunction tau;
  double tau_sup = 0.0;
  bool boundary_touching = false;

  int order() const { return static_cast<int>(symbols.size()) - 1; }

  static OperatorSpec validated(std::vector<analytic::TaylorFunction> symbols,
                                analytic::TaylorFunction tau,
                                const spaces::DiskGrid& grid = {});

  /// Single-term operator D^k_{u_k,tau}: same order, all other symbols zero.
  OperatorSpec term(int k) const;
};

/// (S f)(z) = sum_k u_k(z) f^{(k)}(tau(z)).
Complex apply(const OperatorSpec& S, const analytic::TaylorFunction& f,
              Complex z);
/// Same, with derivatives taken from the closed form of the test function.
Complex apply(const OperatorSpec& S, const analytic::TestFunction& f,
              Complex z);

/// One source function prepared for repeated application: derivative series
/// (or the closed form) are fixed once. Keeps grid sweeps O(points).
class Applied {
 public:
  Applied(const OperatorSpec& S, const analytic::TaylorFunction& f);
  Applied(const OperatorSpec& S, analytic::TestFunction f);

  Complex operator()(Complex z) const;

 private:
  const OperatorSpec* op_;
  std::vector<analytic::TaylorFunction> derivs_;
  std::optional<analytic::TestFunction> closed_;
};

/// ||S f||_nu = sup_z nu(z) |(S f)(z)| over the grid.
spaces::SupResult target_norm(const OperatorSpec& S,
                              const analytic::TaylorFunction& f,
                              const spaces::Weight& nu,
                              const spaces::DiskGrid& grid);
spaces::SupResult target_norm(const OperatorSpec& S,
                              const analytic::TestFunction& f,
                              const spaces::Weight& nu,
                              const spaces::DiskGrid& grid);

/// max over probes of ||S f||_nu / ||f||_X; monotone in the probe set.
/// Probes with ||f||_X < 1e-12 are rejected.
double operator_norm_lower_bound(
    const OperatorSpec& S, const spaces::SpaceSpec& space,
    const spaces::Weight& nu,
    std::span<const analytic::TaylorFunction> probes,
    const spaces::DiskGrid& grid, const spaces::QuadratureConfig& q);

/// The probe family the criteria use: monomials p_n (n <= n_cap) and
/// f_a sigma_a^k for a on a small shell grid (|a| <= 0.95), k <= order,
/// with gamma the source-space parameter.
std::vector<analytic::TaylorFunction> default_probe_family(int order,
                                                           double gamma,
                                                           int n_cap = 64);

}  // namespace wdc::ops
