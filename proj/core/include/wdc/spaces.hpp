#pragma once

// Source-space specifications, target weights, and quadrature-based norm
// estimators for H^p, A^p_alpha, H^inf, A^{-alpha}, and H^inf_nu.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wdc/analytic.hpp"

namespace wdc::spaces {

enum class SpaceKind { HInf, Growth, Bergman, Hardy };

/// One of the four source spaces. Parameter ranges are enforced by the
/// factories: p > 0 where applicable, alpha > 0 for Growth, alpha > -1
/// for Bergman.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::HInf;
  double p = 0.0;
  double alpha = 0.0;

  static SpaceSpec hinf();
  static SpaceSpec growth(double alpha);
  static SpaceSpec bergman(double p, double alpha);
  static SpaceSpec hardy(double p);

  std::string label() const;
};

/// The common growth parameter of the four spaces:
/// 0 for H^inf, alpha for A^{-alpha}, (alpha+2)/p for A^p_alpha, 1/p for H^p.
double gamma(const SpaceSpec& space);

/// Target weight nu on the disk: either the power weight (1-|z|^2)^beta or a
/// sampled radial table with monotone cubic interpolation. Positive and
/// continuous on the open disk by construction.
class Weight {
 public:
  enum class Form { Power, Sampled };

  static Weight power(double beta);
  static Weight sampled(std::vector<double> radii, std::vector<double> values,
                        std::string label = "sampled");

  Form form() const { return form_; }
  double beta() const { return beta_; }
  const std::string& label() const { return label_; }

  double at_radius(double r) const;
  double operator()(Complex z) const { return at_radius(std::abs(z)); }

 private:
  Weight() = default;
  Form form_ = Form::Power;
  double beta_ = 0.0;
  std::string label_;
  std::vector<double> radii_, values_, slopes_;  // Fritsch-Carlson tangents
};

/// Settings for the integral norms. n_angles must be a power of two >= 64
/// (the circle means use a radix-2 transform); r_max <= 1 - 1e-6.
struct QuadratureConfig {
  int n_angles = 1024;
  int n_radii = 64;
  double r_max = 1.0 - 1e-6;
  int hardy_shells = 20;  // radius ladder r_j = 1 - 2^{-j}

  void validate() const;
};

/// Grid for supremum estimation: shells r_j = 1 - 2^{-j} (plus the origin)
/// crossed with angle counts that double per shell up to max_angles, and an
/// iterated local refinement pass around the running maximizer.
struct DiskGrid {
  int shells = 16;
  int base_angles = 64;
  int max_angles = 1024;
  double refine_r_cap = 1.0 - 1e-7;
  int refine_levels = 40;

  int angles_for_shell(int j) const;
};

/// Values of f on the circle |z| = r at K equidistant angles,
/// theta_j = 2 pi j / K. K must be a power of two.
std::vector<Complex> circle_values(const analytic::TaylorFunction& f, double r,
                                   int K);

/// Nodes and weights for int_0^1 (1-t)^alpha g(t) dt (Gauss-Jacobi rule,
/// Golub-Welsch on the symmetric tridiagonal recurrence matrix).
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadRule gauss_jacobi01(int m, double alpha);

/// sup_{0<r<1} circle mean of |f|^p, to the 1/p. The supremum is taken over
/// the radius ladder and at r = 1, where the stored polynomial extends
/// continuously.
double hardy_norm(const analytic::TaylorFunction& f, double p,
                  const QuadratureConfig& q);

/// Circle means of |f|^p on the ladder radii (nondecreasing in r for
/// analytic f); exposed for the monotonicity property checks.
std::vector<double> hardy_circle_means(const analytic::TaylorFunction& f,
                                       double p, const QuadratureConfig& q);

/// (int_D |f|^p dA_alpha)^{1/p} with dA_alpha = (alpha+1)(1-|z|^2)^alpha dA.
double bergman_norm(const analytic::TaylorFunction& f, double p, double alpha,
                    const QuadratureConfig& q);

/// Result of a supremum sweep. `diverged` is set when an evaluation came
/// back non-finite; the value is then meaningless.
struct SupResult {
  double value = 0.0;
  Complex arg_max{0.0, 0.0};
  bool diverged = false;
};

/// sup_z nu(z)|f(z)| over the grid with local refinement.
SupResult weighted_sup_norm(const std::function<Complex(Complex)>& f,
                            const Weight& nu, const DiskGrid& grid);
SupResult weighted_sup_norm(const analytic::TaylorFunction& f, const Weight& nu,
                            const DiskGrid& grid);

/// Norm of f in the given space; dispatches to the three estimators above
/// (H^inf and A^{-alpha} through weighted_sup_norm).
double norm(const analytic::TaylorFunction& f, const SpaceSpec& space,
            const QuadratureConfig& q);

/// Least-squares fit of log ||p_n|| against log n over n_list.
struct ExponentFit {
  double slope = 0.0;
  double max_residual = 0.0;
  std::vector<int> n_values;
  std::vector<double> norms;
};
ExponentFit monomial_norm_exponent(const SpaceSpec& space,
                                   std::span<const int> n_list,
                                   const QuadratureConfig& q);

/// Empirical lower estimate of the best constant C in
/// |f^{(k)}(z)| <= C ||f||_X / (1-|z|^2)^{k+gamma}: the sup over probes and
/// grid points of the normalized ratio, with a stability check under one
/// grid refinement.
struct GrowthBoundEstimate {
  double constant = 0.0;
  double refined_constant = 0.0;
  double rel_change = 0.0;
  bool stable = false;
  bool diverged = false;
};
GrowthBoundEstimate growth_bound_constant(
    const SpaceSpec& space, int k,
    std::span<const analytic::TaylorFunction> probes, const DiskGrid& grid,
    const QuadratureConfig& q);

}  // namespace wdc::spaces
