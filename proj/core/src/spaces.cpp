#include "wdc/spaces.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wdc::spaces {

using analytic::TaylorFunction;

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int k = 1;
  while (k < n) k <<= 1;
  return k;
}

// In-place radix-2 transform, sign +1: X_j = sum_b y_b exp(+2 pi i b j / K).
void fft_pos(std::vector<Complex>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len);
    const Complex wlen{std::cos(ang), std::sin(ang)};
    for (size_t i = 0; i < n; i += len) {
      Complex w{1.0, 0.0};
      for (size_t j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

int angle_count_for_degree(int base, int degree) {
  // Enough angles that circle means of |f|^p see no aliasing for p <= 4.
  const int want = std::min(2 * degree + 1, 1 << 15);
  return std::max(base, next_pow2(want));
}

double circle_mean_pow(const TaylorFunction& f, double r, int K, double p) {
  const std::vector<Complex> vals = circle_values(f, r, K);
  double acc = 0.0;
  for (const Complex& v : vals) acc += std::pow(std::abs(v), p);
  return acc / static_cast<double>(K);
}

}  // namespace

SpaceSpec SpaceSpec::hinf() { return SpaceSpec{SpaceKind::HInf, 0.0, 0.0}; }

SpaceSpec SpaceSpec::growth(double alpha) {
  if (!(alpha > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "growth space requires alpha > 0");
  }
  return SpaceSpec{SpaceKind::Growth, 0.0, alpha};
}

SpaceSpec SpaceSpec::bergman(double p, double alpha) {
  if (!(p > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "Bergman space requires p > 0");
  }
  if (!(alpha > -1.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "Bergman space requires alpha > -1");
  }
  return SpaceSpec{SpaceKind::Bergman, p, alpha};
}

SpaceSpec SpaceSpec::hardy(double p) {
  if (!(p > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "Hardy space requires p > 0");
  }
  return SpaceSpec{SpaceKind::Hardy, p, 0.0};
}

std::string SpaceSpec::label() const {
  switch (kind) {
    case SpaceKind::HInf:
      return "Hinf";
    case SpaceKind::Growth:
      return "A^-" + std::to_string(alpha);
    case SpaceKind::Bergman:
      return "A^" + std::to_string(p) + "_" + std::to_string(alpha);
    case SpaceKind::Hardy:
      return "H^" + std::to_string(p);
  }
  return "?";
}

double gamma(const SpaceSpec& space) {
  switch (space.kind) {
    case SpaceKind::HInf:
      return 0.0;
    case SpaceKind::Growth:
      return space.alpha;
    case SpaceKind::Bergman:
      return (space.alpha + 2.0) / space.p;
    case SpaceKind::Hardy:
      return 1.0 / space.p;
  }
  return 0.0;
}

Weight Weight::power(double beta) {
  if (!(beta >= 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "power weight requires beta >= 0");
  }
  Weight w;
  w.form_ = Form::Power;
  w.beta_ = beta;
  w.label_ = "(1-|z|^2)^" + std::to_string(beta);
  return w;
}

Weight Weight::sampled(std::vector<double> radii, std::vector<double> values,
                       std::string label) {
  if (radii.size() != values.size() || radii.size() < 2) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "sampled weight needs >= 2 matching samples");
  }
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || !(radii[i] <= 1.0) ||
        (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ValidationError(ValidationError::Kind::ParameterRange,
                            "sampled weight radii must increase in [0, 1]");
    }
    if (!(values[i] > 0.0)) {
      throw ValidationError(ValidationError::Kind::ParameterRange,
                            "sampled weight values must be positive");
    }
  }

  Weight w;
  w.form_ = Form::Sampled;
  w.label_ = std::move(label);
  w.radii_ = std::move(radii);
  w.values_ = std::move(values);

  // Fritsch-Carlson tangents: monotone on each interval, hence the
  // interpolant stays within the (positive) sample range.
  const size_t n = w.radii_.size();
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    d[i] = (w.values_[i + 1] - w.values_[i]) / (w.radii_[i + 1] - w.radii_[i]);
  }
  w.slopes_.assign(n, 0.0);
  w.slopes_[0] = d[0];
  w.slopes_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    w.slopes_[i] = (d[i - 1] * d[i] > 0.0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      w.slopes_[i] = w.slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = w.slopes_[i] / d[i];
    const double b = w.slopes_[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      w.slopes_[i] = tau * a * d[i];
      w.slopes_[i + 1] = tau * b * d[i];
    }
  }
  return w;
}

double Weight::at_radius(double r) const {
  if (form_ == Form::Power) {
    const double base = std::max(1.0 - r * r, 0.0);
    return std::pow(base, beta_);
  }
  if (r <= radii_.front()) return values_.front();
  if (r >= radii_.back()) return values_.back();
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  const size_t i = static_cast<size_t>(it - radii_.begin()) - 1;
  const double h = radii_[i + 1] - radii_[i];
  const double t = (r - radii_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return values_[i] * (2 * t3 - 3 * t2 + 1) + h * slopes_[i] * (t3 - 2 * t2 + t) +
         values_[i + 1] * (-2 * t3 + 3 * t2) + h * slopes_[i + 1] * (t3 - t2);
}

void QuadratureConfig::validate() const {
  if (n_angles < 64 || !is_pow2(n_angles)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "n_angles must be a power of two >= 64");
  }
  if (n_radii < 1) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "n_radii must be >= 1");
  }
  if (!(r_max <= 1.0 - 1e-6) || !(r_max > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "r_max must lie in (0, 1 - 1e-6]");
  }
  if (hardy_shells < 4) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "hardy_shells must be >= 4");
  }
}

int DiskGrid::angles_for_shell(int j) const {
  long k = base_angles;
  for (int i = 1; i < j && k < max_angles; ++i) k *= 2;
  return static_cast<int>(std::min<long>(k, max_angles));
}

std::vector<Complex> circle_values(const TaylorFunction& f, double r, int K) {
  if (!is_pow2(K)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "circle_values needs a power-of-two angle count");
  }
  // Fold c_m r^m into bin m mod K: exp(i m theta_j) depends on m mod K only.
  std::vector<Complex> bins(static_cast<size_t>(K), Complex{0.0, 0.0});
  double rm = 1.0;
  for (size_t m = 0; m < f.coeffs.size(); ++m) {
    bins[m % static_cast<size_t>(K)] += f.coeffs[m] * rm;
    rm *= r;
  }
  fft_pos(bins);
  return bins;
}

QuadRule gauss_jacobi01(int m, double alpha) {
  if (m < 1) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "quadrature rule needs >= 1 node");
  }
  if (!(alpha > -1.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "Jacobi weight requires alpha > -1");
  }
  const double a = alpha, b = 0.0;

  Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
  diag(0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < m; ++k) {
    const double den = (2.0 * k + a + b) * (2.0 * k + a + b + 2.0);
    diag(k) = (b * b - a * a) / den;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    const double den2 = (2.0 * k + a + b) * (2.0 * k + a + b) *
                        (2.0 * k + a + b + 1.0) * (2.0 * k + a + b - 1.0);
    sub(k - 1) = std::sqrt(num / den2);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error("Jacobi quadrature eigensolve failed");
  }

  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) +
                              std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  QuadRule rule;
  rule.nodes.resize(static_cast<size_t>(m));
  rule.weights.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double x = solver.eigenvalues()(i);           // node on [-1, 1]
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<size_t>(i)] = 0.5 * (1.0 + x);
    // Map [-1,1] -> [0,1]: the 2^{a+b+1} of mu0 cancels against the
    // substitution factor, leaving plain Jacobi weights on [0,1].
    rule.weights[static_cast<size_t>(i)] =
        mu0 * v0 * v0 / std::pow(2.0, a + b + 1.0);
  }
  return rule;
}

std::vector<double> hardy_circle_means(const TaylorFunction& f, double p,
                                       const QuadratureConfig& q) {
  if (!(p > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "hardy_norm requires p > 0");
  }
  q.validate();
  const int K = angle_count_for_degree(q.n_angles, f.degree());
  std::vector<double> means;
  means.reserve(static_cast<size_t>(q.hardy_shells) + 1);
  for (int j = 1; j <= q.hardy_shells; ++j) {
    const double r = std::min(1.0 - std::ldexp(1.0, -j), q.r_max);
    means.push_back(circle_mean_pow(f, r, K, p));
  }
  means.push_back(circle_mean_pow(f, 1.0, K, p));  // polynomial boundary values
  for (double v : means) {
    if (!std::isfinite(v)) throw Error("hardy_norm: non-finite circle mean");
  }
  return means;
}

double hardy_norm(const TaylorFunction& f, double p, const QuadratureConfig& q) {
  const std::vector<double> means = hardy_circle_means(f, p, q);
  const double sup = *std::max_element(means.begin(), means.end());
  return std::pow(sup, 1.0 / p);
}

double bergman_norm(const TaylorFunction& f, double p, double alpha,
                    const QuadratureConfig& q) {
  if (!(p > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "bergman_norm requires p > 0");
  }
  if (!(alpha > -1.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "bergman_norm requires alpha > -1");
  }
  q.validate();

  // In t = r^2 the integral is int_0^1 (1-t)^alpha g(t) dt against the
  // circle means g; enough nodes that even p makes the rule exact.
  const int deg = f.degree();
  const int nodes = std::clamp(
      static_cast<int>(std::ceil(p * deg / 4.0)) + 8, q.n_radii, 4096);
  const QuadRule rule = gauss_jacobi01(nodes, alpha);
  const int K = angle_count_for_degree(q.n_angles, deg);

  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] *
           circle_mean_pow(f, std::sqrt(rule.nodes[i]), K, p);
  }
  acc *= (alpha + 1.0);
  if (!std::isfinite(acc)) throw Error("bergman_norm: non-finite integral");
  return std::pow(acc, 1.0 / p);
}

namespace {

// A narrow peak can hide between shells or angle steps, so the refinement
// starts from every shell's own maximizer (they bracket any radially
// localized feature), not only the global coarse best.
struct SupCandidate {
  double value = -1.0;
  double r = 0.0, theta = 0.0;
  double dr = 0.5;      // radial bracket to each side
  double dtheta = kPi;  // angular bracket to each side
};

struct SupState {
  double value = -1.0;
  double r = 0.0, theta = 0.0;
  bool diverged = false;
  Complex bad_point{0.0, 0.0};
};

template <typename EvalFn>
void refine_candidates(SupState& st, const std::vector<SupCandidate>& cands,
                       const EvalFn& eval, const DiskGrid& grid) {
  double coarse_best = 0.0;
  for (const SupCandidate& c : cands) coarse_best = std::max(coarse_best, c.value);
  for (const SupCandidate& c : cands) {
    if (st.diverged) return;
    if (c.value < 1e-3 * coarse_best) continue;  // cold shell
    double r = c.r, th = c.theta, dr = c.dr, dth = c.dtheta;
    double best = c.value;
    // Minimum depth before the stall break: a mid-cell maximizer can evade
    // the shrinking stencil for several levels before any sample improves.
    int stalled = 0;
    for (int level = 0;
         level < grid.refine_levels && (stalled < 3 || level < 10); ++level) {
      const double r0 = r, th0 = th;
      const double before = best;
      for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
          const double rr =
              std::clamp(r0 + i * (dr / 2.0), 0.0, grid.refine_r_cap);
          const double tt = th0 + j * (dth / 2.0);
          const double v = eval(rr, tt);
          if (!std::isfinite(v)) {
            st.diverged = true;
            st.bad_point = std::polar(rr, tt);
            return;
          }
          if (v > best) {
            best = v;
            r = rr;
            th = tt;
          }
        }
      }
      dr /= 2.0;
      dth /= 2.0;
      stalled = best <= before * (1.0 + 1e-14) ? stalled + 1 : 0;
    }
    if (best > st.value) {
      st.value = best;
      st.r = r;
      st.theta = th;
    }
  }
}

SupResult finish(const SupState& st) {
  SupResult out;
  out.diverged = st.diverged;
  out.value = st.diverged ? std::numeric_limits<double>::infinity() : st.value;
  out.arg_max = st.diverged ? st.bad_point : std::polar(st.r, st.theta);
  return out;
}

template <typename EvalFn>
SupResult sup_over_grid(const EvalFn& eval, const DiskGrid& grid) {
  SupState st;
  std::vector<SupCandidate> cands;
  {
    const double v = eval(0.0, 0.0);
    if (!std::isfinite(v)) return finish(SupState{0.0, 0.0, 0.0, true, {0.0, 0.0}});
    cands.push_back({v, 0.0, 0.0, 0.5, kPi});
  }
  double prev_r = 0.0;
  for (int j = 1; j <= grid.shells; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    const int K = grid.angles_for_shell(j);
    const double dtheta = 2.0 * kPi / K;
    SupCandidate cand{-1.0, r, 0.0, r - prev_r, dtheta};
    for (int m = 0; m < K; ++m) {
      const double v = eval(r, m * dtheta);
      if (!std::isfinite(v)) {
        return finish(SupState{0.0, r, m * dtheta, true, std::polar(r, m * dtheta)});
      }
      if (v > cand.value) {
        cand.value = v;
        cand.theta = m * dtheta;
      }
    }
    cands.push_back(cand);
    prev_r = r;
  }
  refine_candidates(st, cands, eval, grid);
  return finish(st);
}

}  // namespace

SupResult weighted_sup_norm(const std::function<Complex(Complex)>& f,
                            const Weight& nu, const DiskGrid& grid) {
  const auto eval = [&](double r, double theta) {
    return nu.at_radius(r) * std::abs(f(std::polar(r, theta)));
  };
  return sup_over_grid(eval, grid);
}

SupResult weighted_sup_norm(const TaylorFunction& f, const Weight& nu,
                            const DiskGrid& grid) {
  // Coarse pass with circle transforms, then the generic pointwise zoom.
  SupState st;
  const auto eval = [&](double r, double theta) {
    return nu.at_radius(r) * std::abs(evaluate(f, std::polar(r, theta)));
  };
  std::vector<SupCandidate> cands;
  {
    const double v = eval(0.0, 0.0);
    if (!std::isfinite(v)) return finish(SupState{0.0, 0.0, 0.0, true, {0.0, 0.0}});
    cands.push_back({v, 0.0, 0.0, 0.5, kPi});
  }
  double prev_r = 0.0;
  for (int j = 1; j <= grid.shells; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    const int K = next_pow2(grid.angles_for_shell(j));
    const std::vector<Complex> vals = circle_values(f, r, K);
    const double w = nu.at_radius(r);
    const double dtheta = 2.0 * kPi / K;
    SupCandidate cand{-1.0, r, 0.0, r - prev_r, dtheta};
    for (int m = 0; m < K; ++m) {
      const double v = w * std::abs(vals[static_cast<size_t>(m)]);
      if (!std::isfinite(v)) {
        return finish(SupState{0.0, r, m * dtheta, true, std::polar(r, m * dtheta)});
      }
      if (v > cand.value) {
        cand.value = v;
        cand.theta = m * dtheta;
      }
    }
    cands.push_back(cand);
    prev_r = r;
  }
  refine_candidates(st, cands, eval, grid);
  return finish(st);
}

double norm(const TaylorFunction& f, const SpaceSpec& space,
            const QuadratureConfig& q) {
  switch (space.kind) {
    case SpaceKind::Hardy:
      return hardy_norm(f, space.p, q);
    case SpaceKind::Bergman:
      return bergman_norm(f, space.p, space.alpha, q);
    case SpaceKind::HInf:
    case SpaceKind::Growth: {
      DiskGrid grid;
      grid.max_angles = q.n_angles;
      const double beta = space.kind == SpaceKind::HInf ? 0.0 : space.alpha;
      const SupResult s = weighted_sup_norm(f, Weight::power(beta), grid);
      if (s.diverged) throw Error("sup-norm evaluation was non-finite");
      return s.value;
    }
  }
  throw Error("unknown space kind");
}

ExponentFit monomial_norm_exponent(const SpaceSpec& space,
                                   std::span<const int> n_list,
                                   const QuadratureConfig& q) {
  ExponentFit fit;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    const double v = norm(analytic::monomial(n), space, q);
    fit.n_values.push_back(n);
    fit.norms.push_back(v);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(v));
  }
  const size_t m = xs.size();
  if (m < 2) throw ValidationError(ValidationError::Kind::ParameterRange,
                                   "exponent fit needs >= 2 samples");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  for (size_t i = 0; i < m; ++i) {
    fit.max_residual = std::max(
        fit.max_residual, std::abs(ys[i] - (intercept + fit.slope * xs[i])));
  }
  return fit;
}

GrowthBoundEstimate growth_bound_constant(
    const SpaceSpec& space, int k,
    std::span<const analytic::TaylorFunction> probes, const DiskGrid& grid,
    const QuadratureConfig& q) {
  const double g = gamma(space);
  const auto pass = [&](const DiskGrid& gr) {
    double best = 0.0;
    for (const TaylorFunction& f : probes) {
      const double nf = norm(f, space, q);
      if (!(nf >= 1e-12)) {
        throw ValidationError(ValidationError::Kind::ParameterRange,
                              "growth_bound_constant: probe norm below 1e-12");
      }
      const TaylorFunction fk = analytic::derivative(f, k);
      for (int j = 1; j <= gr.shells; ++j) {
        const double r = 1.0 - std::ldexp(1.0, -j);
        const int K = next_pow2(gr.angles_for_shell(j));
        const std::vector<Complex> vals = circle_values(fk, r, K);
        const double w = std::pow(1.0 - r * r, k + g);
        for (const Complex& v : vals) {
          best = std::max(best, w * std::abs(v) / nf);
        }
      }
    }
    return best;
  };

  GrowthBoundEstimate est;
  est.constant = pass(grid);
  DiskGrid finer = grid;
  finer.shells += 2;
  finer.max_angles = std::min(grid.max_angles * 2, 1 << 15);
  est.refined_constant = pass(finer);
  est.rel_change = (est.refined_constant - est.constant) /
                   std::max(est.constant, 1e-300);
  est.stable = std::abs(est.rel_change) < 0.05;
  est.diverged = est.rel_change > 1.0;
  return est;
}

}  // namespace wdc::spaces
