#include "wdc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wdc::criteria {

using analytic::TaylorFunction;
using analytic::TestFunction;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

struct SeqClass {
  Classification cls = Classification::Inconclusive;
  double value = 0.0;
};

// Log increments between consecutive positive entries.
std::vector<double> log_increments(const std::vector<double>& v) {
  std::vector<double> d;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] > 0.0 && v[i] > 0.0 && std::isfinite(v[i - 1]) &&
        std::isfinite(v[i])) {
      d.push_back(std::log(v[i]) - std::log(v[i - 1]));
    }
  }
  return d;
}

bool any_nonfinite(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(),
                     [](double x) { return !std::isfinite(x); });
}

// Increments shrinking by 3x or more across the window while the last one
// sits below the growth threshold: the sequence is converging geometrically
// even if the last step is still above the stall threshold.
bool geometric_stall(const std::vector<double>& d, const CriteriaConfig& cfg) {
  if (static_cast<int>(d.size()) < cfg.window) return false;
  const size_t first = d.size() - static_cast<size_t>(cfg.window);
  if (std::abs(d.back()) >= cfg.divergent_increment) return false;
  return std::abs(d.back()) <= 0.3 * std::abs(d[first]);
}

// Steady contraction of same-signed increments (ratio <= 0.92 across the
// last three steps) certifies geometric convergence even when the per-step
// shrink is mild, e.g. fourth-root rates from boundary tangency. Returns
// the contraction ratio, or 0 when the test fails. The 0.92 cap keeps
// logarithmic divergences (ratios j/(j+1) -> 1) out at the ladder depths
// in use.
double contraction_ratio(const std::vector<double>& d,
                         const CriteriaConfig& cfg) {
  if (d.size() < 4) return 0.0;
  double ratio = 0.0;
  for (size_t i = d.size() - 3; i < d.size(); ++i) {
    if (std::abs(d[i]) >= cfg.divergent_increment) return 0.0;
    if (d[i] * d[i - 1] <= 0.0) return 0.0;
    const double r = d[i] / d[i - 1];
    if (r > 0.92 || r <= 0.0) return 0.0;
    ratio = std::max(ratio, r);
  }
  return ratio;
}

// Limit of v_last * exp(d ratio + d ratio^2 + ...) for contracting log
// increments.
double extrapolate_contraction(double last, double d, double ratio) {
  return last * std::exp(d * ratio / (1.0 - ratio));
}

// Classifier for nondecreasing sup sequences over refinement levels.
SeqClass classify_sup(const std::vector<double>& v, const CriteriaConfig& cfg) {
  if (v.empty()) return {Classification::Inconclusive, 0.0};
  if (any_nonfinite(v)) return {Classification::Divergent, kInf};
  const double last = v.back();
  if (last == 0.0) return {Classification::Finite, 0.0};
  const std::vector<double> d = log_increments(v);
  if (static_cast<int>(d.size()) >= cfg.window) {
    bool sustained = true;
    for (size_t i = d.size() - static_cast<size_t>(cfg.window); i < d.size(); ++i) {
      sustained = sustained && d[i] >= cfg.divergent_increment;
    }
    if (sustained) return {Classification::Divergent, last};
  }
  if (!d.empty() && (d.back() <= cfg.finite_increment || geometric_stall(d, cfg))) {
    return {Classification::Finite, last};
  }
  if (const double ratio = contraction_ratio(d, cfg); ratio > 0.0) {
    return {Classification::Finite,
            extrapolate_contraction(last, d.back(), ratio)};
  }
  return {Classification::Inconclusive, last};
}

// Classifier for boundary-limit sequences: geometric decay extrapolates to
// zero, a plateau keeps its value, sustained growth is divergence.
SeqClass classify_limit(const std::vector<double>& v, const CriteriaConfig& cfg) {
  if (v.empty()) return {Classification::Finite, 0.0};
  if (any_nonfinite(v)) return {Classification::Divergent, kInf};
  const double last = v.back();
  if (last == 0.0) return {Classification::Finite, 0.0};
  const std::vector<double> d = log_increments(v);
  if (static_cast<int>(d.size()) >= 3) {
    bool decaying = true;
    for (size_t i = d.size() - 3; i < d.size(); ++i) {
      decaying = decaying && d[i] <= -cfg.divergent_increment;
    }
    if (decaying) return {Classification::Finite, 0.0};
  }
  if (static_cast<int>(d.size()) >= cfg.window) {
    bool growing = true;
    for (size_t i = d.size() - static_cast<size_t>(cfg.window); i < d.size(); ++i) {
      growing = growing && d[i] >= cfg.divergent_increment;
    }
    if (growing) return {Classification::Divergent, last};
  }
  if (!d.empty() &&
      (std::abs(d.back()) <= cfg.finite_increment || geometric_stall(d, cfg))) {
    return {Classification::Finite, last};
  }
  if (const double ratio = contraction_ratio(d, cfg); ratio > 0.0) {
    return {Classification::Finite,
            extrapolate_contraction(last, d.back(), ratio)};
  }
  return {Classification::Inconclusive, last};
}

QuantityEstimate to_estimate(const SeqClass& c, const std::vector<double>& values,
                             int first_level = 1) {
  QuantityEstimate est;
  est.cls = c.cls;
  est.value = c.value;
  est.trace.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    est.trace.push_back({first_level + static_cast<int>(i), values[i]});
  }
  return est;
}

// Cached grid evaluations of |u_k|, |tau| and nu over the shell grid.
struct DensityCache {
  int order = 0;
  int shells = 0;
  std::vector<int> shell_of;
  std::vector<double> r_of, theta_of;
  std::vector<double> abs_tau;
  std::vector<double> nu_val;
  std::vector<double> abs_u;  // sample-major, (order+1) entries per sample
};

DensityCache build_cache(const ops::OperatorSpec& S, const spaces::Weight& nu,
                         int shells, const CriteriaConfig& cfg) {
  DensityCache cache;
  cache.order = S.order();
  cache.shells = shells;
  const spaces::DiskGrid grid = cfg.sup_grid();
  const auto add_sample = [&](int shell, double r, double theta) {
    const Complex z = std::polar(r, theta);
    cache.shell_of.push_back(shell);
    cache.r_of.push_back(r);
    cache.theta_of.push_back(theta);
    cache.abs_tau.push_back(std::abs(evaluate(S.tau, z)));
    cache.nu_val.push_back(nu.at_radius(r));
    for (int k = 0; k <= S.order(); ++k) {
      cache.abs_u.push_back(
          std::abs(evaluate(S.symbols[static_cast<size_t>(k)], z)));
    }
  };
  add_sample(1, 0.0, 0.0);  // origin counts with the first shell
  for (int j = 1; j <= shells; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    const int K = grid.angles_for_shell(j);
    for (int m = 0; m < K; ++m) {
      add_sample(j, r, 2.0 * kPi * m / K);
    }
  }
  return cache;
}

double density_from(double nu_u, double abs_tau, double exponent) {
  if (nu_u == 0.0) return 0.0;
  const double base = 1.0 - abs_tau * abs_tau;
  if (base <= 0.0) return kInf;
  return nu_u * std::pow(base, -exponent);
}

double cached_density(const DensityCache& c, size_t i, int k, double g) {
  const double nu_u =
      c.nu_val[i] * c.abs_u[i * static_cast<size_t>(c.order + 1) +
                            static_cast<size_t>(k)];
  return density_from(nu_u, c.abs_tau[i], static_cast<double>(k) + g);
}

double cached_density_sum(const DensityCache& c, size_t i, double g) {
  double acc = 0.0;
  for (int k = 0; k <= c.order; ++k) acc += cached_density(c, i, k, g);
  return acc;
}

// Running sup over cumulative shells, one trace entry per shell.
template <typename DensityFn>
std::vector<double> shell_sup_trace(const DensityCache& c, int shells,
                                    const DensityFn& density) {
  std::vector<double> trace(static_cast<size_t>(shells), 0.0);
  for (size_t i = 0; i < c.shell_of.size(); ++i) {
    const int j = c.shell_of[i];
    if (j > shells) continue;
    trace[static_cast<size_t>(j - 1)] =
        std::max(trace[static_cast<size_t>(j - 1)], density(i));
  }
  for (size_t j = 1; j < trace.size(); ++j) {
    trace[j] = std::max(trace[j], trace[j - 1]);
  }
  return trace;
}

// Sup over the superlevel sets |tau| > 1 - 2^{-j}.
template <typename DensityFn>
std::vector<double> superlevel_trace(const DensityCache& c, int levels,
                                     const DensityFn& density, bool* any_hit) {
  std::vector<double> trace(static_cast<size_t>(levels), 0.0);
  std::vector<bool> hit(static_cast<size_t>(levels), false);
  for (size_t i = 0; i < c.shell_of.size(); ++i) {
    double d = -1.0;
    for (int j = 1; j <= levels; ++j) {
      if (c.abs_tau[i] > 1.0 - std::ldexp(1.0, -j)) {
        if (d < 0.0) d = density(i);
        trace[static_cast<size_t>(j - 1)] =
            std::max(trace[static_cast<size_t>(j - 1)], d);
        hit[static_cast<size_t>(j - 1)] = true;
      } else {
        break;  // superlevel sets shrink with j
      }
    }
  }
  // Trim trailing empty levels so the classifier sees populated sets only.
  int populated = levels;
  while (populated > 0 && !hit[static_cast<size_t>(populated - 1)]) --populated;
  trace.resize(static_cast<size_t>(populated));
  *any_hit = populated > 0;
  return trace;
}

// Iterated 5x5 zoom around a seed; evaluations outside [0, r_cap] in radius
// are clamped. Non-finite values are skipped (the classification layer has
// already seen them through the coarse pass).
template <typename EvalFn>
double local_zoom(const EvalFn& eval, double r0, double theta0, double dr,
                  double dtheta, double r_cap, int levels = 30) {
  double best = eval(r0, theta0);
  double r = r0, theta = theta0;
  // The stall break needs a minimum depth: a maximizer sitting mid-cell can
  // evade the shrinking stencil for ~log2(h0/delta) levels first.
  int stalled = 0;
  for (int level = 0; level < levels && (stalled < 3 || level < 10); ++level) {
    const double rc = r, tc = theta;
    const double before = best;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double rr = std::clamp(rc + i * (dr / 2.0), 0.0, r_cap);
        const double tt = tc + j * (dtheta / 2.0);
        const double v = eval(rr, tt);
        if (std::isfinite(v) && v > best) {
          best = v;
          r = rr;
          theta = tt;
        }
      }
    }
    dr /= 2.0;
    dtheta /= 2.0;
    stalled = best <= before * (1.0 + 1e-14) ? stalled + 1 : 0;
  }
  return best;
}

// Polish a finite M_k value: zoom from every shell's best cached sample
// with that shell's own bracket (interior maxima sit between the origin and
// the first shell, boundary maxima between deep shells).
double polish_density_sup(const ops::OperatorSpec& S,
                          const spaces::SpaceSpec& space,
                          const spaces::Weight& nu, int k,
                          const DensityCache& cache, int shells,
                          const CriteriaConfig& cfg) {
  const double g = spaces::gamma(space);
  const auto eval = [&](double r, double theta) {
    const Complex z = std::polar(r, theta);
    const double nu_u =
        nu.at_radius(r) *
        std::abs(evaluate(S.symbols[static_cast<size_t>(k)], z));
    return density_from(nu_u, std::abs(evaluate(S.tau, z)),
                        static_cast<double>(k) + g);
  };

  std::vector<double> best(static_cast<size_t>(shells) + 1, -1.0);
  std::vector<double> best_r(best.size(), 0.0), best_theta(best.size(), 0.0);
  for (size_t i = 0; i < cache.shell_of.size(); ++i) {
    const int j = cache.shell_of[i];
    if (j > shells) continue;
    const double v = cached_density(cache, i, k, g);
    if (v > best[static_cast<size_t>(j)]) {
      best[static_cast<size_t>(j)] = v;
      best_r[static_cast<size_t>(j)] = cache.r_of[i];
      best_theta[static_cast<size_t>(j)] = cache.theta_of[i];
    }
  }
  const double coarse =
      *std::max_element(best.begin(), best.end());
  const double r_cap = 1.0 - std::ldexp(1.0, -shells);
  const spaces::DiskGrid grid = cfg.sup_grid();
  double out = coarse;
  double prev_r = 0.0;
  for (int j = 1; j <= shells; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    if (best[static_cast<size_t>(j)] >= 1e-3 * coarse) {
      out = std::max(out, local_zoom(eval, best_r[static_cast<size_t>(j)],
                                     best_theta[static_cast<size_t>(j)],
                                     r - prev_r,
                                     2.0 * kPi / grid.angles_for_shell(j),
                                     r_cap));
    }
    prev_r = r;
  }
  return out;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "YES";
    case Verdict::No:
      return "NO";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Finite:
      return "FINITE";
    case Classification::Divergent:
      return "DIVERGENT";
    case Classification::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

MeasureSpec MeasureSpec::boundary(double q) {
  if (!(q > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "measure requires q > 0");
  }
  return MeasureSpec{Kind::Boundary, 0.0, q};
}

MeasureSpec MeasureSpec::area(double beta, double q) {
  if (!(q > 0.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "measure requires q > 0");
  }
  if (!(beta > -1.0)) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "area measure requires beta > -1");
  }
  return MeasureSpec{Kind::Area, beta, q};
}

spaces::DiskGrid CriteriaConfig::sup_grid() const {
  spaces::DiskGrid grid;
  grid.shells = shells;
  grid.base_angles = base_angles;
  grid.max_angles = max_angles;
  return grid;
}

double criterion_density(const ops::OperatorSpec& S,
                         const spaces::SpaceSpec& space,
                         const spaces::Weight& nu, int k, Complex z) {
  if (k < 0 || k > S.order()) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "density order outside 0..n");
  }
  const double nu_u =
      nu(z) * std::abs(evaluate(S.symbols[static_cast<size_t>(k)], z));
  return density_from(nu_u, std::abs(evaluate(S.tau, z)),
                      static_cast<double>(k) + spaces::gamma(space));
}

QuantityEstimate boundedness_Mk(const ops::OperatorSpec& S,
                                const spaces::SpaceSpec& space,
                                const spaces::Weight& nu, int k,
                                const CriteriaConfig& cfg) {
  const DensityCache cache = build_cache(S, nu, cfg.shells, cfg);
  const double g = spaces::gamma(space);
  const std::vector<double> trace = shell_sup_trace(
      cache, cfg.shells, [&](size_t i) { return cached_density(cache, i, k, g); });
  SeqClass cls = classify_sup(trace, cfg);
  QuantityEstimate est = to_estimate(cls, trace);
  if (cls.cls == Classification::Finite && cls.value > 0.0) {
    // Pin down the reported value around the grid maximizers.
    est.value = std::max(
        est.value, polish_density_sup(S, space, nu, k, cache, cfg.shells, cfg));
  }
  return est;
}

QuantityEstimate compactness_Gk(const ops::OperatorSpec& S,
                                const spaces::SpaceSpec& space,
                                const spaces::Weight& nu, int k,
                                const CriteriaConfig& cfg) {
  const int deep = cfg.shells + cfg.extra_shells;
  const DensityCache cache = build_cache(S, nu, deep, cfg);
  const double g = spaces::gamma(space);
  bool any_hit = false;
  const std::vector<double> trace = superlevel_trace(
      cache, cfg.shells,
      [&](size_t i) { return cached_density(cache, i, k, g); }, &any_hit);
  const SeqClass cls = classify_limit(trace, cfg);
  return to_estimate(cls, trace);
}

namespace {

// Anchor-ladder values max_{arg a} ||S(f_a sigma_a^k)||_nu at |a| = 1 - 2^{-j}.
std::vector<double> testfn_ladder(const ops::OperatorSpec& S,
                                  const spaces::SpaceSpec& space,
                                  const spaces::Weight& nu, int k,
                                  const CriteriaConfig& cfg) {
  const double g = spaces::gamma(space);
  const spaces::DiskGrid grid = cfg.sup_grid();
  std::vector<double> values;
  values.reserve(static_cast<size_t>(cfg.a_shells));
  for (int j = 1; j <= cfg.a_shells; ++j) {
    const double ar = std::min(1.0 - std::ldexp(1.0, -j), 0.999);
    double level = 0.0;
    for (int m = 0; m < cfg.a_angles; ++m) {
      const Complex a = std::polar(ar, 2.0 * kPi * m / cfg.a_angles);
      const spaces::SupResult res =
          target_norm(S, TestFunction(a, g, k), nu, grid);
      level = std::max(level, res.diverged ? kInf : res.value);
    }
    values.push_back(level);
  }
  return values;
}

QuantityEstimate classify_testfn(const std::vector<double>& values, Mode mode,
                                 const CriteriaConfig& cfg) {
  if (mode == Mode::Sup) {
    std::vector<double> running = values;
    for (size_t i = 1; i < running.size(); ++i) {
      running[i] = std::max(running[i], running[i - 1]);
    }
    return to_estimate(classify_sup(running, cfg), running);
  }
  return to_estimate(classify_limit(values, cfg), values);
}

}  // namespace

QuantityEstimate testfn_condition(const ops::OperatorSpec& S,
                                  const spaces::SpaceSpec& space,
                                  const spaces::Weight& nu, int k, Mode mode,
                                  const CriteriaConfig& cfg) {
  if (k < 0 || k > S.order()) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "test-function order outside 0..n");
  }
  return classify_testfn(testfn_ladder(S, space, nu, k, cfg), mode, cfg);
}

namespace {

// n^gamma ||S p_n||_nu for n = 1..n_max. One grid pass caches nu, u_k and
// tau per point; running powers of tau(z) make the whole family of sweeps
// O(points * n_max). Each n still gets its own zoom around the hottest
// shells.
std::vector<double> monomial_values(const ops::OperatorSpec& S, double g,
                                    const spaces::Weight& nu, int n_max,
                                    const CriteriaConfig& cfg) {
  const spaces::DiskGrid grid = cfg.sup_grid();
  const int order = S.order();

  struct Point {
    double r, theta, nu;
    Complex w;       // tau(z)
    Complex wpow;    // running tau(z)^{max(n - order, 0)}
    int shell;
  };
  std::vector<Point> pts;
  std::vector<std::vector<Complex>> u_at;  // per point, u_0..u_n
  const auto add_point = [&](int shell, double r, double theta) {
    const Complex z = std::polar(r, theta);
    Point pt{r, theta, nu.at_radius(r), evaluate(S.tau, z), {1.0, 0.0}, shell};
    pts.push_back(pt);
    std::vector<Complex> us(static_cast<size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
      us[static_cast<size_t>(k)] =
          evaluate(S.symbols[static_cast<size_t>(k)], z);
    }
    u_at.push_back(std::move(us));
  };
  add_point(0, 0.0, 0.0);
  for (int j = 1; j <= cfg.shells; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    const int K = grid.angles_for_shell(j);
    for (int m = 0; m < K; ++m) add_point(j, r, 2.0 * kPi * m / K);
  }

  const auto value_at = [&](double r, double theta, int n) {
    const Complex z = std::polar(r, theta);
    const Complex w = evaluate(S.tau, z);
    Complex acc{0.0, 0.0};
    for (int k = 0; k <= std::min(order, n); ++k) {
      double falling = 1.0;
      for (int i = 0; i < k; ++i) falling *= static_cast<double>(n - i);
      acc += evaluate(S.symbols[static_cast<size_t>(k)], z) * falling *
             std::pow(w, static_cast<double>(n - k));
    }
    return nu.at_radius(r) * std::abs(acc);
  };

  std::vector<double> values(static_cast<size_t>(n_max) + 1, 0.0);
  std::vector<double> shell_best(static_cast<size_t>(cfg.shells) + 1, 0.0);
  std::vector<double> shell_theta(static_cast<size_t>(cfg.shells) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    std::fill(shell_best.begin(), shell_best.end(), -1.0);
    for (size_t i = 0; i < pts.size(); ++i) {
      Point& pt = pts[i];
      if (n > order) pt.wpow *= pt.w;  // advance to tau^{n - order}
      // Powers tau^{n-k}, k = order..0, from the running base.
      Complex acc{0.0, 0.0};
      Complex wcur = n > order ? pt.wpow : Complex{1.0, 0.0};
      if (n <= order) {
        // Small n: compute directly, exponents start at 0.
        for (int k = std::min(order, n); k >= 0; --k) {
          double falling = 1.0;
          for (int t = 0; t < k; ++t) falling *= static_cast<double>(n - t);
          Complex wp{1.0, 0.0};
          for (int t = 0; t < n - k; ++t) wp *= pt.w;
          acc += u_at[i][static_cast<size_t>(k)] * falling * wp;
        }
      } else {
        for (int k = order; k >= 0; --k) {
          double falling = 1.0;
          for (int t = 0; t < k; ++t) falling *= static_cast<double>(n - t);
          acc += u_at[i][static_cast<size_t>(k)] * falling * wcur;
          if (k > 0) wcur *= pt.w;
        }
      }
      const double v = pt.nu * std::abs(acc);
      if (v > shell_best[static_cast<size_t>(pt.shell)]) {
        shell_best[static_cast<size_t>(pt.shell)] = v;
        shell_theta[static_cast<size_t>(pt.shell)] = pt.theta;
      }
    }
    double coarse = 0.0;
    for (double v : shell_best) coarse = std::max(coarse, v);
    double best = coarse;
    double prev_r = 0.0;
    for (int j = 0; j <= cfg.shells; ++j) {
      const double sb = shell_best[static_cast<size_t>(j)];
      const double r = j == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -j);
      if (sb >= 1e-3 * coarse) {
        const double dth =
            j == 0 ? kPi : 2.0 * kPi / grid.angles_for_shell(j);
        const double dr = j == 0 ? 0.5 : r - prev_r;
        best = std::max(
            best, local_zoom([&](double rr, double tt) { return value_at(rr, tt, n); },
                             r, shell_theta[static_cast<size_t>(j)], dr, dth,
                             grid.refine_r_cap, grid.refine_levels));
      }
      if (j > 0) prev_r = r;
    }
    values[static_cast<size_t>(n)] =
        std::isfinite(best) ? std::pow(static_cast<double>(n), g) * best : kInf;
  }
  return values;
}

QuantityEstimate classify_monomial(const std::vector<double>& values, Mode mode,
                                   const CriteriaConfig& cfg) {
  const int n_max = static_cast<int>(values.size()) - 1;

  // Trace at the power-of-two subsequence.
  std::vector<double> ladder;
  for (int n = 1; n <= n_max; n *= 2) {
    ladder.push_back(values[static_cast<size_t>(n)]);
  }
  if (any_nonfinite(values)) {
    return to_estimate({Classification::Divergent, kInf}, ladder, 0);
  }

  const auto loglog_slope = [&](int lo) {
    std::vector<double> xs, ys;
    for (int n = lo; n <= n_max; ++n) {
      const double v = values[static_cast<size_t>(n)];
      if (v > 0.0) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(v));
      }
    }
    if (xs.size() < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
  };
  // Trend on the tail quarter (past the small-n transient); the limit
  // estimate is the mean over the last decade.
  const double slope = loglog_slope(std::max(2, n_max / 4));
  double mean = 0.0;
  int count = 0;
  bool all_zero = true;
  for (int n = std::max(1, n_max / 10); n <= n_max; ++n) {
    mean += values[static_cast<size_t>(n)];
    ++count;
    all_zero = all_zero && values[static_cast<size_t>(n)] == 0.0;
  }
  mean /= std::max(count, 1);

  SeqClass cls;
  if (mode == Mode::Sup) {
    const double sup = *std::max_element(values.begin() + 1, values.end());
    cls.value = sup;
    if (all_zero) {
      cls = {Classification::Finite, 0.0};
    } else if (slope >= cfg.divergent_increment) {
      cls.cls = Classification::Divergent;
    } else {
      cls.cls = Classification::Finite;
    }
  } else {
    if (all_zero) {
      cls = {Classification::Finite, 0.0};
    } else if (slope >= cfg.divergent_increment) {
      cls = {Classification::Divergent, values[static_cast<size_t>(n_max)]};
    } else if (slope <= -cfg.divergent_increment) {
      cls = {Classification::Finite, 0.0};  // power-law decay to zero
    } else {
      cls = {Classification::Finite, mean};
    }
  }
  return to_estimate(cls, ladder, 0);
}

}  // namespace

QuantityEstimate monomial_condition(const ops::OperatorSpec& S,
                                    const spaces::SpaceSpec& space,
                                    const spaces::Weight& nu, Mode mode,
                                    const CriteriaConfig& cfg) {
  if (space.kind != spaces::SpaceKind::HInf &&
      space.kind != spaces::SpaceKind::Growth) {
    throw ValidationError(
        ValidationError::Kind::WrongSpace,
        "monomial condition applies to H^inf and A^{-alpha} sources only");
  }
  const double g = spaces::gamma(space);
  const int n_max = std::max(cfg.n_max, 128);  // below this the tail trend
                                               // is all transient
  return classify_monomial(monomial_values(S, g, nu, n_max, cfg), mode, cfg);
}

namespace {

// Angle mean of Q_k^q on the circle of radius r. Midpoint nodes: boundary
// tangencies of polynomial self-maps sit at grid-friendly angles, and a
// node exactly on the singularity would poison the mean of an otherwise
// integrable density.
double q_circle_mean(const ops::OperatorSpec& S, double g, int k, double q,
                     double r, int K) {
  double acc = 0.0;
  for (int m = 0; m < K; ++m) {
    const Complex z = std::polar(r, 2.0 * kPi * (m + 0.5) / K);
    const double u =
        std::abs(evaluate(S.symbols[static_cast<size_t>(k)], z));
    const double d = density_from(u, std::abs(evaluate(S.tau, z)),
                                  static_cast<double>(k) + g);
    acc += std::pow(d, q);
  }
  return acc / static_cast<double>(K);
}

}  // namespace

QuantityEstimate order_bounded_Qk(const ops::OperatorSpec& S,
                                  const spaces::SpaceSpec& space,
                                  const MeasureSpec& mu, int k,
                                  const CriteriaConfig& cfg) {
  if (k < 0 || k > S.order()) {
    throw ValidationError(ValidationError::Kind::ParameterRange,
                          "order-boundedness order outside 0..n");
  }
  const double g = spaces::gamma(space);
  const double q = mu.q;

  if (mu.kind == MeasureSpec::Kind::Boundary) {
    // Angle counts grow ~2^{j/2} with the ladder so boundary peaks of width
    // sqrt(1-r) stay resolved; otherwise a divergent spike thinner than the
    // angle spacing reads as a plateau.
    const auto angles_for = [&](int j) {
      const long k2 = static_cast<long>(cfg.max_angles) << (j / 2);
      return static_cast<int>(std::min<long>(k2, 1 << 15));
    };
    std::vector<double> roots;
    for (int j = 1; j <= cfg.boundary_circles; ++j) {
      const double r = 1.0 - std::ldexp(1.0, -j);
      roots.push_back(
          std::pow(q_circle_mean(S, g, k, q, r, angles_for(j)), 1.0 / q));
    }
    SeqClass cls = classify_sup(roots, cfg);
    if (cls.cls == Classification::Finite) {
      // The ladder certifies convergence and the data extend to the circle;
      // the boundary evaluation is then the limit itself.
      const double boundary = std::pow(
          q_circle_mean(S, g, k, q, 1.0, angles_for(cfg.boundary_circles)),
          1.0 / q);
      if (std::isfinite(boundary)) {
        cls.value = boundary;
        roots.push_back(boundary);
      }
    }
    return to_estimate(cls, roots);
  }

  // Area measure: cumulative annulus integrals of Q_k^q against dA_beta.
  // Angle counts grow with annulus depth for the same reason as on the
  // boundary ladder.
  const spaces::QuadRule gl = spaces::gauss_jacobi01(cfg.area_nodes, 0.0);
  std::vector<double> cumulative;
  std::vector<double> increments;
  double total = 0.0;
  double t_prev = 0.0;
  for (int j = 1; j <= cfg.shells; ++j) {
    const double s = 1.0 - std::ldexp(1.0, -j);
    const double t_next = s * s;
    const int angles = static_cast<int>(std::min<long>(
        static_cast<long>(cfg.max_angles) << (j / 2), 1 << 15));
    double annulus = 0.0;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = t_prev + (t_next - t_prev) * gl.nodes[i];
      const double w = (t_next - t_prev) * gl.weights[i];
      annulus += w * (mu.beta + 1.0) * std::pow(1.0 - t, mu.beta) *
                 q_circle_mean(S, g, k, q, std::sqrt(t), angles);
    }
    total += annulus;
    increments.push_back(annulus);
    cumulative.push_back(std::pow(total, 1.0 / q));
    t_prev = t_next;
  }
  SeqClass cls = classify_sup(cumulative, cfg);
  if (cls.cls == Classification::Finite && increments.size() >= 2) {
    const double d1 = increments[increments.size() - 2];
    const double d2 = increments.back();
    if (d1 > 0.0 && d2 > 0.0 && d2 < d1) {
      const double rho = d2 / d1;  // geometric tail estimate
      cls.value = std::pow(std::pow(cls.value, q) + d2 * rho / (1.0 - rho),
                           1.0 / q);
    }
  }
  return to_estimate(cls, cumulative);
}

namespace {

Verdict finiteness_verdict(const std::vector<Classification>& cls) {
  bool all_finite = true;
  for (Classification c : cls) {
    if (c == Classification::Divergent) return Verdict::No;
    all_finite = all_finite && c == Classification::Finite;
  }
  return all_finite ? Verdict::Yes : Verdict::Inconclusive;
}

Verdict zero_limit_verdict(const QuantityEstimate& est, double zero_tol) {
  if (est.cls == Classification::Divergent) return Verdict::No;
  if (est.cls == Classification::Inconclusive) return Verdict::Inconclusive;
  return est.value <= zero_tol ? Verdict::Yes : Verdict::No;
}

Verdict conjunction(std::initializer_list<Verdict> vs) {
  Verdict out = Verdict::Yes;
  for (Verdict v : vs) {
    if (v == Verdict::No) return Verdict::No;
    if (v == Verdict::Inconclusive) out = Verdict::Inconclusive;
  }
  return out;
}

std::string format_value(const QuantityEstimate& est) {
  std::ostringstream os;
  os << to_string(est.cls) << "(" << est.value << ")";
  return os.str();
}

}  // namespace

CriterionReport evaluate(const ops::OperatorSpec& S,
                         const spaces::SpaceSpec& space,
                         const spaces::Weight& nu,
                         const std::optional<MeasureSpec>& mu,
                         const CriteriaConfig& cfg) {
  CriterionReport report;
  report.order = S.order();
  report.gamma_value = spaces::gamma(space);
  report.tau_sup = S.tau_sup;
  report.boundary_touching = S.boundary_touching;
  const double g = report.gamma_value;

  const int deep = cfg.shells + cfg.extra_shells;
  const DensityCache cache = build_cache(S, nu, deep, cfg);

  report.per_k.resize(static_cast<size_t>(S.order()) + 1);
  for (int k = 0; k <= S.order(); ++k) {
    auto& slot = report.per_k[static_cast<size_t>(k)];
    const std::vector<double> m_trace = shell_sup_trace(
        cache, cfg.shells,
        [&](size_t i) { return cached_density(cache, i, k, g); });
    slot.Mk = to_estimate(classify_sup(m_trace, cfg), m_trace);
    if (slot.Mk.cls == Classification::Finite && slot.Mk.value > 0.0) {
      slot.Mk.value =
          std::max(slot.Mk.value,
                   polish_density_sup(S, space, nu, k, cache, cfg.shells, cfg));
    }

    bool any_hit = false;
    const std::vector<double> g_trace = superlevel_trace(
        cache, cfg.shells,
        [&](size_t i) { return cached_density(cache, i, k, g); }, &any_hit);
    slot.Gk = to_estimate(classify_limit(g_trace, cfg), g_trace);
  }

  {
    const std::vector<double> sum_trace = shell_sup_trace(
        cache, cfg.shells, [&](size_t i) { return cached_density_sum(cache, i, g); });
    report.sum_M = to_estimate(classify_sup(sum_trace, cfg), sum_trace);
    bool any_hit = false;
    const std::vector<double> sum_g_trace = superlevel_trace(
        cache, cfg.shells,
        [&](size_t i) { return cached_density_sum(cache, i, g); }, &any_hit);
    report.sum_G = to_estimate(classify_limit(sum_g_trace, cfg), sum_g_trace);
  }

  for (int k = 0; k <= S.order(); ++k) {
    auto& slot = report.per_k[static_cast<size_t>(k)];
    const std::vector<double> ladder = testfn_ladder(S, space, nu, k, cfg);
    slot.testfn_sup = classify_testfn(ladder, Mode::Sup, cfg);
    slot.testfn_limit = classify_testfn(ladder, Mode::Limit, cfg);
  }

  if (space.kind == spaces::SpaceKind::HInf ||
      space.kind == spaces::SpaceKind::Growth) {
    const std::vector<double> values =
        monomial_values(S, g, nu, std::max(cfg.n_max, 128), cfg);
    report.monomial_sup = classify_monomial(values, Mode::Sup, cfg);
    report.monomial_limit = classify_monomial(values, Mode::Limit, cfg);
  }

  if (mu) {
    double sum_q_power = 0.0;
    bool sum_finite = true;
    Classification sum_cls = Classification::Finite;
    for (int k = 0; k <= S.order(); ++k) {
      auto& slot = report.per_k[static_cast<size_t>(k)];
      slot.Qk = order_bounded_Qk(S, space, *mu, k, cfg);
      if (slot.Qk->cls == Classification::Divergent) {
        sum_cls = Classification::Divergent;
      } else if (slot.Qk->cls == Classification::Inconclusive &&
                 sum_cls != Classification::Divergent) {
        sum_cls = Classification::Inconclusive;
      }
      sum_finite = sum_finite && slot.Qk->cls == Classification::Finite;
      sum_q_power += std::pow(slot.Qk->value, mu->q);
    }
    QuantityEstimate sq;
    sq.cls = sum_cls;
    sq.value = sum_finite ? std::pow(sum_q_power, 1.0 / mu->q) : kInf;
    report.sum_Q = sq;
  }

  // Verdicts.
  std::vector<Classification> m_cls;
  for (const auto& slot : report.per_k) m_cls.push_back(slot.Mk.cls);
  report.bounded = finiteness_verdict(m_cls);

  if (report.bounded == Verdict::No) {
    report.compact = Verdict::No;  // compactness presupposes boundedness
  } else {
    Verdict zeros = Verdict::Yes;
    for (const auto& slot : report.per_k) {
      zeros = conjunction({zeros, zero_limit_verdict(slot.Gk, cfg.zero_tol)});
    }
    report.compact = conjunction({report.bounded, zeros});
    if (report.bounded == Verdict::Inconclusive && zeros == Verdict::No) {
      report.compact = Verdict::No;
    }
  }

  if (mu) {
    std::vector<Classification> q_cls;
    for (const auto& slot : report.per_k) q_cls.push_back(slot.Qk->cls);
    report.order_bounded = finiteness_verdict(q_cls);
  } else {
    report.order_bounded = Verdict::Inconclusive;
  }

  return report;
}

AuditRecord equivalence_audit(const CriterionReport& report,
                              const spaces::SpaceSpec& space) {
  AuditRecord audit;
  const double zero_tol = CriteriaConfig{}.zero_tol;
  const bool part_a = space.kind == spaces::SpaceKind::HInf ||
                      space.kind == spaces::SpaceKind::Growth;

  const auto add_pair = [&](std::string left, std::string right, Verdict lv,
                            Verdict rv, std::string evidence) {
    AuditPair pair;
    pair.left = std::move(left);
    pair.right = std::move(right);
    pair.left_verdict = lv;
    pair.right_verdict = rv;
    pair.pass = lv == rv;
    pair.evidence = std::move(evidence);
    audit.all_pass = audit.all_pass && pair.pass;
    audit.pairs.push_back(std::move(pair));
  };

  // Boundedness: (b) summed density vs (c) per-k suprema.
  std::vector<Classification> m_cls;
  for (const auto& slot : report.per_k) m_cls.push_back(slot.Mk.cls);
  const Verdict via_c = finiteness_verdict(m_cls);
  const Verdict via_b = finiteness_verdict({report.sum_M.cls});
  {
    std::ostringstream ev;
    ev << "sum " << format_value(report.sum_M) << "; per-k";
    for (const auto& slot : report.per_k) ev << " " << format_value(slot.Mk);
    add_pair("bounded(b)", "bounded(c)", via_b, via_c, ev.str());
  }

  // (c) vs (d): per-k suprema vs test-function sups.
  std::vector<Classification> d_cls;
  for (const auto& slot : report.per_k) d_cls.push_back(slot.testfn_sup.cls);
  const Verdict via_d = finiteness_verdict(d_cls);
  {
    std::ostringstream ev;
    ev << "testfn";
    for (const auto& slot : report.per_k)
      ev << " " << format_value(slot.testfn_sup);
    add_pair("bounded(c)", "bounded(d)", via_c, via_d, ev.str());
  }

  // (c) vs (e): monomial condition, part (A) spaces only.
  if (part_a && report.monomial_sup) {
    const Verdict via_e = finiteness_verdict({report.monomial_sup->cls});
    add_pair("bounded(c)", "bounded(e)", via_c, via_e,
             "monomial sup " + format_value(*report.monomial_sup));
  }

  // Compactness (ii) vs (iii).
  Verdict via_iii = Verdict::Yes;
  for (const auto& slot : report.per_k) {
    via_iii = conjunction({via_iii, zero_limit_verdict(slot.Gk, zero_tol)});
  }
  const Verdict via_ii = zero_limit_verdict(report.sum_G, zero_tol);
  {
    std::ostringstream ev;
    ev << "sum " << format_value(report.sum_G) << "; per-k";
    for (const auto& slot : report.per_k) ev << " " << format_value(slot.Gk);
    add_pair("compact(ii)", "compact(iii)", via_ii, via_iii, ev.str());
  }

  // (iii) vs (iv): only meaningful for bounded operators; the gamma = 0,
  // k = 0 probe degenerates to the constant function and is excluded.
  if (report.bounded == Verdict::Yes) {
    Verdict via_iv = Verdict::Yes;
    int used = 0;
    for (size_t k = 0; k < report.per_k.size(); ++k) {
      if (report.gamma_value == 0.0 && k == 0) {
        audit.exclusions.push_back(
            "compactness probe (gamma=0, k=0) is the constant function; "
            "excluded from the (iii)<->(iv) cross-check");
        continue;
      }
      ++used;
      via_iv = conjunction(
          {via_iv, zero_limit_verdict(report.per_k[k].testfn_limit, zero_tol)});
    }
    if (used > 0) {
      std::ostringstream ev;
      ev << "testfn limits";
      for (const auto& slot : report.per_k)
        ev << " " << format_value(slot.testfn_limit);
      add_pair("compact(iii)", "compact(iv)", via_iii, via_iv, ev.str());
    }
    if (part_a && report.monomial_limit) {
      const Verdict via_v =
          zero_limit_verdict(*report.monomial_limit, zero_tol);
      add_pair("compact(iii)", "compact(v)", via_iii, via_v,
               "monomial limit " + format_value(*report.monomial_limit));
    }
  }

  // Order boundedness (ii) vs (iii).
  if (report.sum_Q) {
    std::vector<Classification> q_cls;
    for (const auto& slot : report.per_k) q_cls.push_back(slot.Qk->cls);
    const Verdict via_q3 = finiteness_verdict(q_cls);
    const Verdict via_q2 = finiteness_verdict({report.sum_Q->cls});
    std::ostringstream ev;
    ev << "sum " << format_value(*report.sum_Q) << "; per-k";
    for (const auto& slot : report.per_k) ev << " " << format_value(*slot.Qk);
    add_pair("order(ii)", "order(iii)", via_q2, via_q3, ev.str());
  }

  return audit;
}

}  // namespace wdc::criteria
