#pragma once

// Evaluation of the operator criteria: the boundedness suprema M_k, the
// boundary-limit compactness quantities G_k, the order-boundedness densities
// Q_k in L^q(mu), the test-function and monomial conditions, and the
// equivalence audit across them.

#include <optional>
#include <string>
#include <vector>

#include "wdc/operator.hpp"

namespace wdc::criteria {

enum class Verdict { Yes, No, Inconclusive };

/// Outcome of the three-way refinement classifier. Finite-vs-infinite sups
/// cannot be decided from samples; sustained geometric growth over the last
/// window of refinement levels stands in for divergence, and stalling
/// increments for convergence.
enum class Classification { Finite, Divergent, Inconclusive };

const char* to_string(Verdict v);
const char* to_string(Classification c);

struct TracePoint {
  int level = 0;
  double value = 0.0;
};

struct QuantityEstimate {
  Classification cls = Classification::Inconclusive;
  double value = 0.0;
  std::vector<TracePoint> trace;
};

/// Target measure for order boundedness: normalized arclength on the
/// boundary circle or the weighted area measure dA_beta, with exponent q.
struct MeasureSpec {
  enum class Kind { Boundary, Area };
  Kind kind = Kind::Boundary;
  double beta = 0.0;
  double q = 2.0;

  static MeasureSpec boundary(double q);
  static MeasureSpec area(double beta, double q);
};

struct CriteriaConfig {
  int shells = 16;       // refinement shells r_j = 1 - 2^{-j}
  int base_angles = 64;  // per-shell angle counts double up to max_angles
  int max_angles = 1024;
  int extra_shells = 4;     // margin past `shells` for the boundary limits
  int a_shells = 10;        // anchor ladder |a| = 1 - 2^{-j}, capped at 0.999
  int a_angles = 6;         // anchor arguments per ladder level
  int n_max = 256;          // monomial condition range
  int boundary_circles = 18;  // radius ladder for the boundary measure
  int area_nodes = 8;         // Gauss nodes per annulus for area measures
  double divergent_increment = 0.05;  // log growth per level, sustained
  double finite_increment = 1e-3;     // log increment treated as stalled
  int window = 4;                     // levels of sustained growth required
  double zero_tol = 1e-8;             // limit values below this count as 0

  spaces::DiskGrid sup_grid() const;
};

/// nu(z)|u_k(z)| / (1-|tau(z)|^2)^{k+gamma}. Returns +infinity (not a crash)
/// when |tau(z)| reaches 1 numerically and the numerator is nonzero; pass
/// the unit weight for the order-boundedness density Q_k.
double criterion_density(const ops::OperatorSpec& S,
                         const spaces::SpaceSpec& space,
                         const spaces::Weight& nu, int k, Complex z);

/// M_k = sup_z of the density, classified over the shell ladder.
QuantityEstimate boundedness_Mk(const ops::OperatorSpec& S,
                                const spaces::SpaceSpec& space,
                                const spaces::Weight& nu, int k,
                                const CriteriaConfig& cfg = {});

/// G_k = lim_{|tau(z)| -> 1} of the density: sups over the superlevel sets
/// |tau(z)| > 1 - delta_j, extrapolated in j. Empty superlevel sets (strict
/// self-map) short-circuit to 0.
QuantityEstimate compactness_Gk(const ops::OperatorSpec& S,
                                const spaces::SpaceSpec& space,
                                const spaces::Weight& nu, int k,
                                const CriteriaConfig& cfg = {});

enum class Mode { Sup, Limit };

/// Condition (d)/(iv): sup or boundary limit over the anchor ladder of
/// ||S(f_a sigma_a^k)||_nu.
QuantityEstimate testfn_condition(const ops::OperatorSpec& S,
                                  const spaces::SpaceSpec& space,
                                  const spaces::Weight& nu, int k, Mode mode,
                                  const CriteriaConfig& cfg = {});

/// Condition (e)/(v): n^gamma ||S p_n||_nu over n = 1..n_max. Only defined
/// for X = H^inf or A^{-alpha}; other spaces throw WrongSpace.
QuantityEstimate monomial_condition(const ops::OperatorSpec& S,
                                    const spaces::SpaceSpec& space,
                                    const spaces::Weight& nu, Mode mode,
                                    const CriteriaConfig& cfg = {});

/// ||Q_k||_{L^q(mu)} with the same divergence classification as the sups:
/// annulus-refined quadrature for area measures, a radius ladder with
/// boundary evaluation for the arclength measure.
QuantityEstimate order_bounded_Qk(const ops::OperatorSpec& S,
                                  const spaces::SpaceSpec& space,
                                  const MeasureSpec& mu, int k,
                                  const CriteriaConfig& cfg = {});

struct PerOrderReport {
  QuantityEstimate Mk;
  QuantityEstimate Gk;
  std::optional<QuantityEstimate> Qk;
  QuantityEstimate testfn_sup;
  QuantityEstimate testfn_limit;
};

struct CriterionReport {
  int order = 0;
  double gamma_value = 0.0;
  double tau_sup = 0.0;
  bool boundary_touching = false;

  std::vector<PerOrderReport> per_k;
  QuantityEstimate sum_M;  // condition (b): sup of the summed density
  QuantityEstimate sum_G;  // condition (ii)
  std::optional<QuantityEstimate> sum_Q;
  std::optional<QuantityEstimate> monomial_sup;    // H^inf / A^{-alpha} only
  std::optional<QuantityEstimate> monomial_limit;

  Verdict bounded = Verdict::Inconclusive;
  Verdict compact = Verdict::Inconclusive;
  Verdict order_bounded = Verdict::Inconclusive;  // Inconclusive if no measure
};

/// Full report: every per-k quantity, the summed forms, the test-function
/// and monomial conditions, and the three verdicts.
CriterionReport evaluate(const ops::OperatorSpec& S,
                         const spaces::SpaceSpec& space,
                         const spaces::Weight& nu,
                         const std::optional<MeasureSpec>& mu,
                         const CriteriaConfig& cfg = {});

struct AuditPair {
  std::string left, right;
  Verdict left_verdict = Verdict::Inconclusive;
  Verdict right_verdict = Verdict::Inconclusive;
  bool pass = false;
  std::string evidence;
};

struct AuditRecord {
  std::vector<AuditPair> pairs;
  std::vector<std::string> exclusions;  // logged degenerate probes etc.
  bool all_pass = true;
};

/// Verdict agreement across the equivalent boundedness, compactness, and
/// order-boundedness conditions, on an already-computed report. The
/// degenerate (gamma = 0, k = 0) probe is excluded from the compactness
/// cross-check and logged.
AuditRecord equivalence_audit(const CriterionReport& report,
                              const spaces::SpaceSpec& space);

}  // namespace wdc::criteria
