#pragma once

// Scenario ingestion and report emission. Scenario files are JSON: complex
// numbers are [re, im] pairs, symbols and self-maps are finite coefficient
// lists or named builtins (identity, scaled identity, disk automorphism,
// polynomial), so every configured function extends to the closed disk.

#include <optional>
#include <string>
#include <vector>

#include "wdc/criteria.hpp"

namespace wdc::harness {

struct ExpectedVerdicts {
  std::optional<criteria::Verdict> bounded;
  std::optional<criteria::Verdict> compact;
  std::optional<criteria::Verdict> order_bounded;

  bool operator==(const ExpectedVerdicts&) const = default;
};

struct ConfigOverrides {
  std::optional<int> shells;
  std::optional<int> angles;
  std::optional<int> n_max;

  bool operator==(const ConfigOverrides&) const = default;
};

struct Scenario {
  std::string name;
  ops::OperatorSpec op;
  spaces::SpaceSpec space;
  spaces::Weight weight = spaces::Weight::power(0.0);
  std::optional<criteria::MeasureSpec> measure;
  ExpectedVerdicts expected;
  ConfigOverrides overrides;
};

/// Semantic equality: same name, coefficients, parameters, expectations.
bool equivalent(const Scenario& a, const Scenario& b);

/// Named builtins for symbols, self-maps, and probe functions. The string
/// form is "identity", "scaled:<re>[,<im>]", "automorphism:<re>,<im>", or
/// "poly:<re>,<im>[;<re>,<im>...]".
analytic::TaylorFunction builtin_function(const std::string& text);

/// Parse and validate. Throws ParseError (malformed file or field, with a
/// location) or ValidationError (violated invariant, e.g. SELF_MAP_VIOLATION).
std::vector<Scenario> load_scenarios(const std::string& path);
std::vector<Scenario> parse_scenarios(const std::string& json_text,
                                      const std::string& origin = "<memory>");

/// Canonical JSON for a scenario list; parse(serialize(parse(file))) equals
/// parse(file) semantically.
std::string serialize_scenarios(const std::vector<Scenario>& scenarios);

criteria::CriteriaConfig apply_overrides(const Scenario& scenario,
                                         const criteria::CriteriaConfig& base);

struct ScenarioResult {
  std::string name;
  criteria::CriterionReport report;
  criteria::AuditRecord audit;
  std::vector<std::string> mismatches;  // expected vs measured verdicts
};

/// Full criteria report for one scenario, compared against its expected
/// verdicts when present.
ScenarioResult run_report(const Scenario& scenario,
                          const criteria::CriteriaConfig& base = {});

struct RunSummary {
  std::vector<ScenarioResult> results;
  int exit_code = 0;  // 0 all pass, 1 fixture mismatch (2 = input error)
};

RunSummary run_all(const std::vector<Scenario>& scenarios,
                   const criteria::CriteriaConfig& base = {});

/// Deterministic serializations: identical scenarios and config produce
/// byte-identical output.
std::string report_json(const RunSummary& summary);
std::string report_csv(const RunSummary& summary);

}  // namespace wdc::harness
