#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "wdc/lemmas.hpp"
#include "wdc/scenario.hpp"

using namespace wdc;
using namespace wdc::harness;

namespace {

const std::string kData = WDC_TEST_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WDC_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

criteria::CriteriaConfig mini_config() {
  criteria::CriteriaConfig cfg;
  cfg.shells = 12;
  cfg.max_angles = 256;
  cfg.a_angles = 4;
  cfg.n_max = 48;
  return cfg;
}

}  // namespace

TEST_CASE("load_scenarios: well-formed file") {
  const auto scenarios = load_scenarios(kData + "/fixtures.json");
  REQUIRE(scenarios.size() == 6);
  CHECK(scenarios[0].name == "identity-hinf-into-decaying-weight");
  CHECK(scenarios[0].op.order() == 0);
  CHECK(scenarios[0].expected.bounded == criteria::Verdict::Yes);
  CHECK(scenarios[3].op.order() == 1);
  CHECK_FALSE(scenarios[3].op.boundary_touching);
  CHECK(scenarios[4].measure.has_value());
  CHECK(scenarios[4].measure->kind == criteria::MeasureSpec::Kind::Boundary);
}

TEST_CASE("load_scenarios: malformed input raises ParseError with location") {
  CHECK_THROWS_AS(load_scenarios(kData + "/malformed.json"), ParseError);
  CHECK_THROWS_AS(load_scenarios(kData + "/does_not_exist.json"), ParseError);
  try {
    parse_scenarios(R"({"scenarios": [{"name": 3}]})", "probe");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("scenarios[0]") != std::string::npos);
  }
}

TEST_CASE("load_scenarios: invariant violations raise ValidationError") {
  try {
    load_scenarios(kData + "/invalid_selfmap.json");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ValidationError::Kind::SelfMapViolation);
  }
  try {
    load_scenarios(kData + "/invalid_param.json");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ValidationError::Kind::ParameterRange);
  }
  // Wrong symbol count for the declared order.
  CHECK_THROWS_AS(parse_scenarios(R"({"scenarios": [{
    "name": "bad-n",
    "operator": {"n": 2, "symbols": [{"coeffs": [[1, 0]]}],
                 "tau": {"builtin": "identity"}},
    "source_space": {"kind": "HINF"},
    "target_weight": {"form": "POWER", "beta": 1}
  }]})"),
                  ValidationError);
  // INCONCLUSIVE is not a valid expected verdict.
  CHECK_THROWS_AS(parse_scenarios(R"({"scenarios": [{
    "name": "bad-expected",
    "operator": {"symbols": [{"coeffs": [[1, 0]]}],
                 "tau": {"builtin": "identity"}},
    "source_space": {"kind": "HINF"},
    "target_weight": {"form": "POWER", "beta": 1},
    "expected": {"bounded": "INCONCLUSIVE"}
  }]})"),
                  ParseError);
}

TEST_CASE("builtin function registry") {
  using analytic::evaluate;
  const auto ident = builtin_function("identity");
  CHECK(evaluate(ident, Complex{0.3, 0.1}) == Complex{0.3, 0.1});

  const auto scaled = builtin_function("scaled:0.5");
  CHECK(evaluate(scaled, Complex{0.4, 0.0}) == Complex{0.2, 0.0});

  const auto rot = builtin_function("scaled:0,1");
  CHECK(std::abs(evaluate(rot, Complex{0.5, 0.0}) - Complex{0.0, 0.5}) < 1e-15);

  const auto sigma = builtin_function("automorphism:0.5,0");
  CHECK(std::abs(evaluate(sigma, Complex{0.5, 0.0})) < 1e-9);

  const auto poly = builtin_function("poly:1,0;0,0;2,0");
  CHECK(std::abs(evaluate(poly, Complex{0.5, 0.0}) - Complex{1.5, 0.0}) < 1e-15);

  CHECK_THROWS_AS(builtin_function("fourier"), ParseError);
  CHECK_THROWS_AS(builtin_function("scaled:abc"), ParseError);
  CHECK_THROWS_AS(builtin_function("automorphism:2,0"), ValidationError);
}

TEST_CASE("round-trip: serialize(parse(file)) re-parses to the same scenarios") {
  const auto first = load_scenarios(kData + "/fixtures.json");
  const std::string text = serialize_scenarios(first);
  const auto second = parse_scenarios(text, "round-trip");
  REQUIRE(second.size() == first.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(equivalent(first[i], second[i]));
  }
  // Serialization is stable from the first normalization on.
  CHECK(serialize_scenarios(second) == text);
}

TEST_CASE("run_report compares expected verdicts") {
  const auto scenarios = load_scenarios(kData + "/fixtures_mini.json");
  const ScenarioResult ok = run_report(scenarios[0], mini_config());
  CHECK(ok.mismatches.empty());

  const auto broken = load_scenarios(kData + "/broken_expectation.json");
  const ScenarioResult bad = run_report(broken[0], mini_config());
  REQUIRE(!bad.mismatches.empty());
  CHECK(bad.mismatches[0].find("compact") != std::string::npos);

  const RunSummary summary = run_all(broken, mini_config());
  CHECK(summary.exit_code == 1);
}

TEST_CASE("reports are deterministic and carry one CSV row per (scenario, k)") {
  const auto scenarios = load_scenarios(kData + "/fixtures_mini.json");
  const RunSummary a = run_all(scenarios, mini_config());
  const RunSummary b = run_all(scenarios, mini_config());
  CHECK(report_json(a) == report_json(b));
  CHECK(report_csv(a) == report_csv(b));

  const std::string csv = report_csv(a);
  size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  // Header plus (order+1) rows per scenario: 1 + (1 + 2).
  CHECK(rows == 4);
  CHECK(csv.find("scenario,k,M_k,M_class,G_k,G_class,Q_k,Q_class,bounded,"
                 "compact,order_bounded") == 0);
}

TEST_CASE("CLI: check exit codes and byte-identical reruns") {
  const std::string out1 = "check_run1.json";
  const std::string out2 = "check_run2.json";
  const std::string base = "\"" + kData + "/fixtures_mini.json\"";
  CHECK(run_cli("check " + base + " --out " + out1 + " > /dev/null") == 0);
  CHECK(run_cli("check " + base + " --out " + out2 + " > /dev/null") == 0);
  CHECK(slurp(out1) == slurp(out2));

  const std::string csv_out = "check_run1.csv";
  CHECK(run_cli("check " + base + " --out " + csv_out + " > /dev/null") == 0);
  CHECK(slurp(csv_out).find("scenario,k,") == 0);

  CHECK(run_cli("check \"" + kData + "/broken_expectation.json\" > /dev/null") ==
        1);
  CHECK(run_cli("check \"" + kData + "/does_not_exist.json\" 2> /dev/null") ==
        2);
  CHECK(run_cli("check \"" + kData + "/malformed.json\" 2> /dev/null") == 2);
  CHECK(run_cli("check \"" + kData + "/invalid_selfmap.json\" 2> /dev/null") ==
        2);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(csv_out.c_str());
}

TEST_CASE("CLI: audit and probe") {
  const std::string mini = "\"" + kData + "/fixtures_mini.json\"";
  CHECK(run_cli("audit " + mini + " > /dev/null") == 0);
  CHECK(run_cli("probe mini-identity --scenarios " + mini +
                " --function identity --at 0.3,0.1 > /dev/null") == 0);
  CHECK(run_cli("probe nope --scenarios " + mini +
                " --function identity --at 0.3,0.1 2> /dev/null") == 2);
  CHECK(run_cli("probe mini-identity --scenarios " + mini +
                " --function identity --at 1.5,0 2> /dev/null") == 2);
  // Usage problems are input errors too; help is not.
  CHECK(run_cli("no-such-subcommand 2> /dev/null") == 2);
  CHECK(run_cli("check 2> /dev/null") == 2);
  CHECK(run_cli("--help > /dev/null") == 0);
}

TEST_CASE("sampled weights parse from scenario JSON") {
  const auto scenarios = parse_scenarios(R"({"scenarios": [{
    "name": "sampled-weight",
    "operator": {"symbols": [{"coeffs": [[1, 0]]}],
                 "tau": {"builtin": "scaled", "c": [0.5, 0]}},
    "source_space": {"kind": "HARDY", "p": 2},
    "target_weight": {"form": "SAMPLED",
                       "radii": [0, 0.5, 0.9, 1.0],
                       "values": [1.0, 0.8, 0.3, 0.05],
                       "label": "table"}
  }]})");
  REQUIRE(scenarios.size() == 1);
  CHECK(scenarios[0].weight.form() == spaces::Weight::Form::Sampled);
  CHECK(scenarios[0].weight.at_radius(0.0) == 1.0);
  CHECK(scenarios[0].weight.at_radius(0.97) > 0.0);
  // Round-trips through the canonical serialization.
  const auto again =
      parse_scenarios(serialize_scenarios(scenarios), "round-trip");
  CHECK(equivalent(scenarios[0], again[0]));
}

TEST_CASE("verify_lemmas emits the sign flag and passes its tolerances") {
  LemmaConfig cfg;
  cfg.n_max = 128;
  const LemmaReport report = verify_lemmas(cfg);
  CHECK(report.all_ok);
  bool saw_flag = false;
  size_t unit_bound_items = 0;
  for (const auto& item : report.items) {
    if (item.name.find("A^-1") != std::string::npos &&
        item.status == "FLAG") {
      saw_flag = true;
      CHECK(item.note.find("sign") != std::string::npos);
    }
    if (item.name.find("unit-bound") == 0) {
      ++unit_bound_items;
      CHECK(item.measured <= 1.0 + 1e-6);
    }
  }
  CHECK(saw_flag);
  CHECK(unit_bound_items == 16);  // 4 spaces x k <= 3

  const std::string text = lemma_report_json(report);
  CHECK(text.find("\"all_ok\": true") != std::string::npos);
}

TEST_CASE("probe ratios stay within a constant multiple of sum M_k") {
  // Operator-norm lower bounds from the probe family never exceed 10x the
  // summed boundedness suprema on the bounded fixture scenarios.
  const auto scenarios = load_scenarios(kData + "/fixtures.json");
  const spaces::QuadratureConfig quad;
  criteria::CriteriaConfig cfg = mini_config();
  for (const Scenario& s : scenarios) {
    const criteria::CriterionReport report =
        criteria::evaluate(s.op, s.space, s.weight, std::nullopt, cfg);
    if (report.bounded != criteria::Verdict::Yes) continue;
    const auto probes = ops::default_probe_family(
        s.op.order(), spaces::gamma(s.space), 32);
    const double lower = ops::operator_norm_lower_bound(
        s.op, s.space, s.weight, probes, cfg.sup_grid(), quad);
    CHECK(report.sum_M.cls == criteria::Classification::Finite);
    CHECK(lower <= 10.0 * report.sum_M.value);
  }
}
