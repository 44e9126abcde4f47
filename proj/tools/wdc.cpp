// Command-line front end: scenario checks, lemma verification, equivalence
// audits, and single-point probes. Exit codes: 0 all pass, 1 fixture or
// audit mismatch, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wdc/lemmas.hpp"
#include "wdc/scenario.hpp"

namespace {

using namespace wdc;

int write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  out << content;
  return 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_check(const std::string& path, const std::string& out,
              const criteria::CriteriaConfig& cfg) {
  const std::vector<harness::Scenario> scenarios =
      harness::load_scenarios(path);
  const harness::RunSummary summary = harness::run_all(scenarios, cfg);
  for (const auto& r : summary.results) {
    std::cout << (r.mismatches.empty() ? "PASS  " : "FAIL  ") << r.name
              << "  bounded=" << criteria::to_string(r.report.bounded)
              << " compact=" << criteria::to_string(r.report.compact)
              << " order_bounded="
              << criteria::to_string(r.report.order_bounded) << "\n";
    for (const std::string& m : r.mismatches) {
      std::cout << "      mismatch: " << m << "\n";
    }
  }
  if (!out.empty()) {
    const std::string content = ends_with(out, ".csv")
                                    ? harness::report_csv(summary)
                                    : harness::report_json(summary);
    const int rc = write_output(out, content);
    if (rc != 0) return rc;
  }
  return summary.exit_code;
}

int run_audit(const std::string& path, const criteria::CriteriaConfig& cfg) {
  const std::vector<harness::Scenario> scenarios =
      harness::load_scenarios(path);
  int exit_code = 0;
  for (const harness::Scenario& s : scenarios) {
    const harness::ScenarioResult r = harness::run_report(s, cfg);
    std::cout << r.name << "\n";
    for (const auto& p : r.audit.pairs) {
      std::cout << "  " << (p.pass ? "PASS" : "FAIL") << "  " << p.left
                << " <-> " << p.right << "  ["
                << criteria::to_string(p.left_verdict) << " vs "
                << criteria::to_string(p.right_verdict) << "]  " << p.evidence
                << "\n";
      if (!p.pass) exit_code = 1;
    }
    for (const std::string& e : r.audit.exclusions) {
      std::cout << "  note: " << e << "\n";
    }
  }
  return exit_code;
}

int run_verify_lemmas(int nmax, const std::string& out) {
  harness::LemmaConfig cfg;
  cfg.n_max = nmax;
  const harness::LemmaReport report = harness::verify_lemmas(cfg);
  for (const auto& item : report.items) {
    std::cout << item.status << "  " << item.name << "  measured="
              << item.measured << " expected=" << item.expected << " (+-"
              << item.tolerance << ")";
    if (!item.note.empty()) std::cout << "  " << item.note;
    std::cout << "\n";
  }
  if (!out.empty()) {
    const int rc = write_output(out, harness::lemma_report_json(report));
    if (rc != 0) return rc;
  }
  return report.all_ok ? 0 : 1;
}

int run_probe(const std::string& name, const std::string& scenarios_path,
              const std::string& function, const std::string& at) {
  const std::vector<harness::Scenario> scenarios =
      harness::load_scenarios(scenarios_path);
  const harness::Scenario* found = nullptr;
  for (const harness::Scenario& s : scenarios) {
    if (s.name == name) {
      found = &s;
      break;
    }
  }
  if (!found) {
    std::cerr << "error: no scenario named '" << name << "' in "
              << scenarios_path << "\n";
    return 2;
  }
  double re = 0.0, im = 0.0;
  {
    std::istringstream is(at);
    char comma = 0;
    if (!(is >> re >> comma >> im) || comma != ',') {
      std::cerr << "error: --at expects <re>,<im>\n";
      return 2;
    }
  }
  const analytic::TaylorFunction f = harness::builtin_function(function);
  const analytic::DiskPoint z(re, im);
  const Complex value = ops::apply(found->op, f, z.value());
  std::cout << "scenario " << found->name << ": (S f)(" << re << (im < 0 ? "" : "+")
            << im << "i) = " << value.real() << (value.imag() < 0 ? "" : "+")
            << value.imag() << "i  |.| = " << std::abs(value) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Boundedness, compactness, and order-boundedness criteria for finite "
      "sums of weighted differentiation composition operators on the disk. "
      "WDC_SEED is reserved; all computations are deterministic."};
  app.require_subcommand(1);

  int shells = 16;
  int angles = 1024;
  int nmax = 256;

  std::string check_path, check_out;
  CLI::App* check = app.add_subcommand("check", "Run scenario reports");
  check->add_option("scenarios", check_path, "Scenario JSON file")->required();
  check->add_option("--out", check_out, "Report file (.json or .csv)");
  check->add_option("--shells", shells, "Refinement shells (default 16)");
  check->add_option("--angles", angles, "Max angle count (default 1024)");
  check->add_option("--nmax", nmax, "Monomial condition range (default 256)");

  std::string lemmas_out;
  CLI::App* lemmas =
      app.add_subcommand("verify-lemmas", "Run the lemma verification suite");
  lemmas->add_option("--nmax", nmax, "Largest monomial degree (default 256)");
  lemmas->add_option("--out", lemmas_out, "Report file (JSON)");

  std::string audit_path;
  CLI::App* audit =
      app.add_subcommand("audit", "Equivalence audit across criteria");
  audit->add_option("scenarios", audit_path, "Scenario JSON file")->required();
  audit->add_option("--shells", shells, "Refinement shells (default 16)");
  audit->add_option("--angles", angles, "Max angle count (default 1024)");

  std::string probe_name, probe_function, probe_at;
  std::string probe_scenarios = "scenarios.json";
  CLI::App* probe =
      app.add_subcommand("probe", "Apply the operator at a single point");
  probe->add_option("name", probe_name, "Scenario name")->required();
  probe->add_option("--function", probe_function,
                    "Builtin: identity | scaled:<re>[,<im>] | "
                    "automorphism:<re>,<im> | poly:<re>,<im>[;...]")
      ->required();
  probe->add_option("--at", probe_at, "Evaluation point <re>,<im>")->required();
  probe->add_option("--scenarios", probe_scenarios,
                    "Scenario file (default scenarios.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are input errors (exit 2); --help stays 0.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  wdc::criteria::CriteriaConfig cfg;
  cfg.shells = shells;
  cfg.max_angles = angles;
  cfg.n_max = nmax;

  try {
    if (*check) return run_check(check_path, check_out, cfg);
    if (*audit) return run_audit(audit_path, cfg);
    if (*lemmas) return run_verify_lemmas(nmax, lemmas_out);
    if (*probe) {
      return run_probe(probe_name, probe_scenarios, probe_function, probe_at);
    }
  } catch (const wdc::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const wdc::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
