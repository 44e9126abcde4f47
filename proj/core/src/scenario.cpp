#include "wdc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wdc::harness {

using analytic::TaylorFunction;
using criteria::Verdict;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_parse(const std::string& where, const std::string& msg) {
  throw ParseError(where, msg);
}

const ordered_json& require_field(const ordered_json& obj,
                                  const std::string& key,
                                  const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail_parse(where, "missing required field '" + key + "'");
  }
  return obj.at(key);
}

double as_number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) fail_parse(where, "expected a number");
  return j.get<double>();
}

int as_int(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer()) fail_parse(where, "expected an integer");
  return j.get<int>();
}

std::string as_string(const ordered_json& j, const std::string& where) {
  if (!j.is_string()) fail_parse(where, "expected a string");
  return j.get<std::string>();
}

Complex parse_complex(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail_parse(where, "complex numbers are [re, im] pairs");
  }
  return Complex{j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> parse_coeffs(const ordered_json& j,
                                  const std::string& where) {
  if (!j.is_array() || j.empty()) {
    fail_parse(where, "expected a non-empty array of [re, im] pairs");
  }
  std::vector<Complex> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

TaylorFunction parse_symbol(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) fail_parse(where, "expected an object");
  if (j.contains("builtin")) {
    const std::string name = as_string(j.at("builtin"), where + ".builtin");
    if (name == "identity") {
      return TaylorFunction({Complex{0.0, 0.0}, Complex{1.0, 0.0}});
    }
    if (name == "scaled") {
      const Complex c = parse_complex(require_field(j, "c", where), where + ".c");
      return TaylorFunction({Complex{0.0, 0.0}, c});
    }
    if (name == "automorphism") {
      const Complex a = parse_complex(require_field(j, "a", where), where + ".a");
      if (!(std::abs(a) < 1.0)) {
        throw ValidationError(ValidationError::Kind::ParameterRange,
                              where + ": automorphism anchor must satisfy |a| < 1");
      }
      return analytic::mobius(analytic::DiskPoint(a)).truncated();
    }
    if (name == "polynomial") {
      return TaylorFunction(
          parse_coeffs(require_field(j, "coeffs", where), where + ".coeffs"));
    }
    fail_parse(where + ".builtin", "unknown builtin '" + name +
                                       "' (identity, scaled, automorphism, "
                                       "polynomial)");
  }
  if (j.contains("coeffs")) {
    return TaylorFunction(parse_coeffs(j.at("coeffs"), where + ".coeffs"));
  }
  fail_parse(where, "symbol needs 'coeffs' or 'builtin'");
}

spaces::SpaceSpec parse_space(const ordered_json& j, const std::string& where) {
  const std::string kind = as_string(require_field(j, "kind", where),
                                     where + ".kind");
  if (kind == "HINF") return spaces::SpaceSpec::hinf();
  if (kind == "GROWTH") {
    return spaces::SpaceSpec::growth(
        as_number(require_field(j, "alpha", where), where + ".alpha"));
  }
  if (kind == "BERGMAN") {
    return spaces::SpaceSpec::bergman(
        as_number(require_field(j, "p", where), where + ".p"),
        as_number(require_field(j, "alpha", where), where + ".alpha"));
  }
  if (kind == "HARDY") {
    return spaces::SpaceSpec::hardy(
        as_number(require_field(j, "p", where), where + ".p"));
  }
  fail_parse(where + ".kind",
             "unknown space kind '" + kind + "' (HINF, GROWTH, BERGMAN, HARDY)");
}

spaces::Weight parse_weight(const ordered_json& j, const std::string& where) {
  const std::string form = as_string(require_field(j, "form", where),
                                     where + ".form");
  if (form == "POWER") {
    return spaces::Weight::power(
        as_number(require_field(j, "beta", where), where + ".beta"));
  }
  if (form == "SAMPLED") {
    const ordered_json& jr = require_field(j, "radii", where);
    const ordered_json& jv = require_field(j, "values", where);
    if (!jr.is_array() || !jv.is_array()) {
      fail_parse(where, "SAMPLED weight needs 'radii' and 'values' arrays");
    }
    std::vector<double> radii, values;
    for (size_t i = 0; i < jr.size(); ++i) {
      radii.push_back(as_number(jr[i], where + ".radii"));
    }
    for (size_t i = 0; i < jv.size(); ++i) {
      values.push_back(as_number(jv[i], where + ".values"));
    }
    std::string label = "sampled";
    if (j.contains("label")) label = as_string(j.at("label"), where + ".label");
    return spaces::Weight::sampled(std::move(radii), std::move(values),
                                   std::move(label));
  }
  fail_parse(where + ".form", "unknown weight form '" + form +
                                  "' (POWER, SAMPLED)");
}

criteria::MeasureSpec parse_measure(const ordered_json& j,
                                    const std::string& where) {
  const std::string kind = as_string(require_field(j, "kind", where),
                                     where + ".kind");
  const double q = as_number(require_field(j, "q", where), where + ".q");
  if (kind == "BOUNDARY") return criteria::MeasureSpec::boundary(q);
  if (kind == "AREA") {
    return criteria::MeasureSpec::area(
        as_number(require_field(j, "beta", where), where + ".beta"), q);
  }
  fail_parse(where + ".kind",
             "unknown measure kind '" + kind + "' (BOUNDARY, AREA)");
}

Verdict parse_expected_verdict(const ordered_json& j, const std::string& where) {
  const std::string v = as_string(j, where);
  if (v == "YES") return Verdict::Yes;
  if (v == "NO") return Verdict::No;
  fail_parse(where, "expected verdicts are YES or NO");
}

Scenario parse_scenario(const ordered_json& j, const std::string& where) {
  Scenario s;
  s.name = as_string(require_field(j, "name", where), where + ".name");

  const ordered_json& jop = require_field(j, "operator", where);
  const std::string wop = where + ".operator";
  const ordered_json& jsym = require_field(jop, "symbols", wop);
  if (!jsym.is_array() || jsym.empty()) {
    fail_parse(wop + ".symbols", "expected a non-empty array of symbols");
  }
  std::vector<TaylorFunction> symbols;
  for (size_t i = 0; i < jsym.size(); ++i) {
    symbols.push_back(
        parse_symbol(jsym[i], wop + ".symbols[" + std::to_string(i) + "]"));
  }
  if (jop.contains("n")) {
    const int n = as_int(jop.at("n"), wop + ".n");
    if (n + 1 != static_cast<int>(symbols.size())) {
      throw ValidationError(
          ValidationError::Kind::ParameterRange,
          wop + ": operator of order n needs exactly n+1 symbols (n = " +
              std::to_string(n) + ", got " + std::to_string(symbols.size()) +
              ")");
    }
  }
  TaylorFunction tau = parse_symbol(require_field(jop, "tau", wop), wop + ".tau");
  try {
    s.op = ops::OperatorSpec::validated(std::move(symbols), std::move(tau));
  } catch (const ValidationError& e) {
    throw ValidationError(e.kind(), where + " ('" + s.name + "'): " + e.what());
  }

  s.space = parse_space(require_field(j, "source_space", where),
                        where + ".source_space");
  s.weight = parse_weight(require_field(j, "target_weight", where),
                          where + ".target_weight");
  if (j.contains("order_bound_target")) {
    s.measure = parse_measure(j.at("order_bound_target"),
                              where + ".order_bound_target");
  }
  if (j.contains("expected")) {
    const ordered_json& je = j.at("expected");
    const std::string we = where + ".expected";
    if (!je.is_object()) fail_parse(we, "expected an object");
    if (je.contains("bounded")) {
      s.expected.bounded = parse_expected_verdict(je.at("bounded"), we + ".bounded");
    }
    if (je.contains("compact")) {
      s.expected.compact = parse_expected_verdict(je.at("compact"), we + ".compact");
    }
    if (je.contains("order_bounded")) {
      s.expected.order_bounded =
          parse_expected_verdict(je.at("order_bounded"), we + ".order_bounded");
    }
  }
  if (j.contains("config")) {
    const ordered_json& jc = j.at("config");
    const std::string wc = where + ".config";
    if (!jc.is_object()) fail_parse(wc, "expected an object");
    if (jc.contains("shells")) {
      s.overrides.shells = as_int(jc.at("shells"), wc + ".shells");
    }
    if (jc.contains("angles")) {
      s.overrides.angles = as_int(jc.at("angles"), wc + ".angles");
    }
    if (jc.contains("nmax")) {
      s.overrides.n_max = as_int(jc.at("nmax"), wc + ".nmax");
    }
  }
  return s;
}

ordered_json complex_json(Complex c) {
  return ordered_json::array({c.real(), c.imag()});
}

ordered_json coeffs_json(const TaylorFunction& f) {
  ordered_json arr = ordered_json::array();
  for (const Complex& c : f.coeffs) arr.push_back(complex_json(c));
  return ordered_json{{"coeffs", arr}};
}

ordered_json space_json(const spaces::SpaceSpec& space) {
  switch (space.kind) {
    case spaces::SpaceKind::HInf:
      return ordered_json{{"kind", "HINF"}};
    case spaces::SpaceKind::Growth:
      return ordered_json{{"kind", "GROWTH"}, {"alpha", space.alpha}};
    case spaces::SpaceKind::Bergman:
      return ordered_json{
          {"kind", "BERGMAN"}, {"p", space.p}, {"alpha", space.alpha}};
    case spaces::SpaceKind::Hardy:
      return ordered_json{{"kind", "HARDY"}, {"p", space.p}};
  }
  throw Error("unknown space kind");
}

ordered_json weight_json(const spaces::Weight& w) {
  if (w.form() == spaces::Weight::Form::Power) {
    return ordered_json{{"form", "POWER"}, {"beta", w.beta()}};
  }
  // Sampled weights are re-tabulated on their own grid by evaluation; the
  // table is not exposed, so serialize a fine resample.
  ordered_json radii = ordered_json::array();
  ordered_json values = ordered_json::array();
  for (int i = 0; i <= 64; ++i) {
    const double r = static_cast<double>(i) / 64.0;
    radii.push_back(r);
    values.push_back(w.at_radius(r));
  }
  return ordered_json{{"form", "SAMPLED"},
                      {"radii", radii},
                      {"values", values},
                      {"label", w.label()}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ordered_json quantity_json(const criteria::QuantityEstimate& est) {
  ordered_json trace = ordered_json::array();
  for (const auto& pt : est.trace) {
    trace.push_back(ordered_json::array({pt.level, pt.value}));
  }
  return ordered_json{{"class", criteria::to_string(est.cls)},
                      {"value", est.value},
                      {"trace", trace}};
}

}  // namespace

bool equivalent(const Scenario& a, const Scenario& b) {
  const auto same_fn = [](const TaylorFunction& f, const TaylorFunction& g) {
    return f.coeffs == g.coeffs;
  };
  if (a.name != b.name) return false;
  if (a.op.symbols.size() != b.op.symbols.size()) return false;
  for (size_t i = 0; i < a.op.symbols.size(); ++i) {
    if (!same_fn(a.op.symbols[i], b.op.symbols[i])) return false;
  }
  if (!same_fn(a.op.tau, b.op.tau)) return false;
  if (a.space.kind != b.space.kind || a.space.p != b.space.p ||
      a.space.alpha != b.space.alpha) {
    return false;
  }
  if (a.weight.form() != b.weight.form()) return false;
  if (a.weight.form() == spaces::Weight::Form::Power) {
    if (a.weight.beta() != b.weight.beta()) return false;
  } else {
    for (int i = 0; i <= 64; ++i) {
      const double r = static_cast<double>(i) / 64.0;
      if (a.weight.at_radius(r) != b.weight.at_radius(r)) return false;
    }
  }
  if (a.measure.has_value() != b.measure.has_value()) return false;
  if (a.measure &&
      (a.measure->kind != b.measure->kind || a.measure->beta != b.measure->beta ||
       a.measure->q != b.measure->q)) {
    return false;
  }
  return a.expected == b.expected && a.overrides == b.overrides;
}

analytic::TaylorFunction builtin_function(const std::string& text) {
  const auto split_args = [](const std::string& s) {
    std::vector<double> out;
    std::string token;
    std::istringstream is(s);
    while (std::getline(is, token, ',')) {
      size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &pos);
      } catch (const std::exception&) {
        throw ParseError("", "bad numeric argument '" + token + "'");
      }
      if (pos != token.size()) {
        throw ParseError("", "bad numeric argument '" + token + "'");
      }
      out.push_back(v);
    }
    return out;
  };

  const size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : text.substr(colon + 1);

  if (name == "identity") {
    return TaylorFunction({Complex{0.0, 0.0}, Complex{1.0, 0.0}});
  }
  if (name == "scaled") {
    const std::vector<double> v = split_args(args);
    if (v.empty() || v.size() > 2) {
      throw ParseError("", "scaled:<re>[,<im>]");
    }
    return TaylorFunction(
        {Complex{0.0, 0.0}, Complex{v[0], v.size() == 2 ? v[1] : 0.0}});
  }
  if (name == "automorphism") {
    const std::vector<double> v = split_args(args);
    if (v.size() != 2) throw ParseError("", "automorphism:<re>,<im>");
    return analytic::mobius(analytic::DiskPoint(Complex{v[0], v[1]}))
        .truncated();
  }
  if (name == "poly") {
    std::vector<Complex> coeffs;
    std::string term;
    std::istringstream is(args);
    while (std::getline(is, term, ';')) {
      const std::vector<double> v = split_args(term);
      if (v.empty() || v.size() > 2) {
        throw ParseError("", "poly:<re>,<im>[;<re>,<im>...]");
      }
      coeffs.push_back(Complex{v[0], v.size() == 2 ? v[1] : 0.0});
    }
    if (coeffs.empty()) throw ParseError("", "poly needs coefficients");
    return TaylorFunction(std::move(coeffs));
  }
  throw ParseError("", "unknown builtin '" + name +
                           "' (identity, scaled, automorphism, poly)");
}

std::vector<Scenario> parse_scenarios(const std::string& json_text,
                                      const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + " (byte " + std::to_string(e.byte) + ")",
                     e.what());
  }
  const ordered_json& js = require_field(doc, "scenarios", origin);
  if (!js.is_array()) fail_parse(origin + ".scenarios", "expected an array");
  std::vector<Scenario> out;
  out.reserve(js.size());
  for (size_t i = 0; i < js.size(); ++i) {
    out.push_back(parse_scenario(
        js[i], origin + ".scenarios[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenarios(buf.str(), path);
}

std::string serialize_scenarios(const std::vector<Scenario>& scenarios) {
  ordered_json arr = ordered_json::array();
  for (const Scenario& s : scenarios) {
    ordered_json js;
    js["name"] = s.name;
    ordered_json jop;
    jop["n"] = s.op.order();
    ordered_json syms = ordered_json::array();
    for (const TaylorFunction& u : s.op.symbols) syms.push_back(coeffs_json(u));
    jop["symbols"] = syms;
    jop["tau"] = coeffs_json(s.op.tau);
    js["operator"] = jop;
    js["source_space"] = space_json(s.space);
    js["target_weight"] = weight_json(s.weight);
    if (s.measure) {
      ordered_json jm;
      jm["kind"] =
          s.measure->kind == criteria::MeasureSpec::Kind::Boundary ? "BOUNDARY"
                                                                   : "AREA";
      if (s.measure->kind == criteria::MeasureSpec::Kind::Area) {
        jm["beta"] = s.measure->beta;
      }
      jm["q"] = s.measure->q;
      js["order_bound_target"] = jm;
    }
    if (s.expected.bounded || s.expected.compact || s.expected.order_bounded) {
      ordered_json je;
      if (s.expected.bounded) je["bounded"] = criteria::to_string(*s.expected.bounded);
      if (s.expected.compact) je["compact"] = criteria::to_string(*s.expected.compact);
      if (s.expected.order_bounded) {
        je["order_bounded"] = criteria::to_string(*s.expected.order_bounded);
      }
      js["expected"] = je;
    }
    if (s.overrides.shells || s.overrides.angles || s.overrides.n_max) {
      ordered_json jc;
      if (s.overrides.shells) jc["shells"] = *s.overrides.shells;
      if (s.overrides.angles) jc["angles"] = *s.overrides.angles;
      if (s.overrides.n_max) jc["nmax"] = *s.overrides.n_max;
      js["config"] = jc;
    }
    arr.push_back(js);
  }
  ordered_json doc;
  doc["scenarios"] = arr;
  return doc.dump(2) + "\n";
}

criteria::CriteriaConfig apply_overrides(const Scenario& scenario,
                                         const criteria::CriteriaConfig& base) {
  criteria::CriteriaConfig cfg = base;
  if (scenario.overrides.shells) cfg.shells = *scenario.overrides.shells;
  if (scenario.overrides.angles) cfg.max_angles = *scenario.overrides.angles;
  if (scenario.overrides.n_max) cfg.n_max = *scenario.overrides.n_max;
  return cfg;
}

ScenarioResult run_report(const Scenario& scenario,
                          const criteria::CriteriaConfig& base) {
  ScenarioResult result;
  result.name = scenario.name;
  const criteria::CriteriaConfig cfg = apply_overrides(scenario, base);
  result.report = criteria::evaluate(scenario.op, scenario.space,
                                     scenario.weight, scenario.measure, cfg);
  result.audit = criteria::equivalence_audit(result.report, scenario.space);

  const auto check = [&](const char* label,
                         const std::optional<Verdict>& expected,
                         Verdict measured) {
    if (expected && *expected != measured) {
      result.mismatches.push_back(std::string(label) + ": expected " +
                                  criteria::to_string(*expected) + ", got " +
                                  criteria::to_string(measured));
    }
  };
  check("bounded", scenario.expected.bounded, result.report.bounded);
  check("compact", scenario.expected.compact, result.report.compact);
  check("order_bounded", scenario.expected.order_bounded,
        result.report.order_bounded);
  return result;
}

RunSummary run_all(const std::vector<Scenario>& scenarios,
                   const criteria::CriteriaConfig& base) {
  RunSummary summary;
  summary.results.reserve(scenarios.size());
  for (const Scenario& s : scenarios) {
    summary.results.push_back(run_report(s, base));
    if (!summary.results.back().mismatches.empty()) summary.exit_code = 1;
  }
  return summary;
}

std::string report_json(const RunSummary& summary) {
  ordered_json arr = ordered_json::array();
  for (const ScenarioResult& r : summary.results) {
    ordered_json js;
    js["name"] = r.name;
    js["gamma"] = r.report.gamma_value;
    js["tau_sup"] = r.report.tau_sup;
    js["boundary_touching"] = r.report.boundary_touching;
    js["verdicts"] =
        ordered_json{{"bounded", criteria::to_string(r.report.bounded)},
                     {"compact", criteria::to_string(r.report.compact)},
                     {"order_bounded",
                      criteria::to_string(r.report.order_bounded)}};
    js["mismatches"] = r.mismatches;

    ordered_json per_k = ordered_json::array();
    for (size_t k = 0; k < r.report.per_k.size(); ++k) {
      const auto& slot = r.report.per_k[k];
      ordered_json jk;
      jk["k"] = k;
      jk["M"] = quantity_json(slot.Mk);
      jk["G"] = quantity_json(slot.Gk);
      if (slot.Qk) jk["Q"] = quantity_json(*slot.Qk);
      jk["testfn_sup"] = quantity_json(slot.testfn_sup);
      jk["testfn_limit"] = quantity_json(slot.testfn_limit);
      per_k.push_back(jk);
    }
    ordered_json q;
    q["per_k"] = per_k;
    q["sum_M"] = quantity_json(r.report.sum_M);
    q["sum_G"] = quantity_json(r.report.sum_G);
    if (r.report.sum_Q) q["sum_Q"] = quantity_json(*r.report.sum_Q);
    if (r.report.monomial_sup) {
      q["monomial_sup"] = quantity_json(*r.report.monomial_sup);
    }
    if (r.report.monomial_limit) {
      q["monomial_limit"] = quantity_json(*r.report.monomial_limit);
    }
    js["quantities"] = q;

    ordered_json pairs = ordered_json::array();
    for (const auto& p : r.audit.pairs) {
      pairs.push_back(ordered_json{{"left", p.left},
                                   {"right", p.right},
                                   {"left_verdict", criteria::to_string(p.left_verdict)},
                                   {"right_verdict", criteria::to_string(p.right_verdict)},
                                   {"pass", p.pass},
                                   {"evidence", p.evidence}});
    }
    js["audit"] = ordered_json{{"pairs", pairs},
                               {"exclusions", r.audit.exclusions},
                               {"all_pass", r.audit.all_pass}};
    arr.push_back(js);
  }
  ordered_json doc;
  doc["tool"] = "wdc";
  doc["exit_code"] = summary.exit_code;
  doc["scenarios"] = arr;
  return doc.dump(2) + "\n";
}

std::string report_csv(const RunSummary& summary) {
  std::ostringstream os;
  os << "scenario,k,M_k,M_class,G_k,G_class,Q_k,Q_class,bounded,compact,"
        "order_bounded\n";
  for (const ScenarioResult& r : summary.results) {
    for (size_t k = 0; k < r.report.per_k.size(); ++k) {
      const auto& slot = r.report.per_k[k];
      os << r.name << "," << k << "," << fmt(slot.Mk.value) << ","
         << criteria::to_string(slot.Mk.cls) << "," << fmt(slot.Gk.value) << ","
         << criteria::to_string(slot.Gk.cls) << ",";
      if (slot.Qk) {
        os << fmt(slot.Qk->value) << "," << criteria::to_string(slot.Qk->cls);
      } else {
        os << ",";
      }
      os << "," << criteria::to_string(r.report.bounded) << ","
         << criteria::to_string(r.report.compact) << ","
         << criteria::to_string(r.report.order_bounded) << "\n";
    }
  }
  return os.str();
}

}  // namespace wdc::harness
