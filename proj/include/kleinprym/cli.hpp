#pragma once

// Command implementations behind the kleinprym executable. Each command
// returns its full output as a string so that identical configurations give
// byte-identical results and tests can drive them without a process.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kleinprym/errors.hpp"
#include "kleinprym/f2sym.hpp"
#include "kleinprym/tower.hpp"
#include "kleinprym/verify.hpp"

namespace kleinprym::cli {

inline constexpr const char* kToolName = "kleinprym";
inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kFormatEnv = "KLEINPRYM_FORMAT";

enum class ExitCode : int { Success = 0, CheckFailure = 1, UsageError = 2 };

enum class OutputFormat { Text, Json, Dot };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json") return OutputFormat::Json;
  if (s == "dot") return OutputFormat::Dot;
  throw ParameterError("unknown output format: " + s);
}

inline const char* format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Json: return "json";
    case OutputFormat::Dot: return "dot";
  }
  return "?";
}

/// Format from KLEINPRYM_FORMAT when set, else text.
inline OutputFormat default_format() {
  if (const char* env = std::getenv(kFormatEnv); env && *env) return parse_format(env);
  return OutputFormat::Text;
}

struct RunConfig {
  std::string command;
  std::optional<CaseLabel> case_label;
  std::vector<std::string> generators;
  std::uint32_t prime = 0;
  std::optional<std::vector<std::int64_t>> points;
  std::uint64_t seed = 1;
  int trials = 1;
  int depth = 3;
  OutputFormat format = OutputFormat::Text;
  bool timing = false;
  std::optional<FiberTamper> tamper;
};

struct CommandResult {
  ExitCode exit = ExitCode::Success;
  std::string output;
  std::string error;
};

using nlohmann::json;

inline json envelope(const std::string& command, json input, json results, bool pass) {
  return json{{"tool", kToolName}, {"version", kVersion}, {"command", command},
              {"input", std::move(input)}, {"results", std::move(results)}, {"pass", pass}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::vector<std::string> to_strings(const std::vector<std::int64_t>& v) {
  std::vector<std::string> out;
  for (auto x : v) out.push_back(std::to_string(x));
  return out;
}

inline std::string join_ints(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

// --- classify ----------------------------------------------------------------

struct ExpectedCensus {
  CaseLabel label;
  int count;
};
inline constexpr std::array<ExpectedCensus, 4> kExpectedCensus = {
    {{CaseLabel::I1, 56}, {CaseLabel::I2, 280}, {CaseLabel::II1, 105}, {CaseLabel::II2, 210}}};
inline constexpr int kExpectedIsotropic = 315;
inline constexpr int kExpectedNonIsotropic = 336;
inline constexpr int kExpectedTotal = 651;

inline CommandResult cmd_classify(const RunConfig& cfg) {
  const ClassificationReport r = classification_census();
  std::vector<std::string> diff;
  for (const auto& e : kExpectedCensus)
    if (r.tallies.at(e.label) != e.count)
      diff.push_back(std::string(case_name(e.label)) + ": expected " + std::to_string(e.count) + ", got " +
                     std::to_string(r.tallies.at(e.label)));
  auto check_total = [&](const char* what, int expected, int got) {
    if (expected != got) diff.push_back(std::string(what) + ": expected " + std::to_string(expected) + ", got " + std::to_string(got));
  };
  check_total("isotropic", kExpectedIsotropic, r.isotropic);
  check_total("non-isotropic", kExpectedNonIsotropic, r.non_isotropic);
  check_total("total", kExpectedTotal, r.total);
  const bool pass = diff.empty();

  CommandResult out{pass ? ExitCode::Success : ExitCode::CheckFailure};
  if (cfg.format == OutputFormat::Json) {
    json res;
    for (CaseLabel c : kAllCases) res[case_key(c)] = r.tallies.at(c);
    res["isotropic"] = r.isotropic;
    res["non_isotropic"] = r.non_isotropic;
    res["total"] = r.total;
    res["mismatches"] = diff;
    out.output = dump(envelope("classify", json::object(), res, pass));
  } else if (cfg.format == OutputFormat::Text) {
    std::ostringstream os;
    os << "case   isotropic  count\n";
    for (CaseLabel c : kAllCases) {
      std::string name(case_name(c));
      os << name << std::string(7 - name.size(), ' ') << (case_is_isotropic(c) ? "yes        " : "no         ")
         << r.tallies.at(c) << "\n";
    }
    os << "isotropic      " << r.isotropic << "\n"
       << "non-isotropic  " << r.non_isotropic << "\n"
       << "total          " << r.total << "\n";
    for (const auto& d : diff) os << "MISMATCH " << d << "\n";
    os << (pass ? "census matches 56/280/105/210\n" : "census MISMATCH\n");
    out.output = os.str();
  } else {
    throw ParameterError("classify supports text and json output");
  }
  if (!pass) {
    for (const auto& d : diff) out.error += d + "\n";
  }
  return out;
}

// --- tower -------------------------------------------------------------------

inline KleinSubgroup resolve_subgroup(const RunConfig& cfg) {
  if (cfg.case_label && !cfg.generators.empty()) throw ParameterError("give either --case or --gen, not both");
  if (cfg.case_label) return canonical_subgroup(*cfg.case_label);
  if (cfg.generators.size() != 2) throw ParameterError("expected exactly two --gen subsets or a --case label");
  auto a = canonical_rep(parse_subset(cfg.generators[0]));
  auto b = canonical_rep(parse_subset(cfg.generators[1]));
  return KleinSubgroup::generated_by(a, b);
}

inline std::string polarization_text(const CurveNode& n) {
  return n.restricted_polarization ? n.restricted_polarization->to_string() : "-";
}

inline json tower_json(const TowerDiagram& t, const PrymSummary& s) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json j{{"name", n.name},        {"deck", n.deck_label},   {"genus", n.genus},
           {"degree_over_line", n.deg_over_line}, {"starred", n.starred}};
    j["defining_subset"] = n.defining_subset ? json(subset_to_string(*n.defining_subset)) : json(nullptr);
    if (n.restricted_polarization) {
      j["polarization"] = {{"exponents", n.restricted_polarization->exponents},
                           {"exact", n.restricted_polarization->exact},
                           {"kernel_order", n.restricted_polarization->kernel_order}};
    } else {
      j["polarization"] = nullptr;
    }
    j["hyperelliptic"] = n.hyperelliptic ? json(*n.hyperelliptic) : json(nullptr);
    nodes.push_back(j);
  }
  json edges = json::array();
  for (const auto& e : t.edges) edges.push_back({t.nodes[e.cover].name, t.nodes[e.quotient].name});
  json lifts = json::array();
  for (const auto& l : t.lifts) lifts.push_back({{"label", l.label}, {"flips", l.element.to_string()}, {"fixed_points", l.fixed_points}});
  json comps = json::array();
  for (const auto& c : s.components) {
    json j{{"node", t.nodes[c.node].name}, {"dimension", c.dimension}, {"starred", c.starred},
           {"polarization", c.polarization.to_string()}};
    j["replaces"] = c.replaces ? json(t.nodes[*c.replaces].name) : json(nullptr);
    comps.push_back(j);
  }
  json preds = json::array();
  for (const auto& p : s.isogeny_predictions) {
    std::vector<std::string> f;
    for (int i : p.factors) f.push_back(t.nodes[i].name);
    preds.push_back({{"quotient", t.nodes[p.quotient].name}, {"factors", f}});
  }
  return json{{"case", case_name(t.case_type.label)},
              {"isotropic", t.case_type.isotropic},
              {"subgroup", t.subgroup.to_string()},
              {"s_eta", subset_to_string(t.triple.s_eta)},
              {"s_xi", subset_to_string(t.triple.s_xi)},
              {"nodes", nodes},
              {"edges", edges},
              {"lifts", lifts},
              {"prym", {{"components", comps},
                        {"polarization", s.prym_polarization},
                        {"isogenies", preds},
                        {"moduli_signature", s.moduli_signature},
                        {"moduli_dimension", s.moduli_dimension}}}};
}

inline std::string tower_dot(const TowerDiagram& t) {
  std::ostringstream os;
  os << "digraph tower {\n  rankdir=TB;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    os << "  n" << i << " [label=\"" << n.name << (n.starred ? "*" : "") << "/" << n.genus << "/"
       << polarization_text(n) << "\"];\n";
  }
  for (const auto& e : t.edges) os << "  n" << e.cover << " -> n" << e.quotient << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string tower_text(const TowerDiagram& t, const PrymSummary& s) {
  std::ostringstream os;
  os << "case " << case_name(t.case_type.label) << (t.case_type.isotropic ? " (isotropic)" : " (non-isotropic)")
     << "  subgroup " << t.subgroup.to_string() << "\n";
  os << "s_eta " << subset_to_string(t.triple.s_eta) << "  s_xi " << subset_to_string(t.triple.s_xi) << "\n\n";
  os << "lifts of the hyperelliptic involution (fixed points):\n";
  for (const auto& l : t.lifts) os << "  " << l.label << " " << l.element.to_string() << " " << l.fixed_points << "\n";
  std::vector<std::array<std::string, 8>> rows{
      {"node", "deck", "genus", "deg", "branch set", "star", "polarization", "hyperelliptic"}};
  for (const auto& n : t.nodes)
    rows.push_back({n.name, n.deck_label, std::to_string(n.genus), std::to_string(n.deg_over_line),
                    n.defining_subset ? subset_to_string(*n.defining_subset) : "-", n.starred ? "*" : "",
                    polarization_text(n), n.hyperelliptic ? (*n.hyperelliptic ? "yes" : "no") : "-"});
  std::array<std::size_t, 8> width{};
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  os << "\n";
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  os << "\nprym components (polarization " << join_ints(s.prym_polarization) << "):\n";
  int dim = 0;
  for (const auto& c : s.components) {
    os << "  " << t.nodes[c.node].name << (c.starred ? "*" : "") << "  dim " << c.dimension << "  "
       << c.polarization.to_string();
    if (c.replaces) os << "  (isogenous to " << t.nodes[*c.replaces].name << ")";
    os << "\n";
    dim += c.dimension;
  }
  os << "  total dimension " << dim << "\n\nisogenies:\n";
  for (const auto& p : s.isogeny_predictions) {
    os << "  J" << t.nodes[p.quotient].name << " ~";
    if (p.factors.empty()) os << " 0";
    for (std::size_t i = 0; i < p.factors.size(); ++i) os << (i ? " x " : " ") << t.nodes[p.factors[i]].name;
    os << "\n";
  }
  os << "\nmoduli: P'_" << join_ints(s.moduli_signature) << ", dimension " << s.moduli_dimension << "\n";
  return os.str();
}

inline CommandResult cmd_tower(const RunConfig& cfg) {
  const TowerDiagram t = build_tower(resolve_subgroup(cfg));
  const PrymSummary s = prym_decomposition(t);
  CommandResult out;
  switch (cfg.format) {
    case OutputFormat::Dot: out.output = tower_dot(t); break;
    case OutputFormat::Json: {
      json input{{"subgroup", t.subgroup.to_string()}};
      if (cfg.case_label) input["case"] = case_name(*cfg.case_label);
      out.output = dump(envelope("tower", input, tower_json(t, s), true));
      break;
    }
    case OutputFormat::Text: out.output = tower_text(t, s); break;
  }
  return out;
}

// --- verify / fuzz -------------------------------------------------------------

inline json report_json(const VerificationReport& r, bool timing) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json counts = json::object();
    for (const auto& [k, v] : n.counts) counts["p^" + std::to_string(k)] = std::to_string(v);
    json j{{"name", n.name}, {"genus", n.genus}, {"counts", counts}};
    j["l_polynomial"] = n.l_poly ? json(to_strings(n.l_poly->coeffs)) : json(nullptr);
    nodes.push_back(j);
  }
  json j{{"case", case_name(r.case_type.label)},
         {"subgroup", r.subgroup},
         {"prime", r.branch.p},
         {"points", r.branch.to_string()},
         {"checks", checks},
         {"nodes", nodes},
         {"failures", r.failures()},
         {"pass", r.pass}};
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline std::string report_text(const VerificationReport& r, bool timing) {
  std::ostringstream os;
  os << "case " << case_name(r.case_type.label) << "  subgroup " << r.subgroup << "  p=" << r.branch.p << "  points "
     << r.branch.to_string() << "\n";
  for (const auto& c : r.checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  expected " << c.expected << "  actual " << c.actual << "\n";
  os << (r.pass ? "all " : "") << r.checks.size() - r.failures() << "/" << r.checks.size() << " checks passed\n";
  if (timing) os << "elapsed " << r.elapsed_ms << " ms\n";
  return os.str();
}

inline BranchAssignment resolve_branch(const RunConfig& cfg) {
  if (cfg.prime < kMinVerifyPrime) throw ParameterError("--prime must be at least 11");
  if (cfg.points) return BranchAssignment::make(cfg.prime, *cfg.points);
  return random_branch(cfg.prime, cfg.seed);
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
  if (cfg.format == OutputFormat::Dot) throw ParameterError("verify supports text and json output");
  const KleinSubgroup k = resolve_subgroup(cfg);
  const BranchAssignment b = resolve_branch(cfg);
  const VerificationReport r = verify_config(k, b, VerifyOptions{.depth = cfg.depth, .tamper = cfg.tamper});
  CommandResult out{r.pass ? ExitCode::Success : ExitCode::CheckFailure};
  if (cfg.format == OutputFormat::Json) {
    json input{{"subgroup", k.to_string()}, {"prime", cfg.prime}, {"points", b.to_string()}, {"depth", cfg.depth}};
    if (cfg.case_label) input["case"] = case_name(*cfg.case_label);
    if (!cfg.points) input["seed"] = std::to_string(cfg.seed);
    out.output = dump(envelope("verify", input, report_json(r, cfg.timing), r.pass));
  } else {
    out.output = report_text(r, cfg.timing);
  }
  return out;
}

/// Instance i uses case i mod 4 (I.1, I.2, II.1, II.2) and seed + i.
inline CommandResult cmd_fuzz(const RunConfig& cfg) {
  if (cfg.format == OutputFormat::Dot) throw ParameterError("fuzz supports text and json output");
  if (cfg.trials < 1) throw ParameterError("--trials must be at least 1");
  if (cfg.prime < kMinVerifyPrime) throw ParameterError("--prime must be at least 11");
  int checks = 0, failures = 0, passed = 0;
  json failed = json::array();
  std::ostringstream text;
  for (int i = 0; i < cfg.trials; ++i) {
    CaseLabel c = kAllCases[i % 4];
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    BranchAssignment b = random_branch(cfg.prime, seed);
    VerificationReport r = verify_config(canonical_subgroup(c), b, VerifyOptions{.depth = cfg.depth});
    checks += static_cast<int>(r.checks.size());
    failures += r.failures();
    passed += r.pass ? 1 : 0;
    text << (r.pass ? "PASS " : "FAIL ") << "instance " << i << " case " << case_name(c) << " seed " << seed
         << " points " << b.to_string() << " (" << r.checks.size() - r.failures() << "/" << r.checks.size() << ")\n";
    if (!r.pass) {
      std::vector<std::string> names;
      for (const auto& ch : r.checks)
        if (!ch.pass) {
          names.push_back(ch.name);
          text << "  FAIL " << ch.name << "  expected " << ch.expected << "  actual " << ch.actual << "\n";
        }
      failed.push_back({{"instance", i}, {"case", case_name(c)}, {"seed", std::to_string(seed)},
                        {"points", b.to_string()}, {"failed_checks", names}});
    }
  }
  const bool pass = failures == 0;
  CommandResult out{pass ? ExitCode::Success : ExitCode::CheckFailure};
  if (cfg.format == OutputFormat::Json) {
    json input{{"prime", cfg.prime}, {"seed", std::to_string(cfg.seed)}, {"trials", cfg.trials}, {"depth", cfg.depth}};
    json res{{"instances", cfg.trials}, {"instances_passed", passed}, {"checks", checks}, {"failures", failures},
             {"failed_instances", failed}};
    out.output = dump(envelope("fuzz", input, res, pass));
  } else {
    text << "instances " << cfg.trials << "  passed " << passed << "/" << cfg.trials << "  checks " << checks
         << "  failures " << failures << "\n";
    out.output = text.str();
  }
  return out;
}

/// Dispatch; parameter problems become exit code 2.
inline CommandResult run_command(const RunConfig& cfg) {
  try {
    if (cfg.command == "classify") return cmd_classify(cfg);
    if (cfg.command == "tower") return cmd_tower(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "fuzz") return cmd_fuzz(cfg);
    throw ParameterError("unknown command: " + cfg.command);
  } catch (const std::invalid_argument& e) {
    return {ExitCode::UsageError, "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace kleinprym::cli
