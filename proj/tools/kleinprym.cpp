// kleinprym: census, tower inspection, verification and fuzzing of Klein
// coverings of genus-3 hyperelliptic curves.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kleinprym/cli.hpp"

namespace {

using kleinprym::cli::ExitCode;

std::vector<std::int64_t> parse_points(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw kleinprym::ParameterError("bad branch point: " + item);
    }
  }
  return out;
}

// "k:x" with x a field index, or "k:inf".
kleinprym::FiberTamper parse_tamper(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw kleinprym::ParameterError("--tamper-fiber expects k:x");
  kleinprym::FiberTamper t;
  t.exponent = std::stoi(text.substr(0, colon));
  std::string x = text.substr(colon + 1);
  t.x_index = x == "inf" ? ~0ull : std::stoull(x);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Klein coverings of genus-3 hyperelliptic curves: census, towers, point-count verification"};
  app.require_subcommand(1);

  std::string format;
  std::string output_path;
  std::string case_text;
  std::vector<std::string> gens;
  std::uint32_t prime = 0;
  std::string points_text;
  std::uint64_t seed = 1;
  int trials = 1;
  int depth = 3;
  bool timing = false;
  std::string tamper_text;

  app.add_option("--format", format, "text, json or dot (default from KLEINPRYM_FORMAT, else text)")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("-o,--output", output_path, "write output to this file instead of stdout");

  auto add_subgroup = [&](CLI::App* sub) {
    sub->add_option("--case", case_text, "case label: I.1, I.2, II.1, II.2");
    sub->add_option("--gen", gens, "generator subset, e.g. 12 or 1,3,4,5 (give twice)");
  };
  auto* classify = app.add_subcommand("classify", "census of the 651 Klein subgroups");
  auto* tower = app.add_subcommand("tower", "print the covering tower of one Klein subgroup");
  auto* verify = app.add_subcommand("verify", "verify one instance over F_p");
  auto* fuzz = app.add_subcommand("fuzz", "verify seeded random instances across all four cases");
  add_subgroup(tower);
  add_subgroup(verify);
  for (auto* sub : {verify, fuzz}) {
    sub->add_option("--prime", prime, "prime p >= 11")->required();
    sub->add_option("--seed", seed, "seed for random branch points");
    sub->add_option("--depth", depth, "largest q-exponent for the top-count and trace identities")
        ->check(CLI::Range(1, 4));
    sub->add_flag("--timing", timing, "include wall-clock timing (output is then not reproducible)");
  }
  verify->add_option("--points", points_text, "eight distinct residues u_1..u_8, comma-separated");
  verify->add_option("--tamper-fiber", tamper_text, "testing: add 1 to the top-curve fiber k:x")->group("");
  fuzz->add_option("--trials", trials, "number of instances");
  for (auto* sub : {classify, tower, verify, fuzz}) {
    sub->add_option("--format", format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("-o,--output", output_path, "write output to this file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::UsageError);
  }

  kleinprym::cli::CommandResult result;
  try {
    kleinprym::cli::RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format.empty() ? kleinprym::cli::default_format() : kleinprym::cli::parse_format(format);
    if (!case_text.empty()) cfg.case_label = kleinprym::parse_case(case_text);
    cfg.generators = gens;
    cfg.prime = prime;
    if (!points_text.empty()) cfg.points = parse_points(points_text);
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.depth = depth;
    cfg.timing = timing;
    if (!tamper_text.empty()) {
      auto t = parse_tamper(tamper_text);
      if (t.x_index == ~0ull) {
        std::uint64_t q = 1;
        for (int i = 0; i < t.exponent; ++i) q *= prime;
        t.x_index = q;
      }
      cfg.tamper = t;
    }
    result = kleinprym::cli::run_command(cfg);
  } catch (const std::invalid_argument& e) {
    result = {ExitCode::UsageError, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    result = {ExitCode::CheckFailure, "", std::string("internal error: ") + e.what() + "\n"};
  }

  if (!result.output.empty()) {
    if (output_path.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream f(output_path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write " << output_path << "\n";
        return static_cast<int>(ExitCode::UsageError);
      }
      f << result.output;
    }
  }
  std::cerr << result.error;
  return static_cast<int>(result.exit);
}
