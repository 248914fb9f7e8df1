// Builds the tower for a Klein subgroup given on the command line (default
// <{1,2},{3,4}>) and checks one instance of it over F_13.
//
//   sample_tower 12 1345

#include <iostream>

#include "kleinprym/verify.hpp"

int main(int argc, char** argv) {
  using namespace kleinprym;
  const auto a = TwoTorsion::from_subset(parse_subset(argc > 2 ? argv[1] : "12"));
  const auto b = TwoTorsion::from_subset(parse_subset(argc > 2 ? argv[2] : "34"));
  const auto subgroup = KleinSubgroup::generated_by(a, b);

  const TowerDiagram tower = build_tower(subgroup);
  std::cout << subgroup.to_string() << " is case " << case_name(tower.case_type.label) << "\n";
  for (const auto& n : tower.nodes)
    std::cout << "  " << n.name << (n.starred ? "*" : "") << " genus " << n.genus << "\n";

  const PrymSummary prym = prym_decomposition(tower);
  std::cout << "Prym pieces:";
  for (const auto& c : prym.components) std::cout << " " << tower.nodes[c.node].name << c.polarization.to_string();
  std::cout << "\n";

  const auto report = verify_config(subgroup, random_branch(13, 1));
  std::cout << report.checks.size() - report.failures() << "/" << report.checks.size() << " identities hold over F_13\n";
  return report.pass ? 0 : 1;
}
