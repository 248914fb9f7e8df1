#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <bit>
#include <set>

#include "kleinprym/f2sym.hpp"

using namespace kleinprym;

namespace {

IndexMask S(std::initializer_list<int> idx) { return subset_from_indices(idx); }
TwoTorsion T(std::initializer_list<int> idx) { return TwoTorsion::of(idx); }

}  // namespace

TEST(CanonicalRep, PrefersSmallerComplement) {
  EXPECT_EQ(canonical_rep(S({1, 2, 3, 4, 5, 6})).rep(), S({7, 8}));
  EXPECT_EQ(canonical_rep(kFullSet).rep(), 0);
  EXPECT_TRUE(canonical_rep(kFullSet).is_zero());
}

TEST(CanonicalRep, SizeFourTieTakesLexSmaller) {
  EXPECT_EQ(canonical_rep(S({2, 4, 6, 8})).rep(), S({1, 3, 5, 7}));
  EXPECT_EQ(canonical_rep(S({1, 3, 5, 7})).rep(), S({1, 3, 5, 7}));
}

TEST(CanonicalRep, RejectsOddSubsets) {
  EXPECT_THROW(canonical_rep(S({1})), InvalidSubset);
  EXPECT_THROW(canonical_rep(S({1, 2, 3})), InvalidSubset);
}

TEST(CanonicalRep, ComplementInvariantOnEveryEvenSubset) {
  for (unsigned raw = 0; raw < 256; ++raw) {
    if (subset_size(static_cast<IndexMask>(raw)) % 2) continue;
    auto a = canonical_rep(static_cast<IndexMask>(raw));
    auto b = canonical_rep(static_cast<IndexMask>(~raw));
    EXPECT_EQ(a, b);
    EXPECT_LE(a.size(), 4);
  }
}

TEST(ParseSubset, AcceptsDigitsCommasAndBraces) {
  EXPECT_EQ(parse_subset("1345"), S({1, 3, 4, 5}));
  EXPECT_EQ(parse_subset("1,3,4,5"), S({1, 3, 4, 5}));
  EXPECT_EQ(parse_subset("{1,2}"), S({1, 2}));
  EXPECT_THROW(parse_subset("19"), InvalidSubset);
  EXPECT_THROW(parse_subset("1a"), InvalidSubset);
  EXPECT_EQ(subset_to_string(S({3, 1})), "{1,3}");
}

TEST(Addition, SymmetricDifference) {
  EXPECT_EQ(T({1, 2}) + T({1, 3}), T({2, 3}));
  EXPECT_EQ(tt_add(T({1, 2}), T({1, 3, 4, 5})), T({2, 3, 4, 5}));
  EXPECT_TRUE(tt_add(T({1, 2}), T({1, 2})).is_zero());
}

TEST(Addition, GroupLawOnAllTriples) {
  auto all = enumerate_two_torsion();
  for (auto a : all)
    for (auto b : all) {
      EXPECT_EQ(a + b, b + a);
      for (auto c : all) ASSERT_EQ((a + b) + c, a + (b + c));
    }
}

TEST(WeilPairing, Examples) {
  EXPECT_EQ(weil_pairing(T({1, 2}), T({1, 3})), 1);
  EXPECT_EQ(weil_pairing(T({1, 2}), T({3, 4})), 0);
  for (auto a : enumerate_two_torsion()) EXPECT_EQ(weil_pairing(a, a), 0);
}

TEST(WeilPairing, Bilinear) {
  auto all = enumerate_two_torsion();
  for (auto a : all)
    for (auto b : all)
      for (auto c : all) ASSERT_EQ(weil_pairing(a + b, c), weil_pairing(a, c) ^ weil_pairing(b, c));
}

TEST(WeilPairing, NonDegenerate) {
  auto all = enumerate_two_torsion();
  for (auto a : all) {
    if (a.is_zero()) continue;
    bool found = false;
    for (auto b : all) found = found || weil_pairing(a, b) == 1;
    EXPECT_TRUE(found) << a.to_string();
  }
}

TEST(WeilPairing, IndependentOfRepresentative) {
  for (unsigned x = 0; x < 256; ++x)
    for (unsigned y = 0; y < 256; ++y) {
      if (std::popcount(x) % 2 || std::popcount(y) % 2) continue;
      int raw = std::popcount(x & y) & 1;
      ASSERT_EQ(raw, weil_pairing(canonical_rep(static_cast<IndexMask>(x)), canonical_rep(static_cast<IndexMask>(y))));
    }
}

TEST(Enumeration, SixtyFourClasses) {
  auto all = enumerate_two_torsion();
  ASSERT_EQ(all.size(), 64u);
  std::set<IndexMask> reps;
  int twos = 0, fours = 0;
  for (auto a : all) {
    reps.insert(a.rep());
    twos += a.size() == 2;
    fours += a.size() == 4;
  }
  EXPECT_EQ(reps.size(), 64u);
  EXPECT_EQ(twos, 28);
  EXPECT_EQ(fours, 35);
  EXPECT_TRUE(all.front().is_zero());
}

TEST(KleinSubgroups, GeneratedByRejectsDegenerateInput) {
  EXPECT_THROW(KleinSubgroup::generated_by(T({1, 2}), T({1, 2})), ParameterError);
  EXPECT_THROW(KleinSubgroup::generated_by(TwoTorsion{}, T({1, 2})), ParameterError);
  auto k = KleinSubgroup::generated_by(T({1, 3}), T({1, 2}));
  EXPECT_EQ(k.to_string(), "<{1,2},{1,3},{2,3}>");
  EXPECT_EQ(k, KleinSubgroup::generated_by(T({2, 3}), T({1, 2})));
}

TEST(KleinSubgroups, SixHundredFiftyOneDistinctClosedSubgroups) {
  auto all = enumerate_klein_subgroups();
  ASSERT_EQ(all.size(), 651u);
  std::set<std::string> seen;
  for (const auto& k : all) {
    const auto& e = k.elements();
    EXPECT_EQ(e[0] + e[1], e[2]);
    EXPECT_FALSE(e[0].is_zero());
    EXPECT_TRUE(e[0] != e[1] && e[1] != e[2] && e[0] != e[2]);
    seen.insert(k.to_string());
  }
  EXPECT_EQ(seen.size(), 651u);
}

// Brute force on raw masks: unordered triples {a, b, a^b} of nonzero classes,
// where a class is an even mask identified with its complement.
TEST(KleinSubgroups, CountMatchesRawMaskEnumeration) {
  auto cls = [](unsigned m) { return std::min(m, 0xFFu ^ m); };
  std::set<std::array<unsigned, 3>> triples;
  for (unsigned a = 1; a < 255; ++a)
    for (unsigned b = 1; b < 255; ++b) {
      if (std::popcount(a) % 2 || std::popcount(b) % 2) continue;
      unsigned x = cls(a), y = cls(b), z = cls(a ^ b);
      if (x == y || z == 0) continue;
      std::array<unsigned, 3> t{x, y, z};
      std::sort(t.begin(), t.end());
      triples.insert(t);
    }
  EXPECT_EQ(triples.size(), enumerate_klein_subgroups().size());
}

TEST(Classification, CanonicalGenerators) {
  auto i1 = classify_subgroup(KleinSubgroup::generated_by(T({1, 2}), T({1, 3})));
  EXPECT_EQ(i1.label, CaseLabel::I1);
  EXPECT_FALSE(i1.isotropic);
  auto i2 = classify_subgroup(KleinSubgroup::generated_by(T({1, 2}), T({1, 3, 4, 5})));
  EXPECT_EQ(i2.label, CaseLabel::I2);
  EXPECT_FALSE(i2.isotropic);
  auto ii1 = classify_subgroup(KleinSubgroup::generated_by(T({1, 2, 3, 4}), T({1, 2, 5, 6})));
  EXPECT_EQ(ii1.label, CaseLabel::II1);
  EXPECT_TRUE(ii1.isotropic);
  auto ii2 = classify_subgroup(KleinSubgroup::generated_by(T({1, 2}), T({3, 4})));
  EXPECT_EQ(ii2.label, CaseLabel::II2);
  EXPECT_TRUE(ii2.isotropic);
  for (auto c : kAllCases) EXPECT_EQ(classify_subgroup(canonical_subgroup(c)).label, c);
}

TEST(Classification, IsotropyMatchesPairingEverywhere) {
  for (const auto& k : enumerate_klein_subgroups()) {
    const auto& e = k.elements();
    bool iso = weil_pairing(e[0], e[1]) == 0 && weil_pairing(e[1], e[2]) == 0 && weil_pairing(e[0], e[2]) == 0;
    auto c = classify_subgroup(k);
    EXPECT_EQ(c.isotropic, iso);
    EXPECT_EQ(c.isotropic, case_is_isotropic(c.label));
  }
}

// Swapping any generator for its complement (the other representative) leaves the class unchanged.
TEST(Classification, ComplementIndependent) {
  for (const auto& k : enumerate_klein_subgroups()) {
    const auto& e = k.elements();
    auto a = TwoTorsion::from_subset(static_cast<IndexMask>(~e[0].rep()));
    auto b = TwoTorsion::from_subset(static_cast<IndexMask>(~e[1].rep()));
    EXPECT_EQ(classify_subgroup(KleinSubgroup::generated_by(a, b)).label, classify_subgroup(k).label);
  }
}

TEST(Census, MatchesTable) {
  auto r = classification_census();
  EXPECT_EQ(r.tallies.at(CaseLabel::I1), 56);
  EXPECT_EQ(r.tallies.at(CaseLabel::I2), 280);
  EXPECT_EQ(r.tallies.at(CaseLabel::II1), 105);
  EXPECT_EQ(r.tallies.at(CaseLabel::II2), 210);
  EXPECT_EQ(r.isotropic, 315);
  EXPECT_EQ(r.non_isotropic, 336);
  EXPECT_EQ(r.total, 651);
}

TEST(Cases, NamesRoundTrip) {
  for (auto c : kAllCases) {
    EXPECT_EQ(parse_case(case_name(c)), c);
    EXPECT_EQ(parse_case(case_key(c)), c);
  }
  EXPECT_THROW(parse_case("III"), ParameterError);
}
