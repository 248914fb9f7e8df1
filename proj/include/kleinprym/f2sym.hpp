#pragma once

// Two-torsion of a genus-3 hyperelliptic Jacobian in the Weierstrass-subset
// model: classes of even subsets of {1..8} modulo complementation, the
// symplectic form |S ∩ T| mod 2, and the 651 Klein four-subgroups.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kleinprym/errors.hpp"

namespace kleinprym {

/// Subset of the Weierstrass index set I = {1..8}; bit (i-1) marks index i.
using IndexMask = std::uint8_t;

inline constexpr int kBranchCount = 8;
inline constexpr IndexMask kFullSet = 0xFF;

inline int subset_size(IndexMask s) { return std::popcount(static_cast<unsigned>(s)); }

inline std::vector<int> subset_indices(IndexMask s) {
  std::vector<int> out;
  for (int i = 0; i < kBranchCount; ++i)
    if (s & (1u << i)) out.push_back(i + 1);
  return out;
}

inline IndexMask subset_from_indices(std::initializer_list<int> idx) {
  unsigned m = 0;
  for (int i : idx) {
    if (i < 1 || i > kBranchCount)
      throw InvalidSubset("Weierstrass index out of range: " + std::to_string(i));
    m |= 1u << (i - 1);
  }
  return static_cast<IndexMask>(m);
}

/// Parses "1345" or "1,3,4,5" (indices 1..8, no repeats).
inline IndexMask parse_subset(std::string_view text) {
  unsigned m = 0;
  bool any = false;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '{' || c == '}') continue;
    if (c < '1' || c > '8') throw InvalidSubset("bad subset text: " + std::string(text));
    unsigned bit = 1u << (c - '1');
    if (m & bit) throw InvalidSubset("repeated index in subset: " + std::string(text));
    m |= bit;
    any = true;
  }
  if (!any) throw InvalidSubset("empty subset text");
  return static_cast<IndexMask>(m);
}

inline std::string subset_to_string(IndexMask s) {
  std::string out = "{";
  bool first = true;
  for (int i : subset_indices(s)) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

/// Lexicographic order on the sorted element lists of two subsets.
inline bool subset_lex_less(IndexMask a, IndexMask b) {
  auto la = subset_indices(a);
  auto lb = subset_indices(b);
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

/// (size, lex) order used for canonical generator choice and stable output.
inline bool subset_size_lex_less(IndexMask a, IndexMask b) {
  int sa = subset_size(a), sb = subset_size(b);
  if (sa != sb) return sa < sb;
  return subset_lex_less(a, b);
}

/// Canonical representative of the class of an even subset: the smaller of
/// {S, I∖S}; for |S| = 4 the one containing index 1 (lexicographically first).
inline IndexMask canonical_subset(IndexMask raw) {
  int n = subset_size(raw);
  if (n % 2 != 0)
    throw InvalidSubset("odd-cardinality subset " + subset_to_string(raw) + " is not a 2-torsion class");
  if (n > 4) return static_cast<IndexMask>(~raw);
  if (n == 4 && !(raw & 1u)) return static_cast<IndexMask>(~raw);
  return raw;
}

/// A point of JH[2] ≅ F₂⁶, stored as its canonical subset.
class TwoTorsion {
 public:
  TwoTorsion() = default;

  /// canonical_rep: accepts any even subset, including non-canonical ones.
  static TwoTorsion from_subset(IndexMask raw) { return TwoTorsion(canonical_subset(raw)); }
  static TwoTorsion of(std::initializer_list<int> idx) { return from_subset(subset_from_indices(idx)); }

  IndexMask rep() const { return rep_; }
  int size() const { return subset_size(rep_); }
  bool is_zero() const { return rep_ == 0; }
  std::string to_string() const { return subset_to_string(rep_); }

  friend bool operator==(TwoTorsion a, TwoTorsion b) { return a.rep_ == b.rep_; }
  friend std::strong_ordering operator<=>(TwoTorsion a, TwoTorsion b) {
    if (a.rep_ == b.rep_) return std::strong_ordering::equal;
    return subset_size_lex_less(a.rep_, b.rep_) ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  friend TwoTorsion operator+(TwoTorsion a, TwoTorsion b) { return from_subset(a.rep_ ^ b.rep_); }

 private:
  explicit TwoTorsion(IndexMask canonical) : rep_(canonical) {}
  IndexMask rep_ = 0;
};

inline TwoTorsion canonical_rep(IndexMask raw) { return TwoTorsion::from_subset(raw); }
inline TwoTorsion tt_add(TwoTorsion a, TwoTorsion b) { return a + b; }

/// e(S,T) = |S ∩ T| mod 2. Independent of representatives since all have even size.
inline int weil_pairing(TwoTorsion a, TwoTorsion b) { return subset_size(a.rep() & b.rep()) & 1; }

/// All 64 classes: zero first, then (size, lex) order.
inline std::vector<TwoTorsion> enumerate_two_torsion() {
  std::set<TwoTorsion> seen;
  for (unsigned m = 0; m < 256; ++m)
    if (subset_size(static_cast<IndexMask>(m)) % 2 == 0) seen.insert(TwoTorsion::from_subset(static_cast<IndexMask>(m)));
  return {seen.begin(), seen.end()};
}

/// Order-4 subgroup {0, a, b, a+b}; the three nonzero elements are kept sorted.
class KleinSubgroup {
 public:
  /// Throws ParameterError unless a, b are nonzero and distinct.
  static KleinSubgroup generated_by(TwoTorsion a, TwoTorsion b) {
    if (a.is_zero() || b.is_zero() || a == b)
      throw ParameterError("generators " + a.to_string() + ", " + b.to_string() +
                           " do not span a Klein four-subgroup");
    KleinSubgroup k;
    k.elems_ = {a, b, a + b};
    std::sort(k.elems_.begin(), k.elems_.end());
    return k;
  }

  const std::array<TwoTorsion, 3>& elements() const { return elems_; }
  bool contains(TwoTorsion x) const { return x.is_zero() || std::find(elems_.begin(), elems_.end(), x) != elems_.end(); }
  std::string to_string() const {
    return "<" + elems_[0].to_string() + "," + elems_[1].to_string() + "," + elems_[2].to_string() + ">";
  }

  friend bool operator==(const KleinSubgroup&, const KleinSubgroup&) = default;
  friend auto operator<=>(const KleinSubgroup& a, const KleinSubgroup& b) { return a.elems_ <=> b.elems_; }

 private:
  KleinSubgroup() = default;
  std::array<TwoTorsion, 3> elems_{};
};

/// The 651 order-4 subgroups of JH[2], sorted.
inline std::vector<KleinSubgroup> enumerate_klein_subgroups() {
  std::set<KleinSubgroup> seen;
  auto all = enumerate_two_torsion();
  for (std::size_t i = 1; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) seen.insert(KleinSubgroup::generated_by(all[i], all[j]));
  return {seen.begin(), seen.end()};
}

enum class CaseLabel { I1, I2, II1, II2 };

inline constexpr std::array<CaseLabel, 4> kAllCases = {CaseLabel::I1, CaseLabel::I2, CaseLabel::II1, CaseLabel::II2};

inline std::string_view case_name(CaseLabel c) {
  switch (c) {
    case CaseLabel::I1: return "I.1";
    case CaseLabel::I2: return "I.2";
    case CaseLabel::II1: return "II.1";
    case CaseLabel::II2: return "II.2";
  }
  return "?";
}

/// JSON key form: "I1", "I2", "II1", "II2".
inline std::string case_key(CaseLabel c) {
  std::string s(case_name(c));
  s.erase(std::remove(s.begin(), s.end(), '.'), s.end());
  return s;
}

/// Accepts "I.2", "I2", "i.2".
inline CaseLabel parse_case(std::string_view text) {
  std::string norm;
  for (char c : text)
    if (c != '.') norm += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (CaseLabel c : kAllCases)
    if (norm == case_key(c)) return c;
  throw ParameterError("unknown case label: " + std::string(text));
}

inline bool case_is_isotropic(CaseLabel c) { return c == CaseLabel::II1 || c == CaseLabel::II2; }

struct CaseType {
  CaseLabel label;
  bool isotropic;
  friend bool operator==(const CaseType&, const CaseType&) = default;
};

inline CaseType classify_subgroup(const KleinSubgroup& k) {
  const auto& e = k.elements();
  bool isotropic = weil_pairing(e[0], e[1]) == 0 && weil_pairing(e[0], e[2]) == 0 && weil_pairing(e[1], e[2]) == 0;
  int twos = 0;
  for (auto x : e) {
    if (x.size() == 2)
      ++twos;
    else if (x.size() != 4)
      throw InternalConsistencyError("Klein subgroup element of size " + std::to_string(x.size()));
  }
  // twos: 3 -> {2,2,2}, 1 -> {2,4,4}, 0 -> {4,4,4}, 2 -> {2,2,4}
  static constexpr std::array<CaseLabel, 4> by_twos = {CaseLabel::II1, CaseLabel::I2, CaseLabel::II2, CaseLabel::I1};
  CaseLabel label = by_twos[twos];
  if (case_is_isotropic(label) != isotropic)
    throw InternalConsistencyError("size pattern of " + k.to_string() + " disagrees with its isotropy");
  return {label, isotropic};
}

struct ClassificationReport {
  std::map<CaseLabel, int> tallies;
  int isotropic = 0;
  int non_isotropic = 0;
  int total = 0;
};

inline ClassificationReport classification_census() {
  ClassificationReport r;
  for (CaseLabel c : kAllCases) r.tallies[c] = 0;
  for (const auto& k : enumerate_klein_subgroups()) {
    auto t = classify_subgroup(k);
    ++r.tallies[t.label];
    ++(t.isotropic ? r.isotropic : r.non_isotropic);
    ++r.total;
  }
  return r;
}

/// Generators listed for each case: ({1,2},{1,3}), ({1,2},{1,3,4,5}),
/// ({1,2,3,4},{1,2,5,6}), ({1,2},{3,4}).
inline KleinSubgroup canonical_subgroup(CaseLabel c) {
  switch (c) {
    case CaseLabel::I1: return KleinSubgroup::generated_by(TwoTorsion::of({1, 2}), TwoTorsion::of({1, 3}));
    case CaseLabel::I2: return KleinSubgroup::generated_by(TwoTorsion::of({1, 2}), TwoTorsion::of({1, 3, 4, 5}));
    case CaseLabel::II1: return KleinSubgroup::generated_by(TwoTorsion::of({1, 2, 3, 4}), TwoTorsion::of({1, 2, 5, 6}));
    case CaseLabel::II2: return KleinSubgroup::generated_by(TwoTorsion::of({1, 2}), TwoTorsion::of({3, 4}));
  }
  throw ParameterError("unknown case");
}

}  // namespace kleinprym
