#pragma once

// The (Z/2)^3 covering tower above P^1 attached to a Klein subgroup.
//
// A Klein subgroup <eta, xi> with lifted subsets s_eta, s_xi defines the
// multiquadratic function field k(x, sqrt f_eta, sqrt f_xi, sqrt f_I), where
// f_S = prod_{i in S} (x - u_i). Its Galois group over k(x) is F_2^3; a deck
// element (a,b,c) flips the signs of the three square roots. The 16 subgroups
// give the 16 quotient curves: the top curve (genus 9), seven order-2
// quotients, seven order-4 quotients (each a double cover y^2 = f_T of P^1)
// and P^1 itself.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kleinprym/errors.hpp"
#include "kleinprym/f2sym.hpp"

namespace kleinprym {

struct SubsetTriple {
  IndexMask s_eta = 0;
  IndexMask s_xi = 0;

  IndexMask s_sum() const { return static_cast<IndexMask>(s_eta ^ s_xi); }
  friend bool operator==(const SubsetTriple&, const SubsetTriple&) = default;
};

/// s_eta and s_xi are the two smallest canonical elements of K in (size, lex) order.
inline SubsetTriple lift_generators(const KleinSubgroup& k) {
  const auto& e = k.elements();
  return {e[0].rep(), e[1].rep()};
}

/// Element of the deck group F_2^3. Bit 0 flips sqrt(f_eta), bit 1 flips
/// sqrt(f_xi), bit 2 flips sqrt(f_I).
class DeckElement {
 public:
  constexpr DeckElement() = default;
  constexpr explicit DeckElement(unsigned bits) : bits_(static_cast<std::uint8_t>(bits & 7u)) {}
  constexpr DeckElement(int a, int b, int c) : bits_(static_cast<std::uint8_t>((a & 1) | (b & 1) << 1 | (c & 1) << 2)) {}

  constexpr unsigned bits() const { return bits_; }
  constexpr int flip(int coord) const { return (bits_ >> coord) & 1; }
  constexpr bool is_identity() const { return bits_ == 0; }
  /// Lifts of the hyperelliptic involution of H are exactly the elements flipping sqrt(f_I).
  constexpr bool is_lift() const { return flip(2) == 1; }
  /// Sign acting on sqrt(f_{coord}): +1 or -1.
  constexpr int sign(int coord) const { return flip(coord) ? -1 : 1; }

  /// (a,b,c) tuple order.
  constexpr unsigned lex_key() const { return flip(0) * 4u + flip(1) * 2u + flip(2); }

  std::string to_string() const {
    return "(" + std::to_string(flip(0)) + "," + std::to_string(flip(1)) + "," + std::to_string(flip(2)) + ")";
  }

  friend constexpr DeckElement operator*(DeckElement x, DeckElement y) { return DeckElement(x.bits_ ^ y.bits_); }
  friend constexpr bool operator==(DeckElement, DeckElement) = default;

 private:
  std::uint8_t bits_ = 0;
};

inline constexpr DeckElement kSigma{1, 0, 0};
inline constexpr DeckElement kTau{0, 1, 0};
inline constexpr DeckElement kIota{0, 0, 1};

/// Characters of F_2^3 use the same bit layout: chi(g) = parity(chi & g).
using Character = unsigned;

inline int character_value(Character chi, DeckElement g) { return std::popcount(chi & g.bits()) & 1; }

/// Subgroup of F_2^3 stored as an 8-bit membership mask (bit g set iff g in K).
class DeckSubgroup {
 public:
  constexpr DeckSubgroup() = default;

  static DeckSubgroup span(std::initializer_list<DeckElement> gens) {
    DeckSubgroup k;
    for (auto g : gens) k = k.join_element(g);
    return k;
  }
  static constexpr DeckSubgroup full() { return from_mask(0xFF); }
  static constexpr DeckSubgroup from_mask(std::uint8_t m) {
    DeckSubgroup k;
    k.mask_ = m;
    return k;
  }

  constexpr std::uint8_t mask() const { return mask_; }
  int order() const { return std::popcount(static_cast<unsigned>(mask_)); }
  bool contains(DeckElement g) const { return (mask_ >> g.bits()) & 1u; }
  bool is_subgroup_of(DeckSubgroup o) const { return (mask_ & ~o.mask_) == 0; }

  std::vector<DeckElement> elements() const {
    std::vector<DeckElement> out;
    for (unsigned g = 0; g < 8; ++g)
      if (contains(DeckElement(g))) out.emplace_back(g);
    return out;
  }

  DeckSubgroup join_element(DeckElement g) const {
    std::uint8_t m = mask_;
    for (unsigned h = 0; h < 8; ++h)
      if (m & (1u << h)) m |= static_cast<std::uint8_t>(1u << (h ^ g.bits()));
    DeckSubgroup k;
    k.mask_ = m;
    return k;
  }

  DeckSubgroup join(DeckSubgroup o) const {
    DeckSubgroup k = *this;
    for (auto g : o.elements()) k = k.join_element(g);
    return k;
  }

  bool character_trivial(Character chi) const {
    for (auto g : elements())
      if (character_value(chi, g)) return false;
    return true;
  }

  /// Nonzero characters trivial on this subgroup; they index the quadratic
  /// subfields of the quotient's function field.
  std::vector<Character> trivial_characters() const {
    std::vector<Character> out;
    for (Character chi = 1; chi < 8; ++chi)
      if (character_trivial(chi)) out.push_back(chi);
    return out;
  }

  /// Subgroups of index 2 in this one.
  std::vector<DeckSubgroup> maximal_subgroups() const;

  friend constexpr bool operator==(DeckSubgroup, DeckSubgroup) = default;

 private:
  std::uint8_t mask_ = 1;  // {identity}
};

/// All 16 subgroups of F_2^3 ordered by order, then by mask.
inline std::vector<DeckSubgroup> all_deck_subgroups() {
  std::vector<DeckSubgroup> out;
  for (unsigned m = 0; m < 256; ++m) {
    if (!(m & 1u)) continue;
    bool closed = true;
    for (unsigned a = 0; a < 8 && closed; ++a)
      for (unsigned b = 0; b < 8 && closed; ++b)
        if ((m >> a & 1u) && (m >> b & 1u) && !(m >> (a ^ b) & 1u)) closed = false;
    if (closed) out.push_back(DeckSubgroup::from_mask(static_cast<std::uint8_t>(m)));
  }
  std::stable_sort(out.begin(), out.end(), [](DeckSubgroup x, DeckSubgroup y) { return x.order() < y.order(); });
  return out;
}

inline std::vector<DeckSubgroup> DeckSubgroup::maximal_subgroups() const {
  std::vector<DeckSubgroup> out;
  for (auto s : all_deck_subgroups())
    if (s.is_subgroup_of(*this) && 2 * s.order() == order()) out.push_back(s);
  return out;
}

/// Branch subset of the quadratic subfield attached to a nonzero character:
/// a*s_eta Δ b*s_xi Δ c*I, without complement reduction.
inline IndexMask character_subset(const SubsetTriple& t, Character chi) {
  unsigned m = 0;
  if (chi & 1u) m ^= t.s_eta;
  if (chi & 2u) m ^= t.s_xi;
  if (chi & 4u) m ^= kFullSet;
  return static_cast<IndexMask>(m);
}

/// Index 0 unused; entries 1..7 are the subsets of the nonzero characters.
inline std::array<IndexMask, 8> character_subsets(const SubsetTriple& t) {
  std::array<IndexMask, 8> out{};
  for (Character chi = 1; chi < 8; ++chi) out[chi] = character_subset(t, chi);
  return out;
}

/// Genus of y^2 = f_T: |T|/2 - 1.
inline int genus_quadratic(IndexMask t) {
  int n = subset_size(t);
  if (n == 0) throw NotACurve("empty branch set does not define a double cover");
  if (n % 2) throw InvalidSubset("odd branch set " + subset_to_string(t));
  return n / 2 - 1;
}

/// Fixed points of each deck element on the top curve, indexed by element
/// bits. Over each branch point u_i the four points of the top curve are
/// fixed by the inertia element (i in s_eta, i in s_xi, 1).
using FixedPointTable = std::array<int, 8>;

inline FixedPointTable fixed_point_table(const SubsetTriple& t) {
  FixedPointTable fix{};
  for (int i = 0; i < kBranchCount; ++i) {
    unsigned bit = 1u << i;
    DeckElement inertia((t.s_eta & bit) ? 1 : 0, (t.s_xi & bit) ? 1 : 0, 1);
    fix[inertia.bits()] += 4;
  }
  return fix;
}

/// Genus of the quotient by K, as the sum of quadratic-subfield genera. For
/// |K| = 2 this is cross-checked against Riemann-Hurwitz, g = (20 - |Fix|)/4.
inline int quotient_genus(DeckSubgroup k, const SubsetTriple& t) {
  int g = 0;
  for (Character chi : k.trivial_characters()) g += genus_quadratic(character_subset(t, chi));
  if (k.order() == 2) {
    DeckElement gen;
    for (auto e : k.elements())
      if (!e.is_identity()) gen = e;
    int fix = fixed_point_table(t)[gen.bits()];
    if ((20 - fix) % 4 != 0 || (20 - fix) / 4 != g)
      throw InternalConsistencyError("character genus " + std::to_string(g) + " disagrees with Riemann-Hurwitz for " +
                                     gen.to_string() + " with " + std::to_string(fix) + " fixed points");
  }
  return g;
}

/// A cover of degree d from genus gz to genus gy is étale iff 2gz - 2 = d(2gy - 2).
inline bool is_etale_step(int genus_cover, int genus_base, int degree) {
  return 2 * genus_cover - 2 == degree * (2 * genus_base - 2);
}

/// Restricted polarization on an isotypical piece. When `exact` is false the
/// type is only known to divide `exponents` and the pullback has a kernel
/// of order `kernel_order`.
struct Polarization {
  std::vector<int> exponents;
  bool exact = true;
  int kernel_order = 1;

  std::string to_string() const {
    std::string s = exact ? "(" : "divides (";
    for (std::size_t i = 0; i < exponents.size(); ++i) s += (i ? "," : "") + std::to_string(exponents[i]);
    s += ")";
    if (!exact) s += ", kernel " + std::to_string(kernel_order);
    return s;
  }
  friend bool operator==(const Polarization&, const Polarization&) = default;
};

struct CurveNode {
  DeckSubgroup deck_subgroup;
  std::string name;
  std::string deck_label;  // generators in j/s/t letters, e.g. "<s,jt>"
  int genus = 0;
  int deg_over_line = 0;
  std::optional<IndexMask> defining_subset;  // present iff deg_over_line == 2
  bool starred = false;
  std::optional<Polarization> restricted_polarization;
  std::optional<bool> hyperelliptic;  // nullopt: genus <= 1 or not decided by the tower
};

struct TowerEdge {
  int cover = 0;     // node index of the covering curve (smaller subgroup)
  int quotient = 0;  // node index of the quotient (index-2 supergroup)
};

/// A lift of the hyperelliptic involution with its letter and fixed-point count.
struct LiftLabel {
  DeckElement element;
  std::string label;  // "j", "js", "jt", "jst"
  int fixed_points = 0;
};

struct TowerDiagram {
  KleinSubgroup subgroup;
  CaseType case_type;
  SubsetTriple triple;
  std::vector<CurveNode> nodes;  // 16, fixed order: top, order-2, order-4, base
  std::vector<TowerEdge> edges;
  FixedPointTable fixed_points{};
  std::array<LiftLabel, 4> lifts;
  DeckElement sigma_letter;  // étale element written "s" in labels: j * js
  DeckElement tau_letter;    // j * jt

  int top_index() const { return 0; }
  int base_index() const { return static_cast<int>(nodes.size()) - 1; }
  int index_of(DeckSubgroup k) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].deck_subgroup == k) return static_cast<int>(i);
    throw InternalConsistencyError("subgroup missing from tower");
  }
  const CurveNode& node(DeckSubgroup k) const { return nodes[index_of(k)]; }
  const CurveNode& node_named(const std::string& name) const {
    for (const auto& n : nodes)
      if (n.name == name) return n;
    throw ParameterError("no tower node named " + name);
  }
  int h_index() const { return index_of(DeckSubgroup::span({kSigma, kTau})); }
};

namespace detail {

/// The four lifts sorted by descending fixed-point count, ties by (a,b,c) lex order.
inline std::array<LiftLabel, 4> label_lifts(const FixedPointTable& fix) {
  std::array<LiftLabel, 4> lifts;
  std::vector<DeckElement> elems;
  for (unsigned g = 0; g < 8; ++g)
    if (DeckElement(g).is_lift()) elems.emplace_back(g);
  std::sort(elems.begin(), elems.end(), [&](DeckElement x, DeckElement y) {
    if (fix[x.bits()] != fix[y.bits()]) return fix[x.bits()] > fix[y.bits()];
    return x.lex_key() < y.lex_key();
  });
  static constexpr std::array<const char*, 4> names = {"j", "js", "jt", "jst"};
  for (int i = 0; i < 4; ++i) lifts[i] = {elems[i], names[i], fix[elems[i].bits()]};
  return lifts;
}

inline std::string element_letter(const TowerDiagram& t, DeckElement g) {
  if (g.is_identity()) return "1";
  for (const auto& l : t.lifts)
    if (l.element == g) return l.label;
  if (g == t.sigma_letter) return "s";
  if (g == t.tau_letter) return "t";
  return "st";
}

inline int letter_rank(const std::string& s) {
  static const std::array<std::string, 8> order = {"1", "s", "t", "st", "j", "js", "jt", "jst"};
  return static_cast<int>(std::find(order.begin(), order.end(), s) - order.begin());
}

inline std::string deck_label(const TowerDiagram& t, DeckSubgroup k) {
  if (k.order() == 1) return "<1>";
  std::vector<std::string> letters;
  for (auto g : k.elements())
    if (!g.is_identity()) letters.push_back(element_letter(t, g));
  std::sort(letters.begin(), letters.end(), [](const auto& a, const auto& b) { return letter_rank(a) < letter_rank(b); });
  if (k.order() == 2) return "<" + letters[0] + ">";
  if (k.order() == 4) return "<" + letters[0] + "," + letters[1] + ">";
  return "<" + letters[0] + "," + letters[1] + "," + letters[3] + ">";
}

/// Largest degree of an étale intermediate cover C~/K'' -> C~/K, K'' <= K.
inline int etale_kernel_order(const TowerDiagram& t, DeckSubgroup k) {
  int best = 1;
  int gy = t.node(k).genus;
  for (auto s : all_deck_subgroups()) {
    if (s == k || !s.is_subgroup_of(k)) continue;
    int deg = k.order() / s.order();
    if (is_etale_step(t.node(s).genus, gy, deg)) best = std::max(best, deg);
  }
  return best;
}

}  // namespace detail

inline bool hyperelliptic_flag(IndexMask t) {
  auto cls = canonical_rep(t);
  if (cls.is_zero()) throw ParameterError("zero 2-torsion class defines no double cover");
  return cls.size() == 2;
}

inline TowerDiagram build_tower(const KleinSubgroup& k) {
  TowerDiagram t{.subgroup = k, .case_type = classify_subgroup(k), .triple = lift_generators(k)};
  t.fixed_points = fixed_point_table(t.triple);
  t.lifts = detail::label_lifts(t.fixed_points);
  t.sigma_letter = t.lifts[0].element * t.lifts[1].element;
  t.tau_letter = t.lifts[0].element * t.lifts[2].element;

  const DeckSubgroup h_group = DeckSubgroup::span({kSigma, kTau});

  // Node order: top; étale order-2 (s, t, st); lift order-2 (j, js, jt, jst);
  // H; remaining quadratic nodes by (size, lex) of their branch set; base.
  std::vector<DeckSubgroup> order2 = {
      DeckSubgroup::span({t.sigma_letter}), DeckSubgroup::span({t.tau_letter}),
      DeckSubgroup::span({t.sigma_letter * t.tau_letter})};
  for (const auto& l : t.lifts) order2.push_back(DeckSubgroup::span({l.element}));
  std::vector<DeckSubgroup> order4;
  for (auto s : all_deck_subgroups())
    if (s.order() == 4 && s != h_group) order4.push_back(s);
  auto defining = [&](DeckSubgroup s) {
    auto chars = s.trivial_characters();
    return character_subset(t.triple, chars.front());
  };
  std::sort(order4.begin(), order4.end(),
            [&](DeckSubgroup a, DeckSubgroup b) { return subset_size_lex_less(defining(a), defining(b)); });
  order4.insert(order4.begin(), h_group);

  std::vector<DeckSubgroup> groups = {DeckSubgroup()};
  groups.insert(groups.end(), order2.begin(), order2.end());
  groups.insert(groups.end(), order4.begin(), order4.end());
  groups.push_back(DeckSubgroup::full());

  static constexpr std::array<const char*, 7> order2_names = {"C_s", "C_t", "C_st", "C_j", "C_js", "C_jt", "C_jst"};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    CurveNode n;
    n.deck_subgroup = groups[i];
    n.genus = quotient_genus(groups[i], t.triple);
    n.deg_over_line = 8 / groups[i].order();
    if (groups[i].order() == 4) n.defining_subset = defining(groups[i]);
    if (i == 0)
      n.name = "C";
    else if (groups[i].order() == 2)
      n.name = order2_names[i - 1];
    else if (groups[i] == h_group)
      n.name = "H";
    else if (groups[i].order() == 4) {
      n.name = "Y_";
      for (int idx : subset_indices(*n.defining_subset)) n.name += std::to_string(idx);
    } else
      n.name = "P1";
    t.nodes.push_back(n);
  }
  for (auto& n : t.nodes) n.deck_label = detail::deck_label(t, n.deck_subgroup);

  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = 0; j < groups.size(); ++j)
      if (groups[i].is_subgroup_of(groups[j]) && 2 * groups[i].order() == groups[j].order())
        t.edges.push_back({static_cast<int>(i), static_cast<int>(j)});

  for (auto& n : t.nodes) {
    for (auto s : n.deck_subgroup.maximal_subgroups())
      if (t.node(s).genus == 2 * n.genus - 1) n.starred = true;
  }

  const bool iso = t.case_type.isotropic;
  for (auto& n : t.nodes) {
    int g = n.genus;
    if (g == 0 || n.deck_subgroup.order() == 1) continue;
    if (n.deck_subgroup == h_group) {
      // Complementary to the Prym type: (2,2,4) isotropic, (1,4,4) otherwise.
      n.restricted_polarization = Polarization{iso ? std::vector<int>{2, 2, 4} : std::vector<int>{1, 4, 4}, true, 4};
    } else if (!n.starred) {
      n.restricted_polarization = Polarization{std::vector<int>(g, n.deck_subgroup.order()), true, 1};
    } else {
      n.restricted_polarization = Polarization{std::vector<int>(g, n.deck_subgroup.order()), false,
                                               detail::etale_kernel_order(t, n.deck_subgroup)};
    }
  }

  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    auto& n = t.nodes[i];
    if (n.genus <= 1) continue;
    if (i == 0) {
      n.hyperelliptic = t.case_type.label == CaseLabel::I1;
    } else if (n.deg_over_line == 2) {
      n.hyperelliptic = true;
    } else if (n.deck_subgroup.order() == 2 && !n.deck_subgroup.elements()[1].is_lift()) {
      // Étale double cover of H defined by the class of the quadratic node it contains besides H.
      for (Character chi : n.deck_subgroup.trivial_characters())
        if (character_subset(t.triple, chi) != kFullSet) n.hyperelliptic = hyperelliptic_flag(character_subset(t.triple, chi));
    } else {
      for (auto s : all_deck_subgroups())
        if (s.order() == 4 && n.deck_subgroup.is_subgroup_of(s) && t.node(s).genus == 0) n.hyperelliptic = true;
    }
  }
  return t;
}

/// Node of the join of the two deck subgroups: the common quotient, whose
/// Jacobian is the intersection of the two pulled-back Jacobians.
inline const CurveNode& jacobian_intersection(const TowerDiagram& t, const CurveNode& a, const CurveNode& b) {
  return t.node(a.deck_subgroup.join(b.deck_subgroup));
}

struct PrymComponent {
  int node = 0;  // index into TowerDiagram::nodes
  int dimension = 0;
  Polarization polarization;
  bool starred = false;
  std::optional<int> replaces;  // starred quadratic node represented through an isogenous intermediate quotient
};

struct IsogenyPrediction {
  int quotient = 0;                // order-2 quotient node
  std::vector<int> factors;        // positive-genus quadratic nodes
};

struct PrymSummary {
  std::vector<PrymComponent> components;
  std::vector<int> prym_polarization;
  std::vector<IsogenyPrediction> isogeny_predictions;
  std::vector<int> moduli_signature;
  int moduli_dimension = 0;
};

inline std::vector<int> moduli_signature(CaseLabel c) {
  switch (c) {
    case CaseLabel::I1: return {3, 5};
    case CaseLabel::I2: return {2, 3, 3};
    case CaseLabel::II1: return {2, 2, 2, 2};
    case CaseLabel::II2: return {2, 2, 4};
  }
  return {};
}

inline PrymSummary prym_decomposition(const TowerDiagram& t) {
  PrymSummary s;
  const int h = t.h_index();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (n.deg_over_line != 2 || static_cast<int>(i) == h || n.genus == 0) continue;
    PrymComponent c{.node = static_cast<int>(i), .dimension = n.genus, .polarization = *n.restricted_polarization,
                    .starred = n.starred};
    if (n.starred) {
      // A same-genus intermediate quotient is isogenous and its pullback embeds.
      for (auto sub : n.deck_subgroup.maximal_subgroups()) {
        int j = t.index_of(sub);
        if (t.nodes[j].genus == n.genus && !t.nodes[j].starred) {
          c = PrymComponent{.node = j, .dimension = n.genus, .polarization = *t.nodes[j].restricted_polarization,
                            .starred = false, .replaces = static_cast<int>(i)};
          break;
        }
      }
    }
    s.components.push_back(c);
  }
  s.prym_polarization = t.case_type.isotropic ? std::vector<int>{1, 1, 1, 2, 2, 4} : std::vector<int>{1, 1, 1, 1, 4, 4};
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& y = t.nodes[i];
    if (y.deck_subgroup.order() != 2) continue;
    IsogenyPrediction p{.quotient = static_cast<int>(i)};
    for (std::size_t j = 0; j < t.nodes.size(); ++j) {
      const auto& q = t.nodes[j];
      if (q.deg_over_line == 2 && q.genus > 0 && y.deck_subgroup.is_subgroup_of(q.deck_subgroup))
        p.factors.push_back(static_cast<int>(j));
    }
    s.isogeny_predictions.push_back(p);
  }
  s.moduli_signature = moduli_signature(t.case_type.label);
  for (int k : s.moduli_signature) s.moduli_dimension += k;
  s.moduli_dimension -= 3;
  return s;
}

inline PrymSummary prym_decomposition(const KleinSubgroup& k) { return prym_decomposition(build_tower(k)); }

}  // namespace kleinprym
