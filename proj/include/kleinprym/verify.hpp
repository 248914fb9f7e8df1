#pragma once

// Point counting on every curve of the tower over F_{p^k}, by independent
// routes, and the identities the isotypical decompositions predict:
//
//   quadratic-character   N(y^2 = f_T) = q + 2 + sum_x chi(f_T(x))
//   top-fiber             fiber sizes of the normalized multiquadratic cover
//   quotient-burnside     N(C~/K) = |K|^-1 sum_{g in K} #{P : Frob P = g P}
//   character-predicted   q + 1 - sum_{chi|K = 1} (q + 1 - N(Y_chi))
//
// All arithmetic is exact; failures become report entries, never aborts.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kleinprym/errors.hpp"
#include "kleinprym/f2sym.hpp"
#include "kleinprym/ffield.hpp"
#include "kleinprym/tower.hpp"

namespace kleinprym {

inline constexpr std::uint32_t kMinVerifyPrime = 11;

struct BranchAssignment {
  std::uint32_t p = 0;
  std::array<std::uint32_t, kBranchCount> points{};  // u_1..u_8 as residues mod p

  /// Throws ParameterError unless p >= 11 is prime and the points are distinct residues.
  static BranchAssignment make(std::uint32_t p, const std::vector<std::int64_t>& points) {
    if (p < kMinVerifyPrime || !is_prime(p) || p >= kMaxPrime)
      throw ParameterError("branch points need a prime 11 <= p < 2^15, got " + std::to_string(p));
    if (points.size() != kBranchCount)
      throw ParameterError("expected 8 branch points, got " + std::to_string(points.size()));
    BranchAssignment b{.p = p};
    for (int i = 0; i < kBranchCount; ++i) {
      std::int64_t r = points[i] % static_cast<std::int64_t>(p);
      b.points[i] = static_cast<std::uint32_t>(r < 0 ? r + p : r);
    }
    for (int i = 0; i < kBranchCount; ++i)
      for (int j = i + 1; j < kBranchCount; ++j)
        if (b.points[i] == b.points[j]) throw ParameterError("branch points must be distinct mod p");
    return b;
  }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < kBranchCount; ++i) s += (i ? "," : "") + std::to_string(points[i]);
    return s;
  }
  friend bool operator==(const BranchAssignment&, const BranchAssignment&) = default;
};

/// 8 distinct residues drawn by rejection from a 64-bit Mersenne twister seeded with `seed`.
inline BranchAssignment random_branch(std::uint32_t p, std::uint64_t seed) {
  if (p < kMinVerifyPrime || !is_prime(p) || p >= kMaxPrime)
    throw ParameterError("random branch points need a prime 11 <= p < 2^15, got " + std::to_string(p));
  std::mt19937_64 gen(seed);
  std::vector<std::int64_t> pts;
  while (pts.size() < kBranchCount) {
    auto v = static_cast<std::int64_t>(gen() % p);
    if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
  }
  return BranchAssignment::make(p, pts);
}

enum class CountRoute { QuadraticCharacter, TopFiber, QuotientBurnside, CharacterPredicted };

inline const char* route_name(CountRoute r) {
  switch (r) {
    case CountRoute::QuadraticCharacter: return "quadratic-character";
    case CountRoute::TopFiber: return "top-fiber";
    case CountRoute::QuotientBurnside: return "quotient-burnside";
    case CountRoute::CharacterPredicted: return "character-predicted";
  }
  return "?";
}

struct CurveCount {
  std::string node;
  int genus = 0;
  std::uint64_t q = 0;
  std::int64_t count = 0;
  CountRoute route = CountRoute::QuadraticCharacter;
};

/// |N - (q+1)| <= 2 g sqrt(q), tested exactly as (N - q - 1)^2 <= 4 g^2 q.
inline bool within_weil_bound(std::int64_t count, std::uint64_t q, int genus) {
  __int128 a = static_cast<__int128>(count) - static_cast<__int128>(q) - 1;
  return a * a <= static_cast<__int128>(4) * genus * genus * static_cast<__int128>(q);
}

/// Fields F_{p^k}, k = 1..4, with lazily built character tables. Not thread-safe.
class FieldCache {
 public:
  explicit FieldCache(std::uint32_t p) : p_(p) {}

  std::uint32_t p() const { return p_; }

  const FieldCtx& field(int k) {
    check_degree(k);
    if (!fields_[k - 1]) fields_[k - 1] = std::make_unique<FieldCtx>(make_ext(p_, k));
    return *fields_[k - 1];
  }
  const QuadCharTable& chars(int k) {
    check_degree(k);
    if (!tables_[k - 1]) tables_[k - 1] = std::make_unique<QuadCharTable>(field(k));
    return *tables_[k - 1];
  }

 private:
  static void check_degree(int k) {
    if (k < 1 || k > kMaxExtensionDegree) throw ParameterError("extension degree must be in [1,4]");
  }
  std::uint32_t p_;
  std::array<std::unique_ptr<FieldCtx>, kMaxExtensionDegree> fields_;
  std::array<std::unique_ptr<QuadCharTable>, kMaxExtensionDegree> tables_;
};

inline std::vector<FieldEl> branch_roots(const FieldCtx& F, const BranchAssignment& b, IndexMask t) {
  std::vector<FieldEl> roots;
  for (int i = 0; i < kBranchCount; ++i)
    if (t & (1u << i)) roots.push_back(F.from_int(b.points[i]));
  return roots;
}

inline Poly branch_poly(const FieldCtx& F, const BranchAssignment& b, IndexMask t) {
  return poly_from_roots(F, branch_roots(F, b, t));
}

/// Points on the smooth model of y^2 = f_T over F_{p^k}: affine points plus
/// the two rational points at infinity of the monic even-degree model.
inline CurveCount count_quadratic(FieldCache& cache, IndexMask t, const BranchAssignment& b, int k) {
  int genus = genus_quadratic(t);
  const FieldCtx& F = cache.field(k);
  const QuadCharTable& chi = cache.chars(k);
  Poly f = branch_poly(F, b, t);
  std::int64_t sum = 0;
  for (std::uint64_t i = 0; i < F.q(); ++i) sum += chi(poly_eval(F, f, F.from_index(i)));
  return {subset_to_string(t), genus, F.q(), static_cast<std::int64_t>(F.q()) + 2 + sum, CountRoute::QuadraticCharacter};
}

/// Adds `delta` to one fiber of the top-fiber count. Test harness only.
struct FiberTamper {
  int exponent = 1;
  std::uint64_t x_index = 0;  // field index of x; q means the point at infinity
  std::int64_t delta = 1;
};

namespace detail {

/// Per-branch-point character data at x = u_j over F_q.
struct BranchFiber {
  std::array<int, 3> chi_z{};  // chi(f_S(u_j)) for S = s_eta, s_xi, I; 0 when u_j is a root
  std::array<int, 2> chi_r{};  // chi(r_1), chi(r_2) when u_j is a root of f_{s_eta}, f_{s_xi}
};

/// r = [f_S/(x-u_j)](u_j) * [f_I/(x-u_j)](u_j)^{-1}, by synthetic division over F_p.
inline BranchFiber branch_fiber(FieldCache& cache, const BranchAssignment& b, const SubsetTriple& t, int j, int k) {
  const FieldCtx& Fp = cache.field(1);
  const QuadCharTable& chi = cache.chars(k);
  const FieldEl u = Fp.from_int(b.points[j]);
  const std::array<IndexMask, 3> sets = {t.s_eta, t.s_xi, kFullSet};
  const Poly fi = branch_poly(Fp, b, kFullSet);
  const FieldEl di = poly_eval(Fp, poly_deflate(Fp, fi, u), u);
  BranchFiber out;
  for (int s = 0; s < 3; ++s) {
    Poly fs = branch_poly(Fp, b, sets[s]);
    FieldEl z = poly_eval(Fp, fs, u);
    // Elements of F_p sit in F_q at the same index.
    out.chi_z[s] = chi.at_index(Fp.index(z));
    if (s < 2 && (sets[s] & (1u << j))) {
      FieldEl r = Fp.mul(poly_eval(Fp, poly_deflate(Fp, fs, u), u), Fp.inv(di));
      out.chi_r[s] = chi.at_index(Fp.index(r));
    }
  }
  return out;
}

/// Fiber size over x = u_j for the twist by deck signs eps (all +1 for the plain count).
inline std::int64_t branch_twisted(const BranchFiber& bf, IndexMask s_eta, IndexMask s_xi, int j, DeckElement g) {
  const bool in_eta = s_eta & (1u << j);
  const bool in_xi = s_xi & (1u << j);
  const int e1 = g.sign(0), e2 = g.sign(1), e3 = g.sign(2);
  const int f1 = in_eta ? 1 + e1 * e3 * bf.chi_r[0] : 1 + e1 * bf.chi_z[0];
  const int f2 = in_xi ? 1 + e2 * e3 * bf.chi_r[1] : 1 + e2 * bf.chi_z[1];
  return static_cast<std::int64_t>(f1) * f2;
}

/// Iterates x over F_q, handing the visitor the bitmask of indices i with
/// chi(x - u_i) = -1, or the branch index j when x = u_j.
template <class Generic, class Branch>
void scan_field(FieldCache& cache, const BranchAssignment& b, int k, Generic&& on_generic, Branch&& on_branch) {
  const FieldCtx& F = cache.field(k);
  const QuadCharTable& chi = cache.chars(k);
  const std::uint32_t p = F.p();
  // offsets[c0][i] = (c0 - u_i) mod p: the constant coordinate of x - u_i.
  std::vector<std::array<std::uint32_t, kBranchCount>> offsets(p);
  std::vector<int> branch_at(p, -1);
  for (std::uint32_t c0 = 0; c0 < p; ++c0)
    for (int i = 0; i < kBranchCount; ++i) offsets[c0][i] = (c0 + p - b.points[i]) % p;
  for (int i = 0; i < kBranchCount; ++i) branch_at[b.points[i]] = i;
  for (std::uint64_t rest = 0; rest < F.q(); rest += p) {
    for (std::uint32_t c0 = 0; c0 < p; ++c0) {
      if (rest == 0 && branch_at[c0] >= 0) {
        on_branch(branch_at[c0]);
        continue;
      }
      unsigned neg = 0;
      for (int i = 0; i < kBranchCount; ++i)
        if (chi.at_index(rest + offsets[c0][i]) < 0) neg |= 1u << i;
      on_generic(rest + c0, neg);
    }
  }
}

inline int parity_sign(unsigned neg, IndexMask s) { return (std::popcount(neg & s) & 1) ? -1 : 1; }

}  // namespace detail

/// Rational points on the top curve: fiber sizes of the normalized fiber
/// product over every x in F_q, plus 8 points at infinity.
inline CurveCount count_top(FieldCache& cache, const BranchAssignment& b, const SubsetTriple& t, int k,
                            const std::optional<FiberTamper>& tamper = std::nullopt) {
  const FieldCtx& F = cache.field(k);
  const bool tampered = tamper && tamper->exponent == k;
  std::array<detail::BranchFiber, kBranchCount> bf;
  for (int j = 0; j < kBranchCount; ++j) bf[j] = detail::branch_fiber(cache, b, t, j, k);
  std::int64_t total = 0;
  detail::scan_field(
      cache, b, k,
      [&](std::uint64_t x, unsigned neg) {
        std::int64_t fiber = 1;
        for (IndexMask s : {t.s_eta, t.s_xi, kFullSet}) fiber *= 1 + detail::parity_sign(neg, s);
        if (tampered && tamper->x_index == x) fiber += tamper->delta;
        total += fiber;
      },
      [&](int j) {
        // f_{s_eta} and f_{s_xi} divide f_I up to branch factors, so a root of
        // either is a root of f_I.
        if (bf[j].chi_z[2] != 0) throw InternalConsistencyError("branch point is not a root of f_I");
        std::int64_t fiber = detail::branch_twisted(bf[j], t.s_eta, t.s_xi, j, DeckElement());
        if (tampered && tamper->x_index == b.points[j]) fiber += tamper->delta;
        total += fiber;
      });
  std::int64_t infinity = 8;
  if (tampered && tamper->x_index == F.q()) infinity += tamper->delta;
  return {"C", 9, F.q(), total + infinity, CountRoute::TopFiber};
}

/// sum_{x in P^1(F_q)} #{P over x : Frob P = g P} for each of the 8 deck elements.
inline std::array<std::int64_t, 8> twisted_sums(FieldCache& cache, const BranchAssignment& b, const SubsetTriple& t, int k) {
  std::array<std::int64_t, 8> sums{};
  std::array<detail::BranchFiber, kBranchCount> bf;
  for (int j = 0; j < kBranchCount; ++j) bf[j] = detail::branch_fiber(cache, b, t, j, k);
  // Generic fibers depend only on (chi(z_1), chi(z_2), chi(z_3)); tally those first.
  std::array<std::int64_t, 8> sign_pattern{};
  detail::scan_field(
      cache, b, k,
      [&](std::uint64_t, unsigned neg) {
        unsigned pattern = 0;
        if (detail::parity_sign(neg, t.s_eta) < 0) pattern |= 1u;
        if (detail::parity_sign(neg, t.s_xi) < 0) pattern |= 2u;
        if (detail::parity_sign(neg, kFullSet) < 0) pattern |= 4u;
        ++sign_pattern[pattern];
      },
      [&](int j) {
        for (unsigned g = 0; g < 8; ++g) sums[g] += detail::branch_twisted(bf[j], t.s_eta, t.s_xi, j, DeckElement(g));
      });
  for (unsigned g = 0; g < 8; ++g) {
    DeckElement e(g);
    for (unsigned pattern = 0; pattern < 8; ++pattern) {
      std::int64_t fiber = 1;
      for (int c = 0; c < 3; ++c) fiber *= 1 + e.sign(c) * ((pattern >> c) & 1u ? -1 : 1);
      sums[g] += fiber * sign_pattern[pattern];
    }
    std::int64_t infinity = 1;
    for (int c = 0; c < 3; ++c) infinity *= 1 + e.sign(c);
    sums[g] += infinity;
  }
  return sums;
}

/// Burnside-Frobenius descent from precomputed twisted sums.
inline std::int64_t burnside_count(const std::array<std::int64_t, 8>& sums, DeckSubgroup k) {
  std::int64_t total = 0;
  for (auto g : k.elements()) total += sums[g.bits()];
  if (total % k.order() != 0) throw InternalConsistencyError("Burnside average is not an integer");
  return total / k.order();
}

inline CurveCount count_quotient_direct(FieldCache& cache, DeckSubgroup k, const BranchAssignment& b,
                                        const SubsetTriple& t, int exponent) {
  auto sums = twisted_sums(cache, b, t, exponent);
  return {"", quotient_genus(k, t), cache.field(exponent).q(), burnside_count(sums, k), CountRoute::QuotientBurnside};
}

/// q + 1 - sum over quadratic subfields of their traces of Frobenius.
inline std::int64_t predicted_count(std::uint64_t q, DeckSubgroup k, const SubsetTriple& /*t*/,
                                    const std::array<std::int64_t, 8>& quadratic_counts) {
  std::int64_t n = static_cast<std::int64_t>(q) + 1;
  for (Character chi : k.trivial_characters()) n -= static_cast<std::int64_t>(q) + 1 - quadratic_counts[chi];
  return n;
}

// --- L-polynomials -----------------------------------------------------------

/// Numerator of the zeta function, coefficients of T^0..T^{2g}.
struct LPolynomial {
  std::uint32_t p = 0;
  std::vector<std::int64_t> coeffs{1};

  int genus() const { return (static_cast<int>(coeffs.size()) - 1) / 2; }
  int degree() const {
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && coeffs[d] == 0) --d;
    return d;
  }
  std::int64_t at_one() const {
    std::int64_t s = 0;
    for (auto c : coeffs) s += c;
    return s;
  }
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? "," : "") + std::to_string(coeffs[i]);
    return s + "]";
  }
  friend bool operator==(const LPolynomial&, const LPolynomial&) = default;
};

inline LPolynomial operator*(const LPolynomial& a, const LPolynomial& b) {
  LPolynomial r{.p = a.p ? a.p : b.p};
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

inline std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

inline std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Functional equation c_{2g-i} = p^{g-i} c_i, coefficient Weil bounds
/// c_i^2 <= C(2g,i)^2 p^i, and L(1) > 0.
inline std::optional<std::string> l_polynomial_defect(const LPolynomial& l) {
  const int g = l.genus();
  if (l.coeffs.size() != static_cast<std::size_t>(2 * g + 1) || l.coeffs[0] != 1) return "malformed coefficient list";
  for (int i = 0; i <= g; ++i)
    if (l.coeffs[2 * g - i] != ipow(l.p, g - i) * l.coeffs[i]) return "functional equation fails at T^" + std::to_string(i);
  for (int i = 0; i <= 2 * g; ++i) {
    __int128 c = l.coeffs[i], bnd = binomial(2 * g, i);
    if (c * c > bnd * bnd * static_cast<__int128>(ipow(l.p, i))) return "Weil bound fails at T^" + std::to_string(i);
  }
  if (l.at_one() <= 0) return "L(1) <= 0";
  return std::nullopt;
}

/// Newton-identity reconstruction from N_1..N_g (counts over F_{p^k}),
/// completed by the functional equation.
inline LPolynomial l_polynomial_from_counts(std::uint32_t p, int genus, const std::vector<std::int64_t>& counts) {
  if (genus < 0 || genus > kMaxExtensionDegree) throw ParameterError("L-polynomials are computed for genus <= 4");
  if (counts.size() < static_cast<std::size_t>(genus)) throw ParameterError("need counts over F_{p^k} for k = 1..genus");
  LPolynomial l{.p = p};
  l.coeffs.assign(2 * genus + 1, 0);
  l.coeffs[0] = 1;
  std::vector<std::int64_t> s(genus + 1, 0);
  for (int n = 1; n <= genus; ++n) s[n] = ipow(p, n) + 1 - counts[n - 1];
  for (int n = 1; n <= genus; ++n) {
    std::int64_t acc = 0;
    for (int i = 1; i <= n; ++i) acc += s[i] * l.coeffs[n - i];
    if (acc % n != 0)
      throw CountInconsistency("non-integral L-coefficient at T^" + std::to_string(n));
    l.coeffs[n] = -acc / n;
  }
  for (int i = 0; i < genus; ++i) l.coeffs[2 * genus - i] = ipow(p, genus - i) * l.coeffs[i];
  if (auto defect = l_polynomial_defect(l)) throw CountInconsistency(*defect);
  return l;
}

/// L-polynomial of a tower node from quotient-burnside counts over F_{p^k}, k <= genus.
inline LPolynomial l_polynomial(FieldCache& cache, const CurveNode& node, const BranchAssignment& b,
                                const SubsetTriple& t) {
  std::vector<std::int64_t> counts;
  for (int k = 1; k <= node.genus; ++k) counts.push_back(count_quotient_direct(cache, node.deck_subgroup, b, t, k).count);
  return l_polynomial_from_counts(b.p, node.genus, counts);
}

// --- verification report -----------------------------------------------------

struct CheckResult {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct NodeArithmetic {
  std::string name;
  int genus = 0;
  std::map<int, std::int64_t> counts;  // exponent k -> N over F_{p^k} (quotient-burnside)
  std::optional<LPolynomial> l_poly;
};

struct VerificationReport {
  CaseType case_type{};
  std::string subgroup;
  BranchAssignment branch;
  std::vector<CheckResult> checks;  // sorted by name
  std::vector<NodeArithmetic> nodes;
  bool pass = false;
  double elapsed_ms = 0;

  int failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
  }
};

struct VerifyOptions {
  int depth = 3;  // largest q-exponent for the top-count and trace identities
  std::optional<FiberTamper> tamper;
};

inline VerificationReport verify_config(const KleinSubgroup& subgroup, const BranchAssignment& b,
                                        const VerifyOptions& opts = {}) {
  auto started = std::chrono::steady_clock::now();
  if (b.p < kMinVerifyPrime) throw ParameterError("verification needs p >= 11");
  if (opts.depth < 1 || opts.depth > kMaxExtensionDegree) throw ParameterError("depth must be in [1,4]");
  // Validates the assignment even when it was built by hand.
  (void)BranchAssignment::make(b.p, std::vector<std::int64_t>(b.points.begin(), b.points.end()));

  const TowerDiagram tower = build_tower(subgroup);
  const PrymSummary prym = prym_decomposition(tower);
  const SubsetTriple& t = tower.triple;
  FieldCache cache(b.p);

  VerificationReport rep{.case_type = tower.case_type, .subgroup = subgroup.to_string(), .branch = b};
  auto add = [&](std::string name, const auto& expected, const auto& actual) {
    CheckResult c{std::move(name), "", "", expected == actual};
    if constexpr (requires { expected.to_string(); }) {
      c.expected = expected.to_string();
      c.actual = actual.to_string();
    } else {
      c.expected = std::to_string(expected);
      c.actual = std::to_string(actual);
    }
    rep.checks.push_back(std::move(c));
  };
  auto add_bool = [&](std::string name, bool ok, std::string expected, std::string actual) {
    rep.checks.push_back({std::move(name), std::move(expected), std::move(actual), ok});
  };
  const auto qtag = [](int k) { return "q=p^" + std::to_string(k); };

  // Exponents each curve needs: the identity depth, and k <= genus for the
  // L-polynomials of nodes of genus <= 4.
  int max_k = opts.depth;
  for (const auto& n : tower.nodes)
    if (n.deck_subgroup.order() >= 2 && n.genus <= kMaxExtensionDegree) max_k = std::max(max_k, n.genus);

  std::map<int, std::array<std::int64_t, 8>> sums;
  std::map<int, std::array<std::int64_t, 8>> quad;  // by character
  std::array<int, 8> quad_max_k{};
  for (Character chi = 1; chi < 8; ++chi)
    quad_max_k[chi] = std::max(opts.depth, genus_quadratic(character_subset(t, chi)));

  for (int k = 1; k <= max_k; ++k) {
    sums[k] = twisted_sums(cache, b, t, k);
    auto& qc = quad[k];
    qc.fill(0);
    for (Character chi = 1; chi < 8; ++chi)
      if (k <= quad_max_k[chi]) qc[chi] = count_quadratic(cache, character_subset(t, chi), b, k).count;
  }

  std::vector<DeckSubgroup> subgroups;
  for (const auto& n : tower.nodes) subgroups.push_back(n.deck_subgroup);

  for (int k = 1; k <= opts.depth; ++k) {
    const std::uint64_t q = cache.field(k).q();
    const std::int64_t top = count_top(cache, b, t, k, opts.tamper).count;
    std::int64_t quad_sum = 0;
    for (Character chi = 1; chi < 8; ++chi) quad_sum += quad[k][chi];
    add("top/" + qtag(k), quad_sum - 6 * static_cast<std::int64_t>(q + 1), top);

    auto direct = [&](DeckSubgroup s) { return burnside_count(sums[k], s); };
    const std::int64_t etale_sum = direct(DeckSubgroup::span({tower.sigma_letter})) +
                                   direct(DeckSubgroup::span({tower.tau_letter})) +
                                   direct(DeckSubgroup::span({tower.sigma_letter * tower.tau_letter}));
    add("trace/" + qtag(k), etale_sum - 2 * direct(DeckSubgroup::span({kSigma, kTau})), top);
    add_bool("weil/C/" + qtag(k), within_weil_bound(top, q, 9), "|a| <= 18 sqrt(q)", "a=" + std::to_string(static_cast<std::int64_t>(q) + 1 - top));
  }

  for (int k = 1; k <= std::min(2, opts.depth); ++k) {
    const std::uint64_t q = cache.field(k).q();
    for (const auto& n : tower.nodes) {
      if (n.deck_subgroup.order() == 1 || n.deck_subgroup.order() == 8) continue;
      add("route/" + n.name + "/" + qtag(k), predicted_count(q, n.deck_subgroup, t, quad[k]),
          burnside_count(sums[k], n.deck_subgroup));
    }
  }

  // Weil bounds and L-polynomials for every proper quotient.
  std::map<std::string, LPolynomial> quad_l;
  for (const auto& n : tower.nodes) {
    if (n.deck_subgroup.order() == 1) continue;
    NodeArithmetic na{.name = n.name, .genus = n.genus};
    for (int k = 1; k <= max_k; ++k) {
      const std::uint64_t q = cache.field(k).q();
      std::int64_t c = burnside_count(sums[k], n.deck_subgroup);
      na.counts[k] = c;
      add_bool("weil/" + n.name + "/" + qtag(k), within_weil_bound(c, q, n.genus),
               "|a| <= " + std::to_string(2 * n.genus) + " sqrt(q)",
               "a=" + std::to_string(static_cast<std::int64_t>(q) + 1 - c));
    }
    if (n.genus <= kMaxExtensionDegree) {
      std::vector<std::int64_t> counts;
      for (int k = 1; k <= n.genus; ++k) counts.push_back(na.counts[k]);
      try {
        na.l_poly = l_polynomial_from_counts(b.p, n.genus, counts);
        add_bool("lpoly/" + n.name, true, "integral, functional equation, Weil", na.l_poly->to_string());
      } catch (const CountInconsistency& e) {
        add_bool("lpoly/" + n.name, false, "integral, functional equation, Weil", e.what());
      }
    }
    if (n.deg_over_line == 2) {
      // The same node from its own quadratic model.
      Character chi = n.deck_subgroup.trivial_characters().front();
      std::vector<std::int64_t> counts;
      for (int k = 1; k <= n.genus; ++k) counts.push_back(quad[k][chi]);
      try {
        quad_l[n.name] = l_polynomial_from_counts(b.p, genus_quadratic(*n.defining_subset), counts);
      } catch (const CountInconsistency& e) {
        add_bool("lpoly/" + n.name + "/model", false, "integral, functional equation, Weil", e.what());
      }
    }
    rep.nodes.push_back(std::move(na));
  }

  // Genus concordance: arithmetic genus from L-degree against the tower genus.
  for (const auto& na : rep.nodes) {
    if (!na.l_poly) continue;
    add("genus/" + na.name, na.genus, na.l_poly->degree() / 2);
    if (auto it = quad_l.find(na.name); it != quad_l.end()) add("genus/" + na.name + "/model", na.genus, it->second.degree() / 2);
  }

  // Isogeny predictions for order-2 quotients: L(C/<g>) = prod L(factors).
  for (const auto& pred : prym.isogeny_predictions) {
    const CurveNode& y = tower.nodes[pred.quotient];
    if (y.genus > kMaxExtensionDegree) continue;
    auto it = std::find_if(rep.nodes.begin(), rep.nodes.end(), [&](const auto& na) { return na.name == y.name; });
    LPolynomial expected{.p = b.p};
    bool have_factors = true;
    std::string factor_names;
    for (int f : pred.factors) {
      auto ql = quad_l.find(tower.nodes[f].name);
      if (ql == quad_l.end()) {
        have_factors = false;
        continue;
      }
      expected = expected * ql->second;
      factor_names += (factor_names.empty() ? "" : "*") + tower.nodes[f].name;
    }
    if (!have_factors || it == rep.nodes.end() || !it->l_poly) {
      add_bool("lprod/" + y.name, false, "L-polynomials available", "missing");
      continue;
    }
    add("lprod/" + y.name, expected, *it->l_poly);
    add("genus/" + y.name + "/product", y.genus, expected.degree() / 2);
  }

  std::sort(rep.checks.begin(), rep.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

}  // namespace kleinprym
