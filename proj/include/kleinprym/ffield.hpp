#pragma once

// Prime fields F_p and extensions F_{p^k} (k <= 4) in a power basis,
// univariate polynomials over them, and the quadratic character.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kleinprym/errors.hpp"

namespace kleinprym {

inline constexpr std::uint32_t kMaxPrime = 1u << 15;
inline constexpr int kMaxExtensionDegree = 4;
/// Largest field that may be enumerated element by element.
inline constexpr std::uint64_t kMaxEnumerableOrder = 1ull << 27;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Coordinates in the power basis 1, x, ..., x^{k-1}; unused slots are zero.
struct FieldEl {
  std::array<std::uint32_t, kMaxExtensionDegree> c{};
  friend bool operator==(const FieldEl&, const FieldEl&) = default;
};

class FieldCtx;

/// Coefficients low-to-high, trailing zeros trimmed; the zero polynomial is empty.
struct Poly {
  std::vector<FieldEl> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  friend bool operator==(const Poly&, const Poly&) = default;
};

class FieldCtx {
 public:
  /// make_ext: the modulus is the first monic irreducible of degree k when
  /// the coefficient tuple (c_0, ..., c_{k-1}) is scanned in ascending
  /// lexicographic order. For k = 1 the modulus is x.
  static FieldCtx make(std::uint32_t p, int k);

  std::uint32_t p() const { return p_; }
  int k() const { return k_; }
  std::uint64_t q() const { return q_; }
  /// Monic, k+1 residues low-to-high.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FieldEl zero() const { return {}; }
  FieldEl one() const { return from_int(1); }
  FieldEl from_int(std::int64_t v) const {
    FieldEl e;
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    e.c[0] = static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    return e;
  }
  /// Index in [0, q): sum c_i p^i. Bijective with the field.
  std::uint64_t index(const FieldEl& a) const {
    std::uint64_t idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + a.c[i];
    return idx;
  }
  FieldEl from_index(std::uint64_t idx) const {
    FieldEl e;
    for (int i = 0; i < k_; ++i) {
      e.c[i] = static_cast<std::uint32_t>(idx % p_);
      idx /= p_;
    }
    return e;
  }

  bool is_zero(const FieldEl& a) const { return a == FieldEl{}; }

  FieldEl add(const FieldEl& a, const FieldEl& b) const {
    FieldEl r;
    for (int i = 0; i < k_; ++i) {
      std::uint32_t s = a.c[i] + b.c[i];
      r.c[i] = s >= p_ ? s - p_ : s;
    }
    return r;
  }
  FieldEl neg(const FieldEl& a) const {
    FieldEl r;
    for (int i = 0; i < k_; ++i) r.c[i] = a.c[i] ? p_ - a.c[i] : 0;
    return r;
  }
  FieldEl sub(const FieldEl& a, const FieldEl& b) const { return add(a, neg(b)); }

  FieldEl mul(const FieldEl& a, const FieldEl& b) const {
    if (k_ == 1) {
      FieldEl r;
      r.c[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.c[0]) * b.c[0] % p_);
      return r;
    }
    std::array<std::uint64_t, 2 * kMaxExtensionDegree - 1> prod{};
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(a.c[i]) * b.c[j]) % p_;
    for (int d = 2 * k_ - 2; d >= k_; --d) {
      std::uint64_t lead = prod[d];
      if (!lead) continue;
      for (int j = 0; j < k_; ++j)
        prod[d - k_ + j] = (prod[d - k_ + j] + (p_ - modulus_[j]) % p_ * lead) % p_;
      prod[d] = 0;
    }
    FieldEl r;
    for (int i = 0; i < k_; ++i) r.c[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
  }

  FieldEl pow(FieldEl base, std::uint64_t e) const {
    FieldEl r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  FieldEl inv(const FieldEl& a) const {
    if (is_zero(a)) throw ParameterError("inverse of zero");
    return pow(a, q_ - 2);
  }

 private:
  FieldCtx(std::uint32_t p, int k, std::vector<std::uint32_t> modulus) : p_(p), k_(k), modulus_(std::move(modulus)) {
    q_ = 1;
    for (int i = 0; i < k; ++i) q_ *= p;
  }

  std::uint32_t p_ = 0;
  int k_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
};

inline FieldCtx make_ext(std::uint32_t p, int k) { return FieldCtx::make(p, k); }

// --- polynomials -----------------------------------------------------------

inline Poly poly_trim(Poly f) {
  while (!f.coeffs.empty() && f.coeffs.back() == FieldEl{}) f.coeffs.pop_back();
  return f;
}

inline Poly poly_constant(const FieldCtx&, const FieldEl& c) { return poly_trim(Poly{{c}}); }
inline Poly poly_x(const FieldCtx& F) { return Poly{{F.zero(), F.one()}}; }

inline Poly poly_add(const FieldCtx& F, const Poly& a, const Poly& b) {
  Poly r;
  r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()));
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    FieldEl x = i < a.coeffs.size() ? a.coeffs[i] : F.zero();
    FieldEl y = i < b.coeffs.size() ? b.coeffs[i] : F.zero();
    r.coeffs[i] = F.add(x, y);
  }
  return poly_trim(r);
}

inline Poly poly_sub(const FieldCtx& F, const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& c : nb.coeffs) c = F.neg(c);
  return poly_add(F, a, nb);
}

inline Poly poly_mul(const FieldCtx& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      r.coeffs[i + j] = F.add(r.coeffs[i + j], F.mul(a.coeffs[i], b.coeffs[j]));
  return poly_trim(r);
}

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};

inline PolyDivision poly_divmod(const FieldCtx& F, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ParameterError("polynomial division by zero");
  Poly rem = poly_trim(a);
  Poly quo;
  if (rem.degree() < b.degree()) return {quo, rem};
  quo.coeffs.assign(rem.degree() - b.degree() + 1, F.zero());
  FieldEl lead_inv = F.inv(b.coeffs.back());
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    int shift = rem.degree() - b.degree();
    FieldEl factor = F.mul(rem.coeffs.back(), lead_inv);
    quo.coeffs[shift] = factor;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      rem.coeffs[shift + j] = F.sub(rem.coeffs[shift + j], F.mul(factor, b.coeffs[j]));
    rem = poly_trim(rem);
  }
  return {poly_trim(quo), rem};
}

inline Poly poly_mod(const FieldCtx& F, const Poly& a, const Poly& b) { return poly_divmod(F, a, b).remainder; }

/// Monic gcd.
inline Poly poly_gcd(const FieldCtx& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  FieldEl li = F.inv(a.coeffs.back());
  for (auto& c : a.coeffs) c = F.mul(c, li);
  return a;
}

inline Poly poly_powmod(const FieldCtx& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r = poly_mod(F, poly_constant(F, F.one()), m);
  base = poly_mod(F, base, m);
  while (e) {
    if (e & 1) r = poly_mod(F, poly_mul(F, r, base), m);
    base = poly_mod(F, poly_mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

/// Monic prod (x - r).
inline Poly poly_from_roots(const FieldCtx& F, const std::vector<FieldEl>& roots) {
  Poly f = poly_constant(F, F.one());
  for (const auto& r : roots) f = poly_mul(F, f, Poly{{F.neg(r), F.one()}});
  return f;
}

/// Horner evaluation.
inline FieldEl poly_eval(const FieldCtx& F, const Poly& f, const FieldEl& x) {
  FieldEl acc = F.zero();
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
  return acc;
}

/// Synthetic division by (x - r); the remainder f(r) is discarded.
inline Poly poly_deflate(const FieldCtx& F, const Poly& f, const FieldEl& r) {
  if (f.degree() < 1) return {};
  Poly q;
  q.coeffs.assign(f.coeffs.size() - 1, F.zero());
  FieldEl carry = F.zero();
  for (int i = f.degree(); i >= 1; --i) {
    carry = F.add(F.mul(carry, r), f.coeffs[i]);
    q.coeffs[i - 1] = carry;
  }
  return poly_trim(q);
}

/// f irreducible of degree k over F_p iff gcd(f, x^{p^i} - x) = 1 for i <= k/2.
inline bool is_irreducible_over_prime_field(const FieldCtx& base, const Poly& f) {
  if (base.k() != 1) throw ParameterError("irreducibility test expects a prime-field context");
  int k = f.degree();
  if (k < 1) return false;
  Poly x = poly_x(base);
  Poly xp = x;
  for (int i = 1; 2 * i <= k; ++i) {
    xp = poly_powmod(base, xp, base.p(), f);
    Poly g = poly_gcd(base, f, poly_sub(base, xp, x));
    if (g.degree() > 0) return false;
  }
  return true;
}

inline FieldCtx FieldCtx::make(std::uint32_t p, int k) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw ParameterError("field characteristic must be an odd prime, got " + std::to_string(p));
  if (p >= kMaxPrime) throw ParameterError("prime " + std::to_string(p) + " exceeds 2^15");
  if (k < 1 || k > kMaxExtensionDegree) throw ParameterError("extension degree must be in [1,4], got " + std::to_string(k));
  FieldCtx base(p, 1, {0, 1});
  if (k == 1) return base;
  std::uint64_t count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (std::uint64_t n = 0; n < count; ++n) {
    // c_0 is the most significant digit of the scan.
    std::vector<std::uint32_t> tail(k);
    std::uint64_t rest = n;
    for (int i = k - 1; i >= 0; --i) {
      tail[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    Poly f;
    for (int i = 0; i < k; ++i) f.coeffs.push_back(base.from_int(tail[i]));
    f.coeffs.push_back(base.one());
    if (is_irreducible_over_prime_field(base, f)) {
      tail.push_back(1);
      return FieldCtx(p, k, tail);
    }
  }
  throw InternalConsistencyError("no irreducible polynomial found");
}

// --- quadratic character ---------------------------------------------------

/// Euler's criterion in F_q: 0 for zero, else z^{(q-1)/2} as +-1.
inline int quad_char(const FieldCtx& F, const FieldEl& z) {
  if (F.is_zero(z)) return 0;
  FieldEl e = F.pow(z, (F.q() - 1) / 2);
  if (e == F.one()) return 1;
  if (e == F.neg(F.one())) return -1;
  throw InternalConsistencyError("Euler criterion returned neither 1 nor -1");
}

/// Character values for every element of F_q by index, built by squaring
/// the whole field once.
class QuadCharTable {
 public:
  explicit QuadCharTable(const FieldCtx& F) : ctx_(F) {
    if (F.q() > kMaxEnumerableOrder) throw ParameterError("field of order " + std::to_string(F.q()) + " too large to tabulate");
    chi_.assign(F.q(), -1);
    chi_[0] = 0;
    for (std::uint64_t i = 1; i < F.q(); ++i) {
      FieldEl y = F.from_index(i);
      chi_[F.index(F.mul(y, y))] = 1;
    }
  }

  const FieldCtx& ctx() const { return ctx_; }
  int at_index(std::uint64_t idx) const { return chi_[idx]; }
  int operator()(const FieldEl& z) const { return chi_[ctx_.index(z)]; }

 private:
  FieldCtx ctx_;
  std::vector<std::int8_t> chi_;
};

}  // namespace kleinprym
