#include <gtest/gtest.h>

#include <random>

#include "kleinprym/ffield.hpp"
#include "oracle.hpp"

using namespace kleinprym;

namespace {

// First monic irreducible by scanning (c_0, ..., c_{k-1}) ascending, c_0 most significant.
std::vector<std::int64_t> first_irreducible_by_oracle(std::int64_t p, int k) {
  std::int64_t total = 1;
  for (int i = 0; i < k; ++i) total *= p;
  for (std::int64_t n = 0; n < total; ++n) {
    std::vector<std::int64_t> f(k + 1, 0);
    std::int64_t rest = n;
    for (int i = k - 1; i >= 0; --i) {
      f[i] = rest % p;
      rest /= p;
    }
    f[k] = 1;
    if (oracle::irreducible_by_trial_division(f, p)) return f;
  }
  return {};
}

std::vector<std::int64_t> modulus_of(const FieldCtx& F) {
  return {F.modulus().begin(), F.modulus().end()};
}

FieldEl random_el(const FieldCtx& F, std::mt19937_64& rng) { return F.from_index(rng() % F.q()); }

}  // namespace

TEST(MakeExt, PrimeField) {
  auto F = make_ext(5, 1);
  EXPECT_EQ(F.q(), 5u);
  EXPECT_EQ(modulus_of(F), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(F.mul(F.from_int(3), F.from_int(4)), F.from_int(2));
}

TEST(MakeExt, QuadraticOverF5IsIrreducible) {
  auto F = make_ext(5, 2);
  EXPECT_EQ(F.q(), 25u);
  auto m = modulus_of(F);
  EXPECT_EQ(m, (std::vector<std::int64_t>{1, 1, 1}));
  // Exhaustive root search.
  for (std::int64_t x = 0; x < 5; ++x) EXPECT_NE(oracle::mod(m[0] + m[1] * x + x * x, 5), 0);
  // gcd with x^25 - x has degree 2 exactly when the quadratic splits over F_25 but not F_5.
  auto B = make_ext(5, 1);
  Poly f{{B.from_int(m[0]), B.from_int(m[1]), B.one()}};
  Poly x25 = poly_powmod(B, poly_x(B), 25, f);
  EXPECT_TRUE(poly_mod(B, poly_sub(B, x25, poly_x(B)), f).is_zero());
  EXPECT_TRUE(is_irreducible_over_prime_field(B, f));
}

TEST(MakeExt, ModulusIsFirstIrreducibleInScanOrder) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u})
    for (int k = 2; k <= 4; ++k) {
      if (p == 11 && k == 4) continue;  // trial division over 11^2 divisors per candidate is slow enough already
      EXPECT_EQ(modulus_of(make_ext(p, k)), first_irreducible_by_oracle(p, k)) << p << "^" << k;
    }
}

TEST(MakeExt, RejectsBadParameters) {
  EXPECT_THROW(make_ext(4, 1), ParameterError);
  EXPECT_THROW(make_ext(2, 1), ParameterError);
  EXPECT_THROW(make_ext(9, 1), ParameterError);
  EXPECT_THROW(make_ext(5, 0), ParameterError);
  EXPECT_THROW(make_ext(5, 5), ParameterError);
  EXPECT_THROW(make_ext(32771, 1), ParameterError);
}

TEST(QuadChar, SmallPrime) {
  auto F = make_ext(5, 1);
  EXPECT_EQ(quad_char(F, F.from_int(4)), 1);
  EXPECT_EQ(quad_char(F, F.from_int(2)), -1);
  EXPECT_EQ(quad_char(F, F.zero()), 0);
}

TEST(QuadChar, TableAgreesWithEulerAndEnumeration) {
  for (auto [p, k] : {std::pair{5u, 1}, {5u, 2}, {7u, 3}, {3u, 4}, {11u, 2}}) {
    auto F = make_ext(p, k);
    QuadCharTable table(F);
    for (std::uint64_t i = 0; i < F.q(); ++i) {
      FieldEl z = F.from_index(i);
      int squares = 0;
      for (std::uint64_t j = 0; j < F.q(); ++j) squares += F.mul(F.from_index(j), F.from_index(j)) == z;
      ASSERT_EQ(table(z), squares - 1);
      ASSERT_EQ(quad_char(F, z), table.at_index(i));
    }
  }
}

TEST(QuadChar, Multiplicative) {
  std::mt19937_64 rng(2024);
  for (auto [p, k] : {std::pair{5u, 2}, {11u, 3}, {31u, 2}, {13u, 4}, {101u, 1}}) {
    auto F = make_ext(p, k);
    for (int i = 0; i < 1000; ++i) {
      FieldEl a = random_el(F, rng), b = random_el(F, rng);
      ASSERT_EQ(quad_char(F, F.mul(a, b)), quad_char(F, a) * quad_char(F, b));
    }
  }
}

TEST(FieldAxioms, RandomizedPerContext) {
  std::mt19937_64 rng(17);
  for (auto [p, k] : {std::pair{3u, 4}, {5u, 2}, {7u, 3}, {31u, 4}, {32749u, 2}}) {
    auto F = make_ext(p, k);
    for (int i = 0; i < 500; ++i) {
      FieldEl a = random_el(F, rng), b = random_el(F, rng), c = random_el(F, rng);
      ASSERT_EQ(F.add(F.add(a, b), c), F.add(a, F.add(b, c)));
      ASSERT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
      ASSERT_EQ(F.mul(a, b), F.mul(b, a));
      ASSERT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      ASSERT_EQ(F.add(a, F.neg(a)), F.zero());
      ASSERT_EQ(F.mul(a, F.one()), a);
      if (!F.is_zero(a)) ASSERT_EQ(F.mul(a, F.inv(a)), F.one());
    }
  }
}

TEST(FieldAxioms, Frobenius) {
  std::mt19937_64 rng(5);
  for (auto [p, k] : {std::pair{3u, 4}, {5u, 3}, {11u, 2}, {31u, 4}}) {
    auto F = make_ext(p, k);
    for (int i = 0; i < 200; ++i) {
      FieldEl a = random_el(F, rng);
      ASSERT_EQ(F.pow(a, F.q()), a);
    }
  }
}

TEST(FieldIndex, Bijective) {
  auto F = make_ext(7, 3);
  for (std::uint64_t i = 0; i < F.q(); ++i) ASSERT_EQ(F.index(F.from_index(i)), i);
}

TEST(Poly, FromRootsAndEval) {
  auto F = make_ext(5, 1);
  Poly f = poly_from_roots(F, {F.from_int(0), F.from_int(1)});
  EXPECT_EQ(f, (Poly{{F.zero(), F.from_int(4), F.one()}}));
  EXPECT_EQ(poly_eval(F, f, F.from_int(2)), F.from_int(2));
  EXPECT_EQ(poly_from_roots(F, {}), poly_constant(F, F.one()));
  EXPECT_EQ(poly_from_roots(F, {}).degree(), 0);
}

TEST(Poly, DivisionIdentity) {
  std::mt19937_64 rng(9);
  auto F = make_ext(7, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Poly a, b;
    for (int i = 0; i < 7; ++i) a.coeffs.push_back(random_el(F, rng));
    for (int i = 0; i < 3; ++i) b.coeffs.push_back(random_el(F, rng));
    b.coeffs.push_back(F.one());
    a = poly_trim(a);
    auto d = poly_divmod(F, a, b);
    EXPECT_LT(d.remainder.degree(), b.degree());
    EXPECT_EQ(poly_add(F, poly_mul(F, d.quotient, b), d.remainder), a);
  }
  EXPECT_THROW(poly_divmod(F, poly_x(F), Poly{}), ParameterError);
}

TEST(Poly, DeflateMatchesDivision) {
  auto F = make_ext(11, 1);
  Poly f = poly_from_roots(F, {F.from_int(2), F.from_int(5), F.from_int(9)});
  Poly q = poly_deflate(F, f, F.from_int(5));
  EXPECT_EQ(q, poly_from_roots(F, {F.from_int(2), F.from_int(9)}));
  EXPECT_EQ(poly_eval(F, q, F.from_int(5)), F.from_int((5 - 2) * (5 - 9)));
}

TEST(Poly, GcdIsMonicCommonFactor) {
  auto F = make_ext(13, 1);
  Poly a = poly_mul(F, poly_from_roots(F, {F.from_int(1), F.from_int(2)}), poly_constant(F, F.from_int(3)));
  Poly b = poly_from_roots(F, {F.from_int(2), F.from_int(7)});
  EXPECT_EQ(poly_gcd(F, a, b), poly_from_roots(F, {F.from_int(2)}));
}
