#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace quatlift;

namespace {

Int powmod(Int a, Int e, Int m) {
  Int r = 1;
  a = mod(a, m);
  while (e) {
    if (e & 1) r = r * a % m;
    a = a * a % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

TEST(Arith, LegendreMatchesEulerCriterion) {
  for (Int p : primes_up_to(200)) {
    if (p == 2) continue;
    for (Int a = -50; a <= 50; ++a) {
      Int e = powmod(a, (p - 1) / 2, p);
      int expected = e == 0 ? 0 : (e == 1 ? 1 : -1);
      EXPECT_EQ(legendre(a, p), expected) << a << " " << p;
    }
  }
}

TEST(Arith, KroneckerIsMultiplicativeInTheModulus) {
  for (Int a = -30; a <= 30; ++a)
    for (Int m = 1; m <= 40; ++m)
      for (Int n = 1; n <= 40; ++n) EXPECT_EQ(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
}

TEST(Arith, KroneckerAtTwo) {
  for (Int a = -40; a <= 40; ++a) {
    int expected = a % 2 == 0 ? 0 : ((mod(a, 8) == 1 || mod(a, 8) == 7) ? 1 : -1);
    EXPECT_EQ(kronecker(a, 2), expected);
  }
}

TEST(Arith, FactorAndPrimes) {
  auto ps = primes_up_to(100);
  EXPECT_EQ(ps.size(), 25u);
  for (Int n = 2; n < 2000; ++n) {
    Int prod = 1;
    for (auto [q, e] : factor(n)) {
      EXPECT_TRUE(is_prime(q));
      prod *= ipow(q, unsigned(e));
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(Arith, FundamentalDiscriminants) {
  std::vector<Int> expected{-3, -4, -7, -8, -11, -15, -19, -20, -23, -24};
  std::vector<Int> got;
  for (Int D = -1; got.size() < expected.size(); --D)
    if (is_fundamental_discriminant(D)) got.push_back(D);
  EXPECT_EQ(got, expected);
}

TEST(Arith, RationalArithmetic) {
  Rational a(3, -6), b(5, 10);
  EXPECT_EQ(a, Rational(-1, 2));
  EXPECT_EQ(a + b, Rational(0));
  EXPECT_EQ(a * b, Rational(-1, 4));
  EXPECT_EQ(Rational(7, 3) / Rational(14, 9), Rational(3, 2));
  EXPECT_EQ(Rational(-5, 15).str(), "-1/3");
  EXPECT_THROW(Rational(1, 0), std::exception);
}

TEST(Arith, CheckedMultiplyOverflows) {
  EXPECT_THROW(checked::mul(Int(1) << 40, Int(1) << 40), OverflowError);
  EXPECT_EQ(checked::mul(-3, 7), -21);
}

TEST(Arith, IntegerNullspaceAgreesWithRational) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 2 + trial % 4, cols = 5 + trial % 3;
    IntMatrix a(rows, cols);
    RatMatrix r(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        a(i, j) = dist(rng);
        r(i, j) = Rational(a(i, j));
      }
    auto ni = integer_nullspace(a);
    auto nr = nullspace(r);
    ASSERT_EQ(ni.size(), nr.size());
    for (const auto& v : ni)
      for (std::size_t i = 0; i < rows; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j) * v[j];
        EXPECT_EQ(s, 0);
      }
    // same span: stacking both bases does not raise the rank
    RatMatrix both(ni.size() + nr.size(), cols);
    for (std::size_t k = 0; k < ni.size(); ++k)
      for (std::size_t j = 0; j < cols; ++j) {
        both(k, j) = Rational(ni[k][j]);
        both(ni.size() + k, j) = Rational(nr[k][j]);
      }
    EXPECT_EQ(rank(both), ni.size());
  }
}

TEST(Arith, HnfIsCanonical) {
  std::vector<IntVec<3>> rows{{2, 0, 0}, {1, 3, 0}, {0, 1, 5}};
  auto h = hnf_lower<3>(rows);
  std::vector<IntVec<3>> mixed{{2, 0, 0}, {3, 3, 0}, {1, 4, 5}, {4, 6, 0}};
  EXPECT_EQ(hnf_lower<3>(mixed), h);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_GT(h[r][r], 0);
    for (std::size_t c = r + 1; c < 3; ++c) EXPECT_EQ(h[r][c], 0);
  }
  std::vector<IntVec<3>> deficient{{1, 2, 3}, {2, 4, 6}};
  EXPECT_THROW(hnf_lower<3>(deficient), RankError);
}
