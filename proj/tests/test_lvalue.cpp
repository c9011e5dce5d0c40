#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace quatlift;
using namespace quatlift::testing;

namespace {

// 2 sum a_n/n exp(-2 pi n / sqrt N), the even-sign value at the symmetric point
double direct_value(const std::vector<double>& a, Int N) {
  double s = 0;
  const double c = 2 * std::numbers::pi / std::sqrt(double(N));
  for (std::size_t n = 1; n < a.size(); ++n) s += a[n] / double(n) * std::exp(-c * double(n));
  return 2 * s;
}

std::vector<double> twist(const std::vector<double>& a, Int D) {
  std::vector<double> b(a.size(), 0.0);
  for (std::size_t n = 1; n < a.size(); ++n) b[n] = a[n] * kronecker(D, Int(n));
  return b;
}

}  // namespace

TEST(LValue, ZeroSeriesHasZeroValue) {
  std::vector<double> a(2000, 0.0);
  auto e = central_value(a, 49);
  EXPECT_EQ(e.value, 0.0);
}

TEST(LValue, TailBoundIsMetByTermsNeeded) {
  for (Int N : {49, 121, 169 * 25, 49 * 22500}) {
    Int M = terms_needed(N, 1e-13);
    EXPECT_LT(tail_bound(N, M), 1e-13);
    Int least = 1;
    while (tail_bound(N, least) >= 1e-13) ++least;
    EXPECT_LE(M - least, 2);
  }
}

TEST(LValue, Conductor49CurveMatchesDirectSum) {
  auto a = curve49_an(4000);
  auto e = central_value(a, 49);
  EXPECT_EQ(e.epsilon, 1);
  EXPECT_NEAR(e.value, direct_value(a, 49), 1e-12);
  EXPECT_LT(e.error, 1e-8);
  EXPECT_NEAR(e.value, 0.9666, 1e-4);
}

TEST(LValue, WrongConductorIsRejected) {
  auto a = curve49_an(4000);
  EXPECT_THROW(fit_central_value({LCandidate{50, a}}), FitFailure);
  auto e = fit_central_value({LCandidate{43, a}, LCandidate{49, a}, LCandidate{56, a}});
  EXPECT_EQ(e.conductor, 49);
}

// eps(E (x) chi_D) = chi_D(-49) for D prime to 7: +1 for D > 0, -1 for D < 0
TEST(LValue, TwistSignsFollowTheCharacter) {
  auto a = curve49_an(6000);
  for (Int D : {5, 8, 12, 13, 17}) {
    auto e = central_value(twist(a, D), 49 * D * D);
    EXPECT_EQ(e.epsilon, 1) << D;
    EXPECT_NEAR(e.value, direct_value(twist(a, D), 49 * D * D), 1e-10);
  }
  for (Int D : {-3, -4, -8, -11}) {
    auto e = central_value(twist(a, D), 49 * D * D);
    EXPECT_EQ(e.epsilon, -1) << D;
    EXPECT_EQ(e.value, 0.0);
  }
}

TEST(LValue, TwistCoefficientsAtP) {
  std::vector<double> a{0, 1, -1, 2, 3, 0, -2, 0, 1, 4, 0};
  auto b = twist_coefficients(a, 5, 3, 0.0, 10);
  for (Int n = 1; n <= 10; ++n) {
    if (n % 3 == 0) EXPECT_EQ(b[std::size_t(n)], 0.0);
    else EXPECT_EQ(b[std::size_t(n)], a[std::size_t(n)] * kronecker(5, n));
  }
  auto c = twist_coefficients(a, 5, 3, -1.0, 10);
  EXPECT_EQ(c[3], -1.0);
  EXPECT_EQ(c[9], 1.0);
  EXPECT_EQ(c[6], -a[2] * kronecker(5, 2));
}
