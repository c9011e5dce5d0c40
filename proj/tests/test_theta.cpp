#include <gtest/gtest.h>

#include "support.hpp"

using namespace quatlift;
using namespace quatlift::testing;

namespace {

struct Level {
  Tower tower;
  ClassSet maximal, tilde;
  explicit Level(Int p) : tower(build_tower(p)) {
    maximal = maximal_class_set(tower);
    tilde = tilde_class_set(tower, maximal);
  }
};

const Level& level(Int p) {
  static std::map<Int, std::unique_ptr<Level>> cache;
  auto& slot = cache[p];
  if (!slot) slot = std::make_unique<Level>(p);
  return *slot;
}

}  // namespace

class EdHecke : public ::testing::TestWithParam<Int> {};

TEST_P(EdHecke, TildeClasses) {
  const Int p = GetParam();
  const auto& L = level(p);
  auto fam = brandt_matrices(L.tilde, L.tower.tilde.disc, 5);
  auto r = check_edhecke(L.tilde, fam, p, 200, {2, 3, 5}, "tilde");
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST_P(EdHecke, LevelP2Classes) {
  const Int p = GetParam();
  const auto& L = level(p);
  for (int sigma : {1, -1}) {
    auto p2 = level_p2_class_set(L.tower, L.tilde, L.tower.oprime(sigma), sigma);
    auto fam = brandt_matrices(p2, L.tower.oprime(sigma).disc, 5);
    auto r = check_edhecke(p2, fam, p, 200, {2, 3, 5}, "p2");
    EXPECT_TRUE(r.ok) << r.detail;
  }
}

INSTANTIATE_TEST_SUITE_P(Primes, EdHecke, ::testing::Values(7, 11));

TEST(Theta, SpecialPointsMatchBruteForce) {
  for (Int p : {7, 11}) {
    const auto& L = level(p);
    SpecialPoints sp(L.tilde.right_orders, 80);
    for (std::size_t i = 0; i < L.tilde.size(); ++i)
      for (Int d = 0; d <= 80; ++d) EXPECT_EQ(sp.a(i, d), special_points_brute(L.tilde.right_orders[i], p, d)) << p << " " << d;
  }
}

TEST(Theta, SpecialPointsOfLevelP2OrdersMatchBruteForce) {
  const auto& L = level(7);
  auto p2 = level_p2_class_set(L.tower, L.tilde, L.tower.oprime(-1), -1);
  SpecialPoints sp(p2.right_orders, 7 * 30);
  for (std::size_t i = 0; i < p2.size(); i += 3)
    for (Int d = 0; d <= 7 * 30; d += 7) EXPECT_EQ(sp.a(i, d), special_points_brute(p2.right_orders[i], 7, d));
}

TEST(Theta, TernaryFormsOfTildeClasses) {
  for (Int p : {7, 11, 13}) {
    const auto& L = level(p);
    for (const auto& R : L.tilde.right_orders) {
      auto tf = ternary_form(R);
      EXPECT_EQ(tf.omega, p);
      EXPECT_EQ(tf.level, 4 * p);
    }
  }
}

// An element outside Z + pO of a level-p^2 order has (-Delta/p | p) = sigma,
// so q^d with p not dividing d only occurs when (d|p) = sigma.
TEST(Theta, LiftSupportFollowsTheGenusSign) {
  for (Int p : {7, 11}) {
    const auto& L = level(p);
    for (int sigma : {1, -1}) {
      LiftForms lift(L.tower, L.tilde, L.tower.oprime(sigma), 120);
      const auto& sp = lift.special_points();
      for (std::size_t i = 0; i < L.tilde.size(); ++i)
        for (Int d = 1; d <= 120; ++d) {
          if (d % p == 0) continue;
          if (sp.r(i, d) != 0) EXPECT_EQ(legendre(d, p), sigma) << p << " " << d;
        }
    }
  }
}

TEST(Theta, LiftChoiceDoesNotMatter) {
  // every subideal below b_i has the same special points
  const auto& L = level(7);
  const auto& o = L.tower.oprime(1);
  Lattice m = m_ideal(o.lattice, L.tower.tilde.lattice, 7);
  for (const auto& b : L.tilde.reps) {
    std::vector<std::vector<Int>> counts;
    for (const auto& c : psi_down_p2(b, o.lattice, m, 7)) {
      auto tf = ternary_form(side_order(c, Side::right));
      counts.push_back(count_by_value(tf.form, 60));
    }
    for (const auto& c : counts) EXPECT_EQ(c, counts.front());
  }
}

TEST(Theta, DefaultDepth) {
  EXPECT_EQ(default_depth(7), 42);
  EXPECT_EQ(default_depth(11), 99);
}

TEST(Theta, Theta32IsHalfTheCounts) {
  const auto& L = level(7);
  SpecialPoints sp(L.tilde.right_orders, 7 * 20);
  std::vector<Int> v(L.tilde.size(), 0);
  v[0] = 2;
  auto th = theta32(sp, v, 20, 28);
  for (Int n = 0; n <= 20; ++n) EXPECT_EQ(th.coeffs[std::size_t(n)], Rational(sp.r(0, n)));
  EXPECT_EQ(th.coeffs[0], Rational(1));
}
