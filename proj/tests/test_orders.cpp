#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace quatlift;
using namespace quatlift::testing;

namespace {

struct Seven {
  Tower tower = build_tower(7);
  ClassSet maximal = maximal_class_set(tower);
  ClassSet tilde = tilde_class_set(tower, maximal);
};

const Seven& seven() {
  static const Seven s;
  return s;
}

std::set<Lattice> as_set(const std::vector<Lattice>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Orders, SevenUsesMinusOneMinusSeven) {
  EXPECT_EQ(seven().tower.algebra, algebra7());
  EXPECT_EQ(seven().maximal.size(), 1u);
}

TEST(Orders, SubidealsOfMaximalOrder) {
  const auto& s = seven();
  auto psi = psi_down_maximal(s.tower.maximal.lattice, s.tower.tilde.lattice, 7);
  ASSERT_EQ(psi.size(), 8u);
  std::vector<Lattice> golden;
  for (const auto& g : subideals_of_O()) golden.push_back(lattice_of(algebra7(), g));
  EXPECT_EQ(as_set(psi), as_set(golden));
  EXPECT_EQ(golden[0], s.tower.tilde.lattice);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(equivalent(golden[i], golden[i + 4])) << "b" << i + 1;
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(equivalent(golden[i], golden[j]));
  }
  EXPECT_EQ(s.tilde.size(), 4u);
}

TEST(Orders, StarOrbitOfSubideals) {
  const auto& s = seven();
  std::vector<Lattice> golden;
  for (const auto& g : subideals_of_O()) golden.push_back(lattice_of(algebra7(), g));
  QuatElement u = parse_element(algebra7(), "(1+2i+j)/2");
  EXPECT_EQ(star_action(golden[0], u, 7), golden[1]);
  std::vector<Lattice> orbit{golden[0]};
  for (int n = 0; n < 8; ++n) orbit.push_back(star_action(orbit.back(), u, 7));
  EXPECT_EQ(orbit.back(), orbit.front());
  orbit.pop_back();
  EXPECT_EQ(as_set(orbit), as_set(psi_down_maximal(s.tower.maximal.lattice, s.tower.tilde.lattice, 7)));
  EXPECT_TRUE(is_gh_generator(s.tower.maximal.lattice, u, 7));
}

TEST(Orders, LevelP2Subideals) {
  const auto& s = seven();
  const Order oplus = make_order(lattice_of(algebra7(), oplus_generators()));
  const Order ominus = make_order(lattice_of(algebra7(), ominus_generators()));
  for (const Order* o : {&oplus, &ominus}) {
    EXPECT_TRUE(s.tower.tilde.lattice.contains(o->lattice));
    EXPECT_EQ(o->level, 343);
  }
  Lattice mplus = m_ideal(oplus.lattice, s.tower.tilde.lattice, 7);
  Lattice mminus = m_ideal(ominus.lattice, s.tower.tilde.lattice, 7);
  for (std::size_t i = 0; i < 4; ++i) {
    Lattice b = lattice_of(algebra7(), subideals_of_O()[i]);
    std::vector<Lattice> gp, gm;
    for (const auto& g : level_p2_subideals()[i].first) gp.push_back(lattice_of(algebra7(), g));
    for (const auto& g : level_p2_subideals()[i].second) gm.push_back(lattice_of(algebra7(), g));
    EXPECT_EQ(as_set(psi_down_p2(b, oplus.lattice, mplus, 7)), as_set(gp)) << "b" << i + 1 << " O+";
    EXPECT_EQ(as_set(psi_down_p2(b, ominus.lattice, mminus, 7)), as_set(gm)) << "b" << i + 1 << " O-";
  }
}

TEST(Orders, SignsOfNamedOrders) {
  const auto& s = seven();
  const Order oplus = make_order(lattice_of(algebra7(), oplus_generators()));
  const Order ominus = make_order(lattice_of(algebra7(), ominus_generators()));
  bool seen_plus = false, seen_minus = false;
  for (const auto& o : s.tower.level_p2) {
    if (o.order.lattice == oplus.lattice) {
      EXPECT_EQ(o.sigma, 1);
      seen_plus = true;
    }
    if (o.order.lattice == ominus.lattice) {
      EXPECT_EQ(o.sigma, -1);
      seen_minus = true;
    }
  }
  EXPECT_TRUE(seen_plus);
  EXPECT_TRUE(seen_minus);
}

// sigma read off directly: (-Delta(x)/7 | 7) for x in O' outside Z + 7O.
TEST(Orders, SignFromDiscriminants) {
  const auto& t = seven().tower;
  for (const auto& o : t.level_p2) {
    std::set<int> signs;
    for (const auto& x : o.order.lattice.basis()) {
      if (t.zpo.contains(x)) continue;
      Int d = x.delta().to_integer();
      ASSERT_EQ(d % 7, 0);
      signs.insert(legendre(-d / 7, 7));
    }
    ASSERT_EQ(signs.size(), 1u);
    EXPECT_EQ(*signs.begin(), o.sigma);
  }
}

TEST(Orders, LevelP2CountAndSigns) {
  const auto& t = seven().tower;
  EXPECT_EQ(t.level_p2.size(), 8u);
  int plus = 0;
  for (const auto& o : t.level_p2) plus += o.sigma > 0;
  EXPECT_EQ(plus, 4);
  EXPECT_EQ(t.oprime(1).level, 343);
}

TEST(Orders, StructureConstants) {
  for (Int p : {7, 11, 13}) {
    auto t = build_tower(p);
    EXPECT_EQ(t.maximal.disc, p);
    EXPECT_EQ(t.tilde.level, p * p);
    EXPECT_EQ(t.tilde.theta_level, 4 * p);
    EXPECT_EQ(t.tilde.omega, p);
    for (const auto& o : t.level_p2) {
      EXPECT_EQ(o.order.level, p * p * p);
      EXPECT_EQ(o.order.theta_level, 4 * p * p);
      EXPECT_EQ(o.order.omega, p);
    }
    EXPECT_TRUE(check_structure_constants(t).ok);
  }
}

TEST(Orders, ClassNumbers) {
  // |I(O)| from the Eichler mass; |I(Õ)| = (p+1)|I(O)| / 2 for p = 7, 11;
  // |I(O')| = p |I(Õ)|.
  for (Int p : {7, 11}) {
    auto t = build_tower(p);
    auto m = maximal_class_set(t);
    auto tl = tilde_class_set(t, m);
    Rational mass(0);
    for (Int w : m.heights) mass += Rational(1, 2 * w);
    EXPECT_EQ(mass, Rational(p - 1, 24));
    for (int sigma : {1, -1}) {
      auto p2 = level_p2_class_set(t, tl, t.oprime(sigma), sigma);
      EXPECT_EQ(p2.size(), std::size_t(p) * tl.size());
    }
  }
  EXPECT_EQ(maximal_class_set(build_tower(11)).size(), 2u);
}

TEST(Orders, PsiDownMaximalIsOnePlusP) {
  auto t = build_tower(11);
  auto m = maximal_class_set(t);
  for (const auto& a : m.reps) {
    auto psi = psi_down_maximal(a, t.tilde.lattice, 11);
    EXPECT_EQ(psi.size(), 12u);
    for (const auto& b : psi) EXPECT_EQ(a.index_of(b), 11);
  }
}

TEST(Orders, StarActionFixesNothingInPsi) {
  const auto& s = seven();
  QuatElement u = gh_generator(s.tower.maximal.lattice, 7);
  for (const auto& b : psi_down_maximal(s.tower.maximal.lattice, s.tower.tilde.lattice, 7))
    EXPECT_NE(star_action(b, u, 7), b);
}

TEST(Orders, NeighborsMatchPairOracle) {
  const auto& s = seven();
  for (Int q : {2, 3})
    for (const auto& a : s.tilde.reps) {
      auto lib = detail::q_neighbors(a, s.tower.tilde.lattice, q);
      auto ref = neighbors_by_pairs(a, s.tower.tilde.lattice, q);
      EXPECT_EQ(as_set(lib), as_set(ref));
      EXPECT_EQ(ref.size(), std::size_t(q + 1));
    }
}

TEST(Orders, HeightsAreUnitHalves) {
  const auto& s = seven();
  for (std::size_t i = 0; i < s.tilde.size(); ++i) {
    EXPECT_EQ(s.tilde.heights[i] * 2, unit_count(s.tilde.right_orders[i]));
    EXPECT_GE(s.tilde.heights[i], 1);
  }
}
