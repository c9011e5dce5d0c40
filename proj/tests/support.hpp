#pragma once

// Golden data for p = 7 and brute-force oracles shared by the unit tests
// and the acceptance runner. Nothing here calls the enumeration code it
// is used to check.

#include <array>
#include <string>
#include <vector>

#include "quatlift.hpp"

namespace quatlift::testing {

/// Left Õ-subideals b_1..b_8 of O at p = 7 with their characters.
inline const std::vector<std::array<std::string, 4>>& subideals_of_O() {
  static const std::vector<std::array<std::string, 4>> t{
      {"1", "7i", "(1+j)/2", "(7i+k)/2"},     {"7", "4+i", "(7+j)/2", "(4+i+k)/2"},
      {"7", "1+i", "(7+j)/2", "(8+i+k)/2"},   {"7", "2+i", "(7+j)/2", "(2+i+k)/2"},
      {"7", "i", "(7+j)/2", "(i+k)/2"},       {"7", "5+i", "(7+j)/2", "(12+i+k)/2"},
      {"7", "6+i", "(7+j)/2", "(6+i+k)/2"},   {"7", "3+i", "(7+j)/2", "(10+i+k)/2"},
  };
  return t;
}

inline const std::vector<int>& subideal_characters() {
  static const std::vector<int> c{+1, -1, +1, -1, +1, -1, +1, -1};
  return c;
}

inline const std::array<std::string, 4>& oplus_generators() {
  static const std::array<std::string, 4> g{"1", "7i", "(1+j)/2", "(7i+7k)/2"};
  return g;
}

inline const std::array<std::string, 4>& ominus_generators() {
  static const std::array<std::string, 4> g{"1", "7i", "(1+7j)/2", "(1+7i+5j+k)/2"};
  return g;
}

using Gens = std::array<std::string, 4>;

/// Subideals under b_1..b_4 for O+ (first) and O- (second).
inline const std::vector<std::pair<std::vector<Gens>, std::vector<Gens>>>& level_p2_subideals() {
  static const std::vector<std::pair<std::vector<Gens>, std::vector<Gens>>> t{
      {{{"1", "7i", "(1+j)/2", "(7i+7k)/2"},
        {"7", "7i", "(7+j)/2", "(2+7i+k)/2"},
        {"7", "7i", "(7+j)/2", "(4+7i+k)/2"},
        {"7", "7i", "(7+j)/2", "(6+7i+k)/2"},
        {"7", "7i", "(7+j)/2", "(8+7i+k)/2"},
        {"7", "7i", "(7+j)/2", "(10+7i+k)/2"},
        {"7", "7i", "(7+j)/2", "(12+7i+k)/2"}},
       {{"1", "7i", "(1+7j)/2", "(1+7i+5j+k)/2"},
        {"7", "7i", "(1+j)/2", "(2+7i+k)/2"},
        {"7", "7i", "(3+j)/2", "(6+7i+k)/2"},
        {"7", "7i", "(5+j)/2", "(10+7i+k)/2"},
        {"7", "7i", "(9+j)/2", "(4+7i+k)/2"},
        {"7", "7i", "(11+j)/2", "(8+7i+k)/2"},
        {"7", "7i", "(13+j)/2", "(12+7i+k)/2"}}},
      {{{"7", "4+i", "(7+7j)/2", "(11+i+3j+k)/2"},
        {"7", "7i", "(1+2i+j)/2", "(4+i+k)/2"},
        {"7", "7i", "(3+6i+j)/2", "(12+3i+k)/2"},
        {"7", "7i", "(5+10i+j)/2", "(6+5i+k)/2"},
        {"7", "7i", "(9+4i+j)/2", "(8+9i+k)/2"},
        {"7", "7i", "(11+8i+j)/2", "(2+11i+k)/2"},
        {"7", "7i", "(13+12i+j)/2", "(10+13i+k)/2"}},
       {{"7", "4+i", "(7+7j)/2", "(4+i+k)/2"},
        {"7", "7i", "(1+2i+j)/2", "(7i+k)/2"},
        {"7", "7i", "(3+6i+j)/2", "(7i+k)/2"},
        {"7", "7i", "(5+10i+j)/2", "(7i+k)/2"},
        {"7", "7i", "(9+4i+j)/2", "(7i+k)/2"},
        {"7", "7i", "(11+8i+j)/2", "(7i+k)/2"},
        {"7", "7i", "(13+12i+j)/2", "(7i+k)/2"}}},
      {{{"7", "1+i", "(7+7j)/2", "(8+i+6j+k)/2"},
        {"7", "7i", "(1+8i+j)/2", "(8+i+k)/2"},
        {"7", "7i", "(3+10i+j)/2", "(10+3i+k)/2"},
        {"7", "7i", "(5+12i+j)/2", "(12+5i+k)/2"},
        {"7", "7i", "(9+2i+j)/2", "(2+9i+k)/2"},
        {"7", "7i", "(11+4i+j)/2", "(4+11i+k)/2"},
        {"7", "7i", "(13+6i+j)/2", "(6+13i+k)/2"}},
       {{"7", "1+i", "(7+7j)/2", "(8+i+2j+k)/2"},
        {"7", "7i", "(1+8i+j)/2", "(12+5i+k)/2"},
        {"7", "7i", "(3+10i+j)/2", "(8+i+k)/2"},
        {"7", "7i", "(5+12i+j)/2", "(4+11i+k)/2"},
        {"7", "7i", "(9+2i+j)/2", "(10+3i+k)/2"},
        {"7", "7i", "(11+4i+j)/2", "(6+13i+k)/2"},
        {"7", "7i", "(13+6i+j)/2", "(2+9i+k)/2"}}},
      {{{"7", "2+i", "(7+7j)/2", "(9+i+5j+k)/2"},
        {"7", "7i", "(1+4i+j)/2", "(2+i+k)/2"},
        {"7", "7i", "(3+12i+j)/2", "(6+3i+k)/2"},
        {"7", "7i", "(5+6i+j)/2", "(10+5i+k)/2"},
        {"7", "7i", "(9+8i+j)/2", "(4+9i+k)/2"},
        {"7", "7i", "(11+2i+j)/2", "(8+11i+k)/2"},
        {"7", "7i", "(13+10i+j)/2", "(12+13i+k)/2"}},
       {{"7", "2+i", "(7+7j)/2", "(9+i+j+k)/2"},
        {"7", "7i", "(1+4i+j)/2", "(6+3i+k)/2"},
        {"7", "7i", "(3+12i+j)/2", "(4+9i+k)/2"},
        {"7", "7i", "(5+6i+j)/2", "(2+i+k)/2"},
        {"7", "7i", "(9+8i+j)/2", "(12+13i+k)/2"},
        {"7", "7i", "(11+2i+j)/2", "(10+5i+k)/2"},
        {"7", "7i", "(13+10i+j)/2", "(8+11i+k)/2"}}},
  };
  return t;
}

inline Lattice lattice_of(const QuaternionAlgebra& alg, const Gens& g) {
  std::vector<QuatElement> e;
  for (const auto& s : g) e.push_back(parse_element(alg, s));
  return Lattice::from_generators(alg, e);
}

/// The algebra (-1,-7) of the golden data.
inline QuaternionAlgebra algebra7() { return QuaternionAlgebra{-1, -7}; }

/// #E(F_q) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6. For odd q the
/// y-count at each x is the number of square roots of (a1 x + a3)^2 + 4 rhs,
/// read from a table of squares; q = 2 by brute force.
inline Int count_points(Int q, Int a1, Int a2, Int a3, Int a4, Int a6) {
  Int n = 1;
  std::vector<int> roots(std::size_t(q), 0);
  for (Int y = 0; y < q; ++y) ++roots[std::size_t(y * y % q)];
  for (Int x = 0; x < q; ++x) {
    Int rhs = mod(mod(x * x, q) * x + a2 * mod(x * x, q) + a4 * x + a6, q);
    if (q == 2) {
      for (Int y = 0; y < q; ++y)
        if (mod(y * y + a1 * x * y + a3 * y, q) == rhs) ++n;
      continue;
    }
    Int b = mod(a1 * x + a3, q);
    n += roots[std::size_t(mod(b * b + 4 * rhs, q))];
  }
  return n;
}

/// a_q of the conductor-49 curve y^2 + xy = x^3 - x^2 - 2x - 1.
inline Int curve49_ap(Int q) { return q + 1 - count_points(q, 1, -1, 0, -2, -1); }

/// a_n of the same curve for n <= n_max: a_7^k = 0 (additive reduction),
/// Hecke recursion at good primes, multiplicativity.
inline std::vector<double> curve49_an(Int n_max) {
  std::vector<double> ap(std::size_t(n_max + 1), 0.0);
  for (Int q : primes_up_to(n_max)) ap[std::size_t(q)] = q == 7 ? 0.0 : double(curve49_ap(q));
  std::vector<double> a(std::size_t(n_max + 1), 0.0);
  a[1] = 1;
  for (Int n = 2; n <= n_max; ++n) {
    double v = 1;
    for (auto [q, e] : factor(n)) {
      double prev = 1, cur = ap[std::size_t(q)];
      for (int k = 1; k < e; ++k) {
        double next = cur * ap[std::size_t(q)] - (q == 7 ? 0.0 : double(q)) * prev;
        prev = cur;
        cur = next;
      }
      v *= cur;
    }
    a[std::size_t(n)] = v;
  }
  return a;
}

/// r_n of a quadratic form with Hessian h by box search |x_i| <= box.
template <std::size_t N>
std::vector<Int> box_counts(const IntMat<N>& h, Int bound, Int box) {
  std::vector<Int> r(std::size_t(bound + 1), 0);
  std::array<Int, N> x;
  x.fill(-box);
  while (true) {
    Int v = 0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) v += h[i][j] * x[i] * x[j];
    v /= 2;
    if (v <= bound) ++r[std::size_t(v)];
    std::size_t k = 0;
    while (k < N && x[k] == box) x[k++] = -box;
    if (k == N) break;
    ++x[k];
  }
  return r;
}

/// q-neighbors of a (left O-ideals b with q a < b < a, [a:b] = q^2) found by
/// running over all pairs of vectors of (Z/q)^4 and removing duplicates.
inline std::vector<Lattice> neighbors_by_pairs(const Lattice& a, const Lattice& O, Int q) {
  auto ab = a.basis();
  auto vec = [&](Int code) {
    QuatElement x = QuatElement::scalar(a.algebra(), 0);
    for (std::size_t i = 0; i < 4; ++i) {
      x = x + ab[i] * Rational(code % q);
      code /= q;
    }
    return x;
  };
  const Int total = q * q * q * q;
  const Rational target = lattice_norm(a) * Rational(q);
  std::vector<Lattice> out;
  for (Int u = 1; u < total; ++u)
    for (Int v = u + 1; v < total; ++v) {
      std::vector<QuatElement> g{vec(u), vec(v)};
      for (const auto& x : ab) g.push_back(x * Rational(q));
      Lattice L = Lattice::from_generators(a.algebra(), g);
      if (a.index_of(L) != q * q) continue;
      if (lattice_norm(L) != target) continue;
      bool stable = true;
      for (const auto& o : O.basis())
        for (const auto& x : L.basis())
          if (!L.contains(o * x)) stable = false;
      if (!stable) continue;
      bool seen = false;
      for (const auto& m : out) seen = seen || m == L;
      if (!seen) out.push_back(L);
    }
  return out;
}

inline Int isqrt_floor(Int n) {
  Int r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Elements x of R with Delta(x) = -d counted modulo Z, for R inside (-1,-p):
/// x = t/2 + y with t in {0, 1} and y pure, N(y) = d/4.
inline Int special_points_brute(const Lattice& R, Int p, Int d) {
  const Int D = 2 * R.den();
  // y = (A i + B j + C k) / D with A^2 + p B^2 + p C^2 = d D^2 / 4
  const Int target = d * D * D / 4;
  const Int amax = isqrt_floor(target), bmax = isqrt_floor(target / p);
  Int count = 0;
  for (Int A = -amax; A <= amax; ++A)
    for (Int B = -bmax; B <= bmax; ++B)
      for (Int C = -bmax; C <= bmax; ++C) {
        if (A * A + p * B * B + p * C * C != target) continue;
        for (Int t : {0, 1})
          if (R.contains(QuatElement(R.algebra(), {t * D / 2, A, B, C}, D))) ++count;
      }
  return count;
}

}  // namespace quatlift::testing
