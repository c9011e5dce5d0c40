#pragma once

// The definite quaternion algebra ramified at {p, oo} together with a
// maximal order.

#include <set>
#include <string>
#include <vector>

#include "quatlift/arith.hpp"
#include "quatlift/lattice.hpp"
#include "quatlift/quaternion.hpp"

namespace quatlift {

struct AlgebraWithOrder {
  Int p = 0;
  QuaternionAlgebra algebra;
  Order maximal;
};

namespace detail {

inline QuaternionAlgebra presentation_for_prime(Int p) {
  if (p % 4 == 3) return {-1, -p};
  if (p % 8 == 5) return {-2, -p};
  for (Int q = 3;; q += 4) {
    if (is_prime(q) && legendre(q, p) == -1) return {-q, -p};
    if (q > 100000) throw ConstructionError("no auxiliary prime found for p = " + std::to_string(p));
  }
}

/// Smallest ring containing L, or nullopt-like failure via a non-integral
/// element (signalled by returning false).
inline bool ring_closure(Lattice& L) {
  for (int round = 0; round < 16; ++round) {
    for (const auto& b : L.basis())
      if (!is_integral(b)) return false;
    Lattice next = sum(L, product(L, L));
    if (next == L) return true;
    L = next;
  }
  return false;
}

/// Enlarge an order containing Z<1,i,j,k> until its discriminant is p.
inline Lattice saturate(const QuaternionAlgebra& alg, Lattice L, Int p) {
  for (int guard = 0; guard < 64; ++guard) {
    Int d = gram_disc(L).disc;
    if (d == p) return L;
    if (d % p != 0) throw ConstructionError("discriminant not divisible by p during saturation");
    auto primes = factor(d / p);
    bool grew = false;
    for (auto [ell, e] : primes) {
      auto b = L.basis();
      IntVec<4> c{};
      // c in {0..ell-1}^4 \ {0}, lexicographic
      for (Int n = 1; n < ipow(ell, 4) && !grew; ++n) {
        Int t = n;
        for (std::size_t i = 0; i < 4; ++i) {
          c[i] = t % ell;
          t /= ell;
        }
        QuatElement x = QuatElement::scalar(alg, 0);
        for (std::size_t i = 0; i < 4; ++i)
          if (c[i] != 0) x = x + b[i] * Rational(c[i]);
        x = x * Rational(1, ell);
        if (L.contains(x) || !is_integral(x)) continue;
        std::vector<QuatElement> extra{x};
        Lattice cand = extend(L, extra);
        if (!ring_closure(cand)) continue;
        L = cand;
        grew = true;
      }
      if (grew) break;
    }
    if (!grew) throw ConstructionError("maximal order saturation failed for p = " + std::to_string(p));
  }
  throw ConstructionError("maximal order saturation did not converge");
}

}  // namespace detail

/// H(a, b) ramified exactly at {p, oo} and a maximal order in it.
inline AlgebraWithOrder algebra_for_prime(Int p) {
  if (p == 2) throw ConstructionError("p = 2 is not supported");
  if (p < 3 || !is_prime(p)) throw ConstructionError("p must be an odd prime, got " + std::to_string(p));
  AlgebraWithOrder out;
  out.p = p;
  out.algebra = detail::presentation_for_prime(p);
  const auto& alg = out.algebra;
  if (ramified_primes(alg) != std::set<Int>{p})
    throw ConstructionError("presentation does not ramify exactly at p = " + std::to_string(p));
  Lattice L;
  if (p % 4 == 3) {
    L = Lattice::from_generators(alg, {QuatElement(alg, {1, 0, 0, 0}), QuatElement(alg, {0, 1, 0, 0}),
                                       QuatElement(alg, {1, 0, 1, 0}, 2), QuatElement(alg, {0, 1, 0, 1}, 2)});
  } else {
    L = detail::saturate(alg, unit_lattice(alg), p);
  }
  out.maximal = make_order(L);
  if (out.maximal.disc != p) throw ConstructionError("order is not maximal");
  return out;
}

}  // namespace quatlift
