#pragma once

// Left ideals: inverses, ideal-class equivalence and heights.

#include "quatlift/enumerate.hpp"
#include "quatlift/lattice.hpp"

namespace quatlift {

/// a^{-1} = conj(a) / N(a).
inline Lattice inverse_lattice(const Lattice& a) {
  return scaled(conjugate(a), Rational(1) / lattice_norm(a));
}

/// The norm form of L divided by `normalizer` as an integral quaternary form.
inline QuadraticForm<4> norm_form(const Lattice& L, const Rational& normalizer) {
  return QuadraticForm<4>{normalized_hessian(L, normalizer)};
}

inline QuadraticForm<4> norm_form(const Lattice& L) { return norm_form(L, lattice_norm(L)); }

/// a^{-1} b together with the normalizer N(b)/N(a) of its norm form.
struct Connecting {
  Lattice lattice;
  Rational normalizer;
};

inline Connecting connecting_lattice(const Lattice& a, const Lattice& b) {
  Connecting c{product(inverse_lattice(a), b), lattice_norm(b) / lattice_norm(a)};
  if (lattice_norm(c.lattice) != c.normalizer)
    throw InvariantError("N(a^-1 b) != N(b)/N(a): ideals are not compatible");
  return c;
}

/// [a] = [b] iff some x in a^{-1} b has N(x) = N(b)/N(a).
inline bool equivalent(const Lattice& a, const Lattice& b) {
  if (a == b) return true;
  auto c = connecting_lattice(a, b);
  return represents(norm_form(c.lattice, c.normalizer), 1);
}

/// Number of units in an order (vectors of norm 1).
inline Int unit_count(const Lattice& order) {
  auto r = count_by_value(norm_form(order, Rational(1)), 1);
  return r[1];
}

/// <[a],[a]> = |O_r(a)^x| / 2.
inline Int height(const Lattice& a) {
  Int u = unit_count(side_order(a, Side::right));
  if (u % 2 != 0) throw InvariantError("odd unit count");
  return u / 2;
}

}  // namespace quatlift
