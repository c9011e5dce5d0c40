#pragma once

// The tower O ⊋ Õ ⊋ O' ⊋ Z + pO: the index-p suborder of a maximal
// order, the p + 1 level-p^2 orders with their genus sign, subideal maps
// between the three class sets, the local star action and class sets.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quatlift/algebra.hpp"
#include "quatlift/ideal.hpp"
#include "quatlift/lattice.hpp"
#include "quatlift/parallel.hpp"

namespace quatlift {

namespace detail {

inline QuatElement combination(const std::array<QuatElement, 4>& basis, const std::array<Int, 4>& c) {
  QuatElement x = QuatElement::scalar(basis[0].algebra(), 0);
  for (std::size_t i = 0; i < 4; ++i)
    if (c[i] != 0) x = x + basis[i] * Rational(c[i]);
  return x;
}

inline bool left_stable(const Lattice& order, const Lattice& L) {
  for (const auto& x : order.basis())
    for (const auto& y : L.basis())
      if (!L.contains(x * y)) return false;
  return true;
}

inline Int integer_delta(const QuatElement& x) { return x.delta().to_integer(); }

}  // namespace detail

/// Z + pL.
inline Lattice z_plus_p(const Lattice& L, Int p) {
  std::vector<QuatElement> g{QuatElement::scalar(L.algebra(), 1)};
  for (const auto& b : L.basis()) g.push_back(b * Rational(p));
  return Lattice::from_generators(L.algebra(), g);
}

/// Õ = {x in O : p | Delta(x)}, as pO plus lifts of the radical of the
/// polarized Delta-form on O/pO.
inline Order tilde_order(const Order& O, Int p) {
  auto b = O.lattice.basis();
  IntMatrix form(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Rational v = Rational(2) * b[i].trace() * b[j].trace() - Rational(4) * (b[i] * b[j].conj()).trace();
      form(i, j) = v.to_integer();
    }
  auto radical = nullspace_mod(form, p);
  if (radical.size() != 3) throw InvariantError("radical of the Delta-form mod p is not 3-dimensional");
  std::vector<QuatElement> g;
  for (const auto& x : b) g.push_back(x * Rational(p));
  for (const auto& v : radical) g.push_back(detail::combination(b, {v[0], v[1], v[2], v[3]}));
  Order t = make_order(Lattice::from_generators(O.lattice.algebra(), g));
  if (O.lattice.index_of(t.lattice) != p) throw InvariantError("Õ does not have index p");
  return t;
}

/// sigma(O') = (-Delta(x)/p | p) for x in O' \ (Z + pO), where p || Delta(x).
/// With this sign the special points of discriminant -pd on O' have
/// (d|p) = sigma(O'). `skip` selects a later witness.
inline int genus_sign(const Lattice& oprime, const Lattice& zpo, Int p, std::size_t skip = 0) {
  auto b = oprime.basis();
  std::size_t seen = 0;
  for (Int h = 1; h <= 3; ++h) {
    std::array<Int, 4> c{};
    for (c[0] = -h; c[0] <= h; ++c[0])
      for (c[1] = -h; c[1] <= h; ++c[1])
        for (c[2] = -h; c[2] <= h; ++c[2])
          for (c[3] = -h; c[3] <= h; ++c[3]) {
            Int m = std::max({std::llabs(c[0]), std::llabs(c[1]), std::llabs(c[2]), std::llabs(c[3])});
            if (m != h) continue;
            QuatElement x = detail::combination(b, c);
            if (zpo.contains(x)) continue;
            Int d = detail::integer_delta(x);
            if (d % p != 0) throw InvariantError("element of a level-p^2 order with p not dividing Delta");
            if ((d / p) % p == 0) continue;
            if (seen++ < skip) continue;
            return legendre(-d / p, p);
          }
  }
  throw InvariantError("no sigma witness found");
}

struct LevelP2Order {
  Order order;
  int sigma = 0;
};

struct Tower {
  Int p = 0;
  QuaternionAlgebra algebra;
  Order maximal;
  Order tilde;
  Lattice zpo;                       ///< Z + pO
  std::vector<LevelP2Order> level_p2;  ///< sorted by lattice
  std::size_t plus = 0, minus = 0;   ///< lex-least order of each sign

  const Order& oprime(int sigma) const { return level_p2.at(sigma > 0 ? plus : minus).order; }
};

/// The p + 1 orders strictly between Z + pO and Õ of index p in Õ.
inline std::vector<LevelP2Order> level_p2_orders(const Order& tilde, const Lattice& zpo, Int p) {
  auto tb = tilde.lattice.basis();
  std::optional<QuatElement> u, v;
  for (const auto& x : tb) {
    if (!u) {
      if (!zpo.contains(x)) u = x;
    } else {
      std::vector<QuatElement> e{*u};
      if (!extend(zpo, e).contains(x)) {
        v = x;
        break;
      }
    }
  }
  if (!u || !v) throw InvariantError("Õ/(Z+pO) is not 2-dimensional");
  std::vector<QuatElement> gens;
  for (Int t = 0; t < p; ++t) gens.push_back(*u + *v * Rational(t));
  gens.push_back(*v);
  std::vector<LevelP2Order> out(gens.size());
  parallel_for(gens.size(), [&](std::size_t i) {
    std::vector<QuatElement> e{gens[i]};
    Lattice L = extend(zpo, e);
    if (!is_order(L)) throw InvariantError("level-p^2 candidate is not an order");
    out[i].order = make_order(L);
    out[i].sigma = genus_sign(L, zpo, p);
  });
  std::sort(out.begin(), out.end(),
            [](const LevelP2Order& x, const LevelP2Order& y) { return x.order.lattice < y.order.lattice; });
  return out;
}

inline Tower build_tower(Int p) {
  auto A = algebra_for_prime(p);
  Tower t;
  t.p = p;
  t.algebra = A.algebra;
  t.maximal = A.maximal;
  t.tilde = tilde_order(t.maximal, p);
  t.zpo = z_plus_p(t.maximal.lattice, p);
  t.level_p2 = level_p2_orders(t.tilde, t.zpo, p);
  bool have_plus = false, have_minus = false;
  for (std::size_t i = 0; i < t.level_p2.size(); ++i) {
    if (t.level_p2[i].sigma > 0 && !have_plus) {
      t.plus = i;
      have_plus = true;
    }
    if (t.level_p2[i].sigma < 0 && !have_minus) {
      t.minus = i;
      have_minus = true;
    }
  }
  if (!have_plus || !have_minus) throw InvariantError("both genus signs must occur");
  return t;
}

/// m = {x : x Õ ⊆ O'}, a two-sided Õ-ideal of index p^2.
inline Lattice m_ideal(const Lattice& oprime, const Lattice& tilde, Int p) {
  Lattice m = left_colon(tilde, oprime);
  if (tilde.index_of(m) != p * p) throw InvariantError("m does not have index p^2 in Õ");
  return m;
}

/// Left `small`-ideals b with p a ⊆ b ⊂ a of index p and N(b) = N(a).
inline std::vector<Lattice> psi_down_maximal(const Lattice& a, const Lattice& small, Int p) {
  auto b = a.basis();
  std::vector<std::array<Int, 4>> functionals;
  for (std::size_t k = 0; k < 4; ++k) {
    Int count = ipow(p, static_cast<unsigned>(3 - k));
    for (Int n = 0; n < count; ++n) {
      std::array<Int, 4> f{};
      f[k] = 1;
      Int t = n;
      for (std::size_t j = 3; j > k; --j) {
        f[j] = t % p;
        t /= p;
      }
      functionals.push_back(f);
    }
  }
  const Rational na = lattice_norm(a);
  std::vector<std::optional<Lattice>> found(functionals.size());
  parallel_for(functionals.size(), [&](std::size_t idx) {
    const auto& f = functionals[idx];
    std::size_t k = 0;
    while (f[k] == 0) ++k;
    std::vector<QuatElement> g;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i == k) g.push_back(b[k] * Rational(p));
      else g.push_back(b[i] - b[k] * Rational(f[i]));
    }
    Lattice L = Lattice::from_generators(a.algebra(), g);
    if (lattice_norm(L) != na) return;
    if (!detail::left_stable(small, L)) return;
    found[idx] = L;
  });
  std::vector<Lattice> out;
  for (auto& x : found)
    if (x) out.push_back(*x);
  std::sort(out.begin(), out.end());
  if (out.size() != static_cast<std::size_t>(p + 1))
    throw InvariantError("subideal map O -> Õ produced " + std::to_string(out.size()) + " ideals, expected p+1");
  return out;
}

/// Left O'-ideals c with m a ⊊ c ⊊ a and N(c) = N(a); m = m_ideal(O').
inline std::vector<Lattice> psi_down_p2(const Lattice& a, const Lattice& oprime, const Lattice& m, Int p) {
  Lattice ma = product(m, a);
  if (a.index_of(ma) != p * p) throw InvariantError("[a : m a] != p^2");
  auto ab = a.basis();
  std::optional<QuatElement> u, v;
  for (const auto& x : ab) {
    if (!u) {
      if (!ma.contains(x)) u = x;
    } else {
      std::vector<QuatElement> e{*u};
      if (!extend(ma, e).contains(x)) {
        v = x;
        break;
      }
    }
  }
  if (!u || !v) throw InvariantError("a / m a is not 2-dimensional");
  std::vector<QuatElement> gens;
  for (Int t = 0; t < p; ++t) gens.push_back(*u + *v * Rational(t));
  gens.push_back(*v);
  const Rational na = lattice_norm(a);
  std::vector<Lattice> out;
  for (const auto& x : gens) {
    std::vector<QuatElement> e{x};
    Lattice c = extend(ma, e);
    if (lattice_norm(c) != na) continue;
    if (!detail::left_stable(oprime, c)) throw InvariantError("norm-preserving line is not a left O'-ideal");
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  if (out.size() != static_cast<std::size_t>(p))
    throw InvariantError("subideal map Õ -> O' produced " + std::to_string(out.size()) + " ideals, expected p");
  return out;
}

/// b ⋆ x for the adele equal to x at p and 1 elsewhere: p^k b + b y.
inline Lattice star_action(const Lattice& b, const QuatElement& x, Int p) {
  if (x.is_zero()) throw std::invalid_argument("star action by zero");
  Lattice R = side_order(b, Side::right);
  auto c = R.coordinates(x);
  int s = 0;
  for (const auto& ci : c)
    if (!ci.is_zero()) s = std::max(s, -valuation(ci, p));
  int t = valuation(x.norm(), p);
  if (t < 0) throw std::invalid_argument("star action: element not invertible at p");
  int k = t + s;
  auto rb = R.basis();
  QuatElement y = QuatElement::scalar(b.algebra(), 0);
  for (std::size_t i = 0; i < 4; ++i) {
    if (c[i].is_zero()) continue;
    int e = std::max(0, -valuation(c[i], p));
    Int pe = ipow(p, static_cast<unsigned>(e));
    Int modulus = ipow(p, static_cast<unsigned>(k + e));
    // c = n / (m p^e) with p not dividing m
    Int n = c[i].num();
    Int m = c[i].den() / pe;
    Int r = mod(checked::mul(mod(n, modulus), inverse_mod(m, modulus)), modulus);
    if (r != 0) y = y + rb[i] * Rational(r, pe);
  }
  return sum(scaled(b, Rational(ipow(p, static_cast<unsigned>(k)))), right_multiply(b, y));
}

namespace detail {

/// Coordinates of x in the basis of the order R, reduced mod p.
inline std::array<Int, 4> coords_mod(const Lattice& R, const QuatElement& x, Int p) {
  auto c = R.coordinates(x);
  std::array<Int, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = mod(c[i].to_integer(), p);
  return out;
}

}  // namespace detail

/// True when u^0 .. u^p lie in p + 1 distinct classes of R_p^x modulo the
/// units of its index-p suborder (u ~ v iff p | Delta(u conj v)).
inline bool is_gh_generator(const Lattice& R, const QuatElement& u, Int p) {
  if (!R.contains(u)) return false;
  Rational n = u.norm();
  if (n.to_integer() % p == 0) return false;
  auto rb = R.basis();
  std::vector<std::array<Int, 4>> powers{detail::coords_mod(R, QuatElement::scalar(R.algebra(), 1), p)};
  for (Int i = 1; i <= p; ++i) {
    QuatElement prev = detail::combination(rb, powers.back());
    powers.push_back(detail::coords_mod(R, prev * u, p));
  }
  for (std::size_t i = 0; i < powers.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      QuatElement x = detail::combination(rb, powers[i]) * detail::combination(rb, powers[j]).conj();
      if (detail::integer_delta(x) % p == 0) return false;
    }
  return true;
}

/// First admissible generator of G\H in R, by increasing coordinate height.
inline QuatElement gh_generator(const Lattice& R, Int p, Int max_height = 6) {
  auto rb = R.basis();
  for (Int h = 1; h <= max_height; ++h) {
    std::array<Int, 4> c{};
    for (c[0] = -h; c[0] <= h; ++c[0])
      for (c[1] = -h; c[1] <= h; ++c[1])
        for (c[2] = -h; c[2] <= h; ++c[2])
          for (c[3] = -h; c[3] <= h; ++c[3]) {
            Int m = std::max({std::llabs(c[0]), std::llabs(c[1]), std::llabs(c[2]), std::llabs(c[3])});
            if (m != h) continue;
            QuatElement u = detail::combination(rb, c);
            if (is_gh_generator(R, u, p)) return u;
          }
  }
  throw InvariantError("no generator found within the search bound");
}

enum class OrderTag { maximal, tilde, level_p2 };

inline std::string to_string(OrderTag t) {
  switch (t) {
    case OrderTag::maximal: return "maximal";
    case OrderTag::tilde: return "tilde";
    case OrderTag::level_p2: return "p2";
  }
  return "?";
}

struct ClassSet {
  OrderTag tag = OrderTag::maximal;
  int sigma = 0;
  Lattice order;                     ///< common left order
  std::vector<Lattice> reps;
  std::vector<Int> heights;          ///< w_i = |O_r(a_i)^x| / 2
  std::vector<Lattice> right_orders;
  std::vector<std::size_t> parent;   ///< class of the next larger order containing it

  std::size_t size() const { return reps.size(); }

  /// Index of the class of a, or size() when absent.
  std::size_t find(const Lattice& a) const {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (equivalent(reps[i], a)) return i;
    return reps.size();
  }
};

namespace detail {

inline void fill_heights(ClassSet& cs) {
  cs.heights.assign(cs.reps.size(), 0);
  cs.right_orders.assign(cs.reps.size(), Lattice{});
  parallel_for(cs.reps.size(), [&](std::size_t i) {
    cs.right_orders[i] = side_order(cs.reps[i], Side::right);
    cs.heights[i] = unit_count(cs.right_orders[i]) / 2;
  });
}

/// Sublattices b with q a ⊆ b, [a : b] = q^2, O b ⊆ b and N(b) = q N(a).
inline std::vector<Lattice> q_neighbors(const Lattice& a, const Lattice& O, Int q) {
  auto ab = a.basis();
  const Rational target = lattice_norm(a) * Rational(q);
  std::vector<Lattice> out;
  // 2-dimensional subspaces of F_q^4 in reduced row echelon form
  for (std::size_t c1 = 0; c1 < 4; ++c1)
    for (std::size_t c2 = c1 + 1; c2 < 4; ++c2) {
      std::vector<std::size_t> free1, free2;
      for (std::size_t j = c1 + 1; j < 4; ++j)
        if (j != c2) free1.push_back(j);
      for (std::size_t j = c2 + 1; j < 4; ++j) free2.push_back(j);
      Int n1 = ipow(q, static_cast<unsigned>(free1.size()));
      Int n2 = ipow(q, static_cast<unsigned>(free2.size()));
      for (Int s1 = 0; s1 < n1; ++s1)
        for (Int s2 = 0; s2 < n2; ++s2) {
          std::array<Int, 4> v1{}, v2{};
          v1[c1] = 1;
          v2[c2] = 1;
          Int t = s1;
          for (auto j : free1) {
            v1[j] = t % q;
            t /= q;
          }
          t = s2;
          for (auto j : free2) {
            v2[j] = t % q;
            t /= q;
          }
          std::vector<QuatElement> g{combination(ab, v1), combination(ab, v2)};
          for (const auto& x : ab) g.push_back(x * Rational(q));
          Lattice L = Lattice::from_generators(a.algebra(), g);
          if (lattice_norm(L) != target) continue;
          if (!left_stable(O, L)) continue;
          out.push_back(L);
        }
    }
  if (out.size() != static_cast<std::size_t>(q + 1)) throw InvariantError("q-neighbor count != q + 1");
  return out;
}

}  // namespace detail

/// I(O) by breadth-first closure under 2-neighbors (3-neighbors never
/// needed since p is odd), validated against the Eichler mass (p-1)/24.
inline ClassSet maximal_class_set(const Tower& t) {
  ClassSet cs;
  cs.tag = OrderTag::maximal;
  cs.order = t.maximal.lattice;
  const Int q = 2;
  cs.reps.push_back(t.maximal.lattice);
  for (std::size_t head = 0; head < cs.reps.size(); ++head) {
    for (const auto& b : detail::q_neighbors(cs.reps[head], t.maximal.lattice, q)) {
      bool known = false;
      for (const auto& r : cs.reps)
        if (equivalent(r, b)) {
          known = true;
          break;
        }
      if (!known) cs.reps.push_back(b);
    }
  }
  detail::fill_heights(cs);
  Rational mass(0);
  for (Int w : cs.heights) mass += Rational(1, 2 * w);
  if (mass != Rational(t.p - 1, 24)) throw InvariantError("Eichler mass mismatch for the maximal class set");
  cs.parent.assign(cs.reps.size(), 0);
  return cs;
}

/// I(Õ): for each maximal class, walk the star orbit of the least element
/// of Psi(a) and register classes in order of first appearance.
inline ClassSet tilde_class_set(const Tower& t, const ClassSet& maximal) {
  ClassSet cs;
  cs.tag = OrderTag::tilde;
  cs.order = t.tilde.lattice;
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const Lattice& a = maximal.reps[i];
    auto psi = psi_down_maximal(a, t.tilde.lattice, t.p);
    QuatElement u = gh_generator(maximal.right_orders[i], t.p);
    std::vector<Lattice> orbit{psi.front()};
    for (Int n = 0; n <= t.p; ++n) orbit.push_back(star_action(orbit.back(), u, t.p));
    if (!(orbit.back() == orbit.front())) throw InvariantError("star orbit does not close after p + 1 steps");
    orbit.pop_back();
    std::set<Lattice> os(orbit.begin(), orbit.end());
    if (os != std::set<Lattice>(psi.begin(), psi.end()))
      throw InvariantError("star orbit differs from the hyperplane-filter output");
    const std::size_t first_new = cs.reps.size();
    for (const auto& b : orbit) {
      std::size_t found = cs.reps.size();
      for (std::size_t j = 0; j < cs.reps.size(); ++j)
        if (equivalent(cs.reps[j], b)) {
          found = j;
          break;
        }
      if (found == cs.reps.size()) {
        cs.reps.push_back(b);
        cs.parent.push_back(i);
      } else if (found < first_new) {
        throw InvariantError("Õ-classes under different maximal classes coincide");
      } else if (b < cs.reps[found]) {
        cs.reps[found] = b;
      }
    }
  }
  detail::fill_heights(cs);
  return cs;
}

/// I(O'): Psi^Õ_{O'} of every Õ-class, optionally verifying that all
/// p |I(Õ)| results are pairwise inequivalent.
inline ClassSet level_p2_class_set(const Tower& t, const ClassSet& tilde, const Order& oprime, int sigma,
                                   bool verify = true) {
  ClassSet cs;
  cs.tag = OrderTag::level_p2;
  cs.sigma = sigma;
  cs.order = oprime.lattice;
  Lattice m = m_ideal(oprime.lattice, t.tilde.lattice, t.p);
  std::vector<std::vector<Lattice>> blocks(tilde.size());
  parallel_for(tilde.size(), [&](std::size_t i) { blocks[i] = psi_down_p2(tilde.reps[i], oprime.lattice, m, t.p); });
  for (std::size_t i = 0; i < tilde.size(); ++i)
    for (auto& c : blocks[i]) {
      cs.reps.push_back(c);
      cs.parent.push_back(i);
    }
  if (verify) {
    const std::size_t n = cs.reps.size();
    std::vector<char> bad(n, 0);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < i; ++j)
        if (equivalent(cs.reps[j], cs.reps[i])) bad[i] = 1;
    });
    for (char b : bad)
      if (b) throw InvariantError("two level-p^2 subideals are equivalent");
  }
  detail::fill_heights(cs);
  return cs;
}

/// Psi matrix: column i lists the O'-classes below the Õ-class i.
inline IntMatrix psi_matrix(const ClassSet& tilde, const ClassSet& p2) {
  IntMatrix m(p2.size(), tilde.size(), 0);
  for (std::size_t r = 0; r < p2.size(); ++r) m(r, p2.parent[r]) += 1;
  return m;
}

}  // namespace quatlift
