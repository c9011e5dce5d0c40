#pragma once

// Rank-4 lattices in a quaternion algebra, kept in a canonical Hermite
// normal form so that equal Z-spans compare equal.

#include <array>
#include <compare>
#include <span>
#include <vector>

#include "quatlift/arith.hpp"
#include "quatlift/matrix.hpp"
#include "quatlift/quaternion.hpp"

namespace quatlift {

/// L = (1/den) * rowspan(hnf), hnf lower-triangular HNF and
/// gcd(den, entries of hnf) = 1.
class Lattice {
 public:
  Lattice() = default;

  static Lattice from_generators(const QuaternionAlgebra& alg, std::span<const QuatElement> gens) {
    Int d = 1;
    for (const auto& g : gens) d = lcm(d, g.den());
    std::vector<IntVec<4>> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) {
      if (!(g.algebra() == alg)) throw std::invalid_argument("generator from a different algebra");
      Int f = d / g.den();
      IntVec<4> v{};
      for (std::size_t i = 0; i < 4; ++i) v[i] = checked::mul(g.coords()[i], f);
      rows.push_back(v);
    }
    return from_rows(alg, std::move(rows), d);
  }

  static Lattice from_generators(const QuaternionAlgebra& alg, std::initializer_list<QuatElement> gens) {
    return from_generators(alg, std::span<const QuatElement>(gens.begin(), gens.size()));
  }

  /// Lattice spanned by integer rows divided by den.
  static Lattice from_rows(const QuaternionAlgebra& alg, std::vector<IntVec<4>> rows, Int den) {
    Lattice L;
    L.alg_ = alg;
    L.hnf_ = hnf_lower<4>(std::move(rows));
    Int g = den;
    for (const auto& r : L.hnf_)
      for (Int x : r) g = gcd(g, x);
    L.den_ = den / g;
    for (auto& r : L.hnf_)
      for (auto& x : r) x /= g;
    return L;
  }

  const QuaternionAlgebra& algebra() const { return alg_; }
  Int den() const { return den_; }
  const IntMat<4>& hnf() const { return hnf_; }

  QuatElement basis(std::size_t i) const { return QuatElement(alg_, hnf_[i], den_); }
  std::array<QuatElement, 4> basis() const { return {basis(0), basis(1), basis(2), basis(3)}; }

  Rational entry(std::size_t r, std::size_t c) const { return Rational(hnf_[r][c], den_); }

  bool contains(const QuatElement& x) const {
    if (!(x.algebra() == alg_)) return false;
    if (x.den() != 1 && den_ % x.den() != 0) {
      // x * den_ must be integral
      for (Int c : x.coords())
        if (checked::mul(c, den_) % x.den() != 0) return false;
    }
    IntVec<4> v{};
    for (std::size_t i = 0; i < 4; ++i) v[i] = checked::mul(x.coords()[i], den_) / x.den();
    return solve_lower<4>(hnf_, v);
  }

  /// Coordinates of x in this basis, as rationals (x need not lie in L).
  std::array<Rational, 4> coordinates(const QuatElement& x) const {
    std::array<Rational, 4> v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = x.coord(i) * Rational(den_);
    std::array<Rational, 4> out;
    for (std::size_t step = 0; step < 4; ++step) {
      std::size_t c = 3 - step;
      out[c] = v[c] / Rational(hnf_[c][c]);
      for (std::size_t k = 0; k <= c; ++k) v[k] -= out[c] * Rational(hnf_[c][k]);
    }
    return out;
  }

  /// True when other is a sublattice of this one.
  bool contains(const Lattice& other) const {
    for (std::size_t i = 0; i < 4; ++i)
      if (!contains(other.basis(i))) return false;
    return true;
  }

  /// Covolume relative to Z^4 in (1, i, j, k) coordinates.
  Rational volume() const {
    Wide d = 1;
    for (std::size_t i = 0; i < 4; ++i) d *= hnf_[i][i];
    Wide den4 = Wide(den_) * den_ * den_ * den_;
    return Rational::from_wide(d, den4);
  }

  /// [this : sub] for a sublattice.
  Int index_of(const Lattice& sub) const {
    if (!contains(sub)) throw InvariantError("index_of: not a sublattice");
    return (sub.volume() / volume()).to_integer();
  }

  friend bool operator==(const Lattice& x, const Lattice& y) {
    return x.alg_ == y.alg_ && x.den_ == y.den_ && x.hnf_ == y.hnf_;
  }

  /// Lexicographic order on the rational basis matrix, row-major.
  friend std::strong_ordering operator<=>(const Lattice& x, const Lattice& y) {
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        auto cmp = x.entry(r, c) <=> y.entry(r, c);
        if (cmp != 0) return cmp;
      }
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Lattice& L) {
    os << "<";
    for (std::size_t i = 0; i < 4; ++i) os << (i ? ", " : "") << L.basis(i);
    return os << ">";
  }

 private:
  QuaternionAlgebra alg_{};
  Int den_ = 1;
  IntMat<4> hnf_ = identity_matrix<4>();
};

inline Lattice sum(const Lattice& x, const Lattice& y) {
  std::vector<QuatElement> g;
  for (std::size_t i = 0; i < 4; ++i) {
    g.push_back(x.basis(i));
    g.push_back(y.basis(i));
  }
  return Lattice::from_generators(x.algebra(), g);
}

/// Lattice spanned by L and extra elements.
inline Lattice extend(const Lattice& L, std::span<const QuatElement> extra) {
  std::vector<QuatElement> g(extra.begin(), extra.end());
  for (std::size_t i = 0; i < 4; ++i) g.push_back(L.basis(i));
  return Lattice::from_generators(L.algebra(), g);
}

/// Z-span of the 16 pairwise products.
inline Lattice product(const Lattice& x, const Lattice& y) {
  std::vector<QuatElement> g;
  g.reserve(16);
  auto bx = x.basis();
  auto by = y.basis();
  for (const auto& u : bx)
    for (const auto& v : by) g.push_back(u * v);
  return Lattice::from_generators(x.algebra(), g);
}

inline Lattice scaled(const Lattice& L, const Rational& r) {
  std::vector<QuatElement> g;
  for (const auto& b : L.basis()) g.push_back(b * r);
  return Lattice::from_generators(L.algebra(), g);
}

inline Lattice left_multiply(const QuatElement& x, const Lattice& L) {
  std::vector<QuatElement> g;
  for (const auto& b : L.basis()) g.push_back(x * b);
  return Lattice::from_generators(L.algebra(), g);
}

inline Lattice right_multiply(const Lattice& L, const QuatElement& x) {
  std::vector<QuatElement> g;
  for (const auto& b : L.basis()) g.push_back(b * x);
  return Lattice::from_generators(L.algebra(), g);
}

inline Lattice conjugate(const Lattice& L) {
  std::vector<QuatElement> g;
  for (const auto& b : L.basis()) g.push_back(b.conj());
  return Lattice::from_generators(L.algebra(), g);
}

/// Dual lattice with respect to the coordinate dot product on Q^4.
inline Lattice coordinate_dual(const Lattice& L) {
  const IntMat<4> adj = adjugate<4>(L.hnf());
  const Int det = checked::narrow(determinant<4>(L.hnf()));
  std::vector<IntVec<4>> rows;
  for (std::size_t k = 0; k < 4; ++k) {
    IntVec<4> v{};
    for (std::size_t j = 0; j < 4; ++j) v[j] = checked::mul(L.den(), adj[j][k]);
    rows.push_back(v);
  }
  return Lattice::from_rows(L.algebra(), std::move(rows), det);
}

inline Lattice intersection(const Lattice& x, const Lattice& y) {
  return coordinate_dual(sum(coordinate_dual(x), coordinate_dual(y)));
}

/// {z : A z ⊆ B}.
inline Lattice right_colon(const Lattice& A, const Lattice& B) {
  Lattice out = left_multiply(A.basis(0).inverse(), B);
  for (std::size_t i = 1; i < 4; ++i) out = intersection(out, left_multiply(A.basis(i).inverse(), B));
  return out;
}

/// {z : z A ⊆ B}.
inline Lattice left_colon(const Lattice& A, const Lattice& B) {
  Lattice out = right_multiply(B, A.basis(0).inverse());
  for (std::size_t i = 1; i < 4; ++i) out = intersection(out, right_multiply(B, A.basis(i).inverse()));
  return out;
}

enum class Side { left, right };

/// Left order {x : x L ⊆ L} or right order {x : L x ⊆ L}.
inline Lattice side_order(const Lattice& L, Side side) {
  return side == Side::right ? right_colon(L, L) : left_colon(L, L);
}

/// Matrix of the bilinear form tr(x ybar) on the basis.
inline std::array<std::array<Rational, 4>, 4> trace_gram(const Lattice& L) {
  auto b = L.basis();
  std::array<std::array<Rational, 4>, 4> g;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g[i][j] = (b[i] * b[j].conj()).trace();
  return g;
}

/// gcd{N(x) : x in L}, from diagonal norms and polarized cross terms.
inline Rational lattice_norm(const Lattice& L) {
  auto b = L.basis();
  Rational g(0);
  for (std::size_t i = 0; i < 4; ++i) {
    g = gcd(g, b[i].norm());
    for (std::size_t j = i + 1; j < 4; ++j) g = gcd(g, (b[i] * b[j].conj()).trace());
  }
  return g;
}

/// Integer matrix tr(b_i conj(b_j)) / normalizer; the associated quadratic
/// form x -> x^T H x / 2 is N(x) / normalizer.
inline IntMat<4> normalized_hessian(const Lattice& L, const Rational& normalizer) {
  auto g = trace_gram(L);
  IntMat<4> h{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Rational v = g[i][j] / normalizer;
      if (!v.is_integer()) throw InvariantError("normalized norm form is not integral");
      h[i][j] = v.num();
    }
  return h;
}

struct GramDisc {
  IntMat<4> hessian;  ///< matrix of the bilinear form of N_a = N / N(a)
  Int determinant;    ///< det(hessian)
  Int disc;           ///< positive square root of the determinant
};

/// Gram matrix of the normalized norm form and the discriminant of L.
inline GramDisc gram_disc(const Lattice& L) {
  GramDisc out;
  out.hessian = normalized_hessian(L, lattice_norm(L));
  out.determinant = checked::narrow(determinant<4>(out.hessian));
  out.disc = exact_sqrt(out.determinant);
  if (out.disc <= 0) throw InvariantError("norm form determinant is not a positive square");
  return out;
}

/// gcd of Delta over L, from diagonal values and polarized cross terms.
inline Rational delta_gcd(const Lattice& L) {
  auto b = L.basis();
  Rational g(0);
  for (std::size_t i = 0; i < 4; ++i) {
    g = gcd(g, b[i].delta());
    for (std::size_t j = i + 1; j < 4; ++j)
      g = gcd(g, (b[i] + b[j]).delta() - b[i].delta() - b[j].delta());
  }
  return g;
}

inline bool is_integral(const QuatElement& x) { return x.trace().is_integer() && x.norm().is_integer(); }

/// Contains 1, closed under multiplication, all elements integral.
inline bool is_order(const Lattice& L) {
  const auto& alg = L.algebra();
  if (!L.contains(QuatElement(alg, {1, 0, 0, 0}))) return false;
  auto b = L.basis();
  for (const auto& x : b)
    if (!is_integral(x)) return false;
  for (const auto& x : b)
    for (const auto& y : b)
      if (!L.contains(x * y)) return false;
  return true;
}

/// Dual O# = {x : tr(x O) ⊆ Z} via inversion of the trace Gram matrix.
inline Lattice trace_dual(const Lattice& L) {
  auto g = trace_gram(L);
  RatMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = g[i][j];
  RatMatrix inv = inverse(m);
  auto b = L.basis();
  std::vector<QuatElement> gens;
  for (std::size_t k = 0; k < 4; ++k) {
    QuatElement x = QuatElement::scalar(L.algebra(), 0);
    for (std::size_t j = 0; j < 4; ++j) x = x + inv(k, j) * b[j].conj();
    gens.push_back(x);
  }
  return Lattice::from_generators(L.algebra(), gens);
}

/// An order together with its cached invariants.
struct Order {
  Lattice lattice;
  Int disc = 0;   ///< reduced discriminant
  Int level = 0;  ///< n(O) = N(O#)^{-1}
  Int omega = 0;  ///< gcd of Delta over O
  Int theta_level = 0;  ///< n1(O) = 4 n(O) / omega

  friend bool operator==(const Order& x, const Order& y) { return x.lattice == y.lattice; }
};

/// Validates the order axioms and computes disc, n, omega, n1.
inline Order make_order(const Lattice& L) {
  if (!is_order(L)) throw InvariantError("lattice is not an order");
  Order o;
  o.lattice = L;
  o.disc = gram_disc(L).disc;
  Rational n = Rational(1) / lattice_norm(trace_dual(L));
  if (!n.is_integer()) throw InvariantError("level N(O#)^-1 is not an integer");
  o.level = n.num();
  Rational w = delta_gcd(L);
  if (!w.is_integer()) throw InvariantError("omega is not an integer");
  o.omega = w.num();
  if ((4 * o.level) % o.omega != 0) throw InvariantError("omega does not divide 4 n(O)");
  o.theta_level = 4 * o.level / o.omega;
  return o;
}

inline Lattice unit_lattice(const QuaternionAlgebra& alg) {
  return Lattice::from_rows(alg, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 1);
}

}  // namespace quatlift
