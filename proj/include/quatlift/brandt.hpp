#pragma once

// Brandt matrices of a class set: B_m[j][i] is the coefficient of [a_j]
// in t_m[a_i], computed from representation numbers of the normalized
// norm form on a_j^{-1} a_i.

#include <map>
#include <string>
#include <vector>

#include "quatlift/ideal.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/parallel.hpp"

namespace quatlift {

/// Raised when the prime-power recursion is asked for a prime dividing disc.
class UnsupportedIndex : public Error {
 public:
  using Error::Error;
};

/// B_0 .. B_max (B_0 is left empty; use t0_apply).
struct BrandtFamily {
  std::vector<Int> heights;
  Int disc = 0;
  std::vector<IntMatrix> B;

  std::size_t dim() const { return heights.size(); }
  Int max_m() const { return static_cast<Int>(B.size()) - 1; }
  const IntMatrix& operator[](Int m) const { return B.at(static_cast<std::size_t>(m)); }
};

/// Direct computation of B_1 .. B_max_m by lattice enumeration.
inline BrandtFamily brandt_matrices(const ClassSet& cs, Int disc, Int max_m) {
  const std::size_t n = cs.size();
  BrandtFamily fam;
  fam.heights = cs.heights;
  fam.disc = disc;
  fam.B.assign(static_cast<std::size_t>(max_m + 1), IntMatrix(n, n, 0));
  fam.B[0] = IntMatrix();
  std::vector<Lattice> inv(n);
  parallel_for(n, [&](std::size_t j) { inv[j] = inverse_lattice(cs.reps[j]); });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) pairs.emplace_back(j, i);
  std::vector<std::vector<Int>> counts(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    auto [j, i] = pairs[k];
    Lattice c = product(inv[j], cs.reps[i]);
    Rational normalizer = lattice_norm(cs.reps[i]) / lattice_norm(cs.reps[j]);
    if (lattice_norm(c) != normalizer) throw InvariantError("N(a_j^-1 a_i) != N(a_i)/N(a_j)");
    counts[k] = count_by_value(norm_form(c, normalizer), max_m);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [j, i] = pairs[k];
    for (Int m = 1; m <= max_m; ++m) {
      Int r = counts[k][static_cast<std::size_t>(m)];
      if (r % (2 * cs.heights[j]) != 0 || r % (2 * cs.heights[i]) != 0)
        throw InvariantError("non-integral Brandt matrix entry");
      fam.B[static_cast<std::size_t>(m)](j, i) = r / (2 * cs.heights[j]);
      fam.B[static_cast<std::size_t>(m)](i, j) = r / (2 * cs.heights[i]);
    }
  }
  return fam;
}

/// <u, v> = sum u_i v_i w_i.
template <typename T>
T height_pairing(const std::vector<Int>& heights, const std::vector<T>& u, const std::vector<T>& v) {
  if (u.size() != heights.size() || v.size() != heights.size()) throw std::invalid_argument("dimension mismatch");
  T s{};
  for (std::size_t i = 0; i < u.size(); ++i) s = s + u[i] * v[i] * T(heights[i]);
  return s;
}

/// e_0 = sum [a_i] / w_i, the vector with <e_0, [a]> = 1.
inline std::vector<Rational> eisenstein_vector(const std::vector<Int>& heights) {
  std::vector<Rational> e;
  for (Int w : heights) e.emplace_back(1, w);
  return e;
}

template <typename T>
T degree(const std::vector<T>& v) {
  T s{};
  for (const auto& x : v) s = s + x;
  return s;
}

/// t_0 v = (deg v / 2) e_0.
inline std::vector<Rational> t0_apply(const std::vector<Int>& heights, const std::vector<Rational>& v) {
  Rational d = degree(v) / Rational(2);
  auto e = eisenstein_vector(heights);
  for (auto& x : e) x *= d;
  return e;
}

/// w_j B[j][i] == w_i B[i][j] for all i, j.
inline bool is_self_adjoint(const IntMatrix& b, const std::vector<Int>& heights) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (Wide(heights[j]) * b(j, i) != Wide(heights[i]) * b(i, j)) return false;
  return true;
}

inline std::vector<Int> column_sums(const IntMatrix& b) {
  std::vector<Int> s(b.cols(), 0);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) s[j] += b(i, j);
  return s;
}

/// Hecke algebra generated by the prime-index matrices of a family:
/// t_{mm'} = t_m t_{m'} for coprime indices and
/// t_{q^{k+2}} = t_{q^{k+1}} t_q - q t_{q^k}.
class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(const BrandtFamily& fam) : fam_(fam) {}

  IntMatrix matrix(Int m) {
    if (m < 1) throw std::invalid_argument("Hecke index must be >= 1 (use t0_apply for t_0)");
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    IntMatrix out = IntMatrix::identity(fam_.dim());
    for (auto [q, e] : factor(m)) out = out * prime_power(q, e);
    cache_.emplace(m, out);
    return out;
  }

 private:
  IntMatrix prime_power(Int q, int e) {
    if (fam_.disc % q == 0)
      throw UnsupportedIndex("recursion refused for prime " + std::to_string(q) + " dividing disc");
    if (q > fam_.max_m()) throw std::out_of_range("Brandt family does not contain B_" + std::to_string(q));
    IntMatrix prev = IntMatrix::identity(fam_.dim());
    IntMatrix cur = fam_[q];
    for (int k = 1; k < e; ++k) {
      IntMatrix next = cur * fam_[q] - q * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }

  const BrandtFamily& fam_;
  std::map<Int, IntMatrix> cache_;
};

}  // namespace quatlift
