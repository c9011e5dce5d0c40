#pragma once

// Small exact matrices: fixed-size integer vectors/matrices with Hermite
// normal form, and dynamic rational matrices with Gaussian elimination.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "quatlift/arith.hpp"

namespace quatlift {

template <std::size_t N>
using IntVec = std::array<Int, N>;

template <std::size_t N>
using IntMat = std::array<IntVec<N>, N>;

template <std::size_t N>
constexpr IntMat<N> identity_matrix() {
  IntMat<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = 1;
  return m;
}

/// Rank deficiency detected while building a lattice basis.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Lower-triangular Hermite normal form of the row span of `rows`.
///
/// Row r of the result has its last nonzero entry on the diagonal, the
/// diagonal is positive and every entry left of a pivot is reduced into
/// [0, pivot). Throws RankError when the rows do not span rank N.
template <std::size_t N>
IntMat<N> hnf_lower(const std::vector<IntVec<N>>& input) {
  // Elimination runs in 128-bit; only the reduced result must fit in 64 bits.
  using Row = std::array<Wide, N>;
  auto wmul = [](Wide a, Wide b) {
    Wide r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit overflow in HNF");
    return r;
  };
  std::vector<Row> rows;
  for (const auto& v : input) {
    Row r;
    for (std::size_t k = 0; k < N; ++k) r[k] = v[k];
    rows.push_back(r);
  }
  std::array<Row, N> h{};
  for (std::size_t step = 0; step < N; ++step) {
    const std::size_t c = N - 1 - step;
    // Euclid on column c among the remaining rows.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        if (best == rows.size() || wabs(rows[r][c]) < wabs(rows[best][c])) best = r;
      }
      if (best == rows.size()) throw RankError("generators do not span full rank");
      bool others = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == best || rows[r][c] == 0) continue;
        others = true;
        Wide q = rows[r][c] / rows[best][c];
        if ((rows[r][c] % rows[best][c] != 0) && ((rows[r][c] < 0) != (rows[best][c] < 0))) --q;
        for (std::size_t k = 0; k <= c; ++k) rows[r][k] -= wmul(q, rows[best][k]);
      }
      if (!others) {
        Row piv = rows[best];
        if (piv[c] < 0)
          for (auto& x : piv) x = -x;
        h[c] = piv;
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        break;
      }
    }
    std::erase_if(rows, [](const Row& v) {
      for (Wide x : v)
        if (x != 0) return false;
      return true;
    });
  }
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t cc = r; cc-- > 0;) {
      Wide q = h[r][cc] / h[cc][cc];
      if (h[r][cc] % h[cc][cc] != 0 && h[r][cc] < 0) --q;
      if (q == 0) continue;
      for (std::size_t k = 0; k <= cc; ++k) h[r][k] -= wmul(q, h[cc][k]);
    }
  }
  IntMat<N> out{};
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t k = 0; k < N; ++k) out[r][k] = checked::narrow(h[r][k]);
  return out;
}

/// Coordinates of v in the lower-triangular basis h, or false if v is not
/// in the integer row span.
template <std::size_t N>
bool solve_lower(const IntMat<N>& h, IntVec<N> v, IntVec<N>* coords = nullptr) {
  for (std::size_t step = 0; step < N; ++step) {
    const std::size_t c = N - 1 - step;
    if (v[c] % h[c][c] != 0) return false;
    Int q = v[c] / h[c][c];
    if (coords) (*coords)[c] = q;
    if (q != 0)
      for (std::size_t k = 0; k <= c; ++k) v[k] = checked::sub(v[k], checked::mul(q, h[c][k]));
  }
  return true;
}

template <std::size_t N>
Wide determinant(const IntMat<N>& m) {
  if constexpr (N == 1) {
    return m[0][0];
  } else {
    Wide det = 0;
    for (std::size_t col = 0; col < N; ++col) {
      if (m[0][col] == 0) continue;
      IntMat<N - 1> minor{};
      for (std::size_t r = 1; r < N; ++r) {
        std::size_t cc = 0;
        for (std::size_t c = 0; c < N; ++c)
          if (c != col) minor[r - 1][cc++] = m[r][c];
      }
      Wide term = Wide(m[0][col]) * determinant<N - 1>(minor);
      det += (col % 2 == 0) ? term : -term;
    }
    return det;
  }
}

/// Integer adjugate: adj(m) * m = det(m) * I.
template <std::size_t N>
IntMat<N> adjugate(const IntMat<N>& m) {
  IntMat<N> adj{};
  if constexpr (N == 1) {
    adj[0][0] = 1;
  } else {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        IntMat<N - 1> minor{};
        std::size_t rr = 0;
        for (std::size_t r = 0; r < N; ++r) {
          if (r == i) continue;
          std::size_t cc = 0;
          for (std::size_t c = 0; c < N; ++c)
            if (c != j) minor[rr][cc++] = m[r][c];
          ++rr;
        }
        Wide cof = determinant<N - 1>(minor);
        if ((i + j) % 2 == 1) cof = -cof;
        adj[j][i] = checked::narrow(cof);
      }
    }
  }
  return adj;
}

/// Dense row-major matrix with value semantics.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) = out(i, j) + aik * b(k, j);
      }
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] + b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] - b.data_[i];
    return a;
  }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.data_) x = s * x;
    return a;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(std::span<const T> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<T> out(rows_, T{});
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] = out[i] + (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rational>;

template <typename T>
RatMatrix to_rational(const Matrix<T>& m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(r, k), m(piv, k));
    Rational inv = Rational(1) / m(r, c);
    for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) -= f * m(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

/// Scale a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
inline std::vector<Int> primitive_integer(const std::vector<Rational>& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, x.den());
  std::vector<Int> out(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = checked::mul(v[i].num(), l / v[i].den());
    g = gcd(g, out[i]);
  }
  if (g == 0) return out;
  int sign = 0;
  for (Int x : out)
    if (x != 0) {
      sign = x > 0 ? 1 : -1;
      break;
    }
  for (auto& x : out) x = x / g * sign;
  return out;
}

/// Basis of the right nullspace {x : m x = 0}, each vector primitive integral.
inline std::vector<std::vector<Int>> nullspace(RatMatrix m) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Int>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free] = Rational(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(primitive_integer(v));
  }
  return basis;
}

/// Nullspace of an integer matrix by fraction-free elimination; every row
/// is kept primitive so entries stay small. Vectors are primitive integral.
inline std::vector<std::vector<Int>> integer_nullspace(const IntMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::vector<Wide>> m(rows, std::vector<Wide>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = a(i, j);
  auto make_primitive = [](std::vector<Wide>& v) {
    Wide g = 0;
    for (Wide x : v) g = wgcd(g, x);
    if (g > 1)
      for (auto& x : v) x /= g;
  };
  auto wmul = [](Wide x, Wide y) {
    Wide r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("128-bit overflow in integer elimination");
    return r;
  };
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (m[i][c] != 0 && (piv == rows || wabs(m[i][c]) < wabs(m[piv][c]))) piv = i;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Wide g = wgcd(m[r][c], m[i][c]);
      Wide fr = m[i][c] / g, fi = m[r][c] / g;
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = wmul(fi, m[i][j]) - wmul(fr, m[r][j]);
      make_primitive(m[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Int>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = Rational(1);
    for (std::size_t k = 0; k < pivots.size(); ++k)
      v[pivots[k]] = -Rational::from_wide(m[k][f], m[k][pivots[k]]);
    basis.push_back(primitive_integer(v));
  }
  return basis;
}

/// Inverse of a square rational matrix; throws if singular.
inline RatMatrix inverse(const RatMatrix& m) {
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Rational(1);
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("singular matrix");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Nullspace over F_p of a matrix given by integer entries; vectors have
/// entries in [0, p).
inline std::vector<std::vector<Int>> nullspace_mod(const IntMatrix& a, Int p) {
  IntMatrix m = a;
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = mod(m(i, j), p);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(m(r, k), m(piv, k));
    Int inv = inverse_mod(m(r, c), p);
    for (std::size_t k = 0; k < cols; ++k) m(r, k) = mod(m(r, k) * inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Int f = m(i, c);
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = mod(m(i, k) - f * m(r, k), p);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Int>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Int> v(cols, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = mod(-m(k, free), p);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace quatlift
