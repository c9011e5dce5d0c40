#pragma once

// Bounded enumeration of lattice vectors of a positive definite integral
// quadratic form Q(x) = x^T H x / 2 (H integral with even diagonal).
//
// The form is LLL-reduced first; the search itself uses a floating
// Cholesky decomposition with a small slack on every bound, and each
// leaf is evaluated exactly in integers.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

#include "quatlift/arith.hpp"
#include "quatlift/matrix.hpp"

namespace quatlift {

template <std::size_t N>
struct QuadraticForm {
  IntMat<N> hessian{};  ///< Q(x) = x^T hessian x / 2

  Int value(const IntVec<N>& x) const {
    Wide s = 0;
    for (std::size_t i = 0; i < N; ++i) {
      s += Wide(hessian[i][i] / 2) * x[i] * x[i];
      for (std::size_t j = i + 1; j < N; ++j) s += Wide(hessian[i][j]) * x[i] * x[j];
    }
    return checked::narrow(s);
  }
};

struct EnumerationLimits {
  std::uint64_t max_candidates = 4'000'000'000ULL;
};

namespace detail {

/// LLL on an integral Gram matrix; returns U (columns = new basis in old
/// coordinates) with the reduced Gram U^T H U written back into h.
template <std::size_t N>
IntMat<N> lll_reduce(IntMat<N>& h) {
  IntMat<N> u = identity_matrix<N>();
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < N; ++r) std::swap(u[r][a], u[r][b]);
    for (std::size_t r = 0; r < N; ++r) std::swap(h[r][a], h[r][b]);
    std::swap(h[a], h[b]);
  };
  // b_k -= q b_j
  auto reduce = [&](std::size_t k, std::size_t j, Int q) {
    for (std::size_t r = 0; r < N; ++r) u[r][k] = checked::sub(u[r][k], checked::mul(q, u[r][j]));
    const Int hjj = h[j][j];
    const Int hkj = h[k][j];
    for (std::size_t r = 0; r < N; ++r) {
      if (r == k) continue;
      h[r][k] = checked::sub(h[r][k], checked::mul(q, h[r][j]));
      h[k][r] = h[r][k];
    }
    // new h_kk = h_kk - 2 q h_kj + q^2 h_jj
    h[k][k] = checked::add(checked::sub(h[k][k], checked::mul(2 * q, hkj)), checked::mul(checked::mul(q, q), hjj));
  };
  auto gram_schmidt = [&](std::array<std::array<double, N>, N>& mu, std::array<double, N>& bstar) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = static_cast<double>(h[i][j]);
        for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
        mu[i][j] = s / bstar[j];
      }
      double s = static_cast<double>(h[i][i]);
      for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
      bstar[i] = s;
    }
  };
  std::array<std::array<double, N>, N> mu{};
  std::array<double, N> bstar{};
  std::size_t k = 1;
  int guard = 0;
  while (k < N) {
    if (++guard > 100000) throw InvariantError("LLL did not terminate");
    gram_schmidt(mu, bstar);
    for (std::size_t jj = k; jj-- > 0;) {
      double m = static_cast<double>(h[k][jj]);
      for (std::size_t t = 0; t < jj; ++t) m -= mu[jj][t] * mu[k][t] * bstar[t];
      m /= bstar[jj];
      Int q = static_cast<Int>(std::llround(m));
      if (q != 0) {
        reduce(k, jj, q);
        gram_schmidt(mu, bstar);
      }
    }
    if (bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
      swap_cols(k, k - 1);
      k = std::max<std::size_t>(k - 1, 1);
    } else {
      ++k;
    }
  }
  return u;
}

}  // namespace detail

/// Enumerates every vector with Q(x) <= bound. The visitor receives
/// (x, Q(x)) in the original coordinates, or only Q(x) when it accepts a
/// single Int, and returns false to stop early. Returns false iff stopped.
template <std::size_t N, typename Visitor>
bool enumerate_vectors(const QuadraticForm<N>& form, Int bound, Visitor&& visit,
                       const EnumerationLimits& limits = {}) {
  if (bound < 0) return true;
  for (std::size_t i = 0; i < N; ++i)
    if (form.hessian[i][i] <= 0 || form.hessian[i][i] % 2 != 0)
      throw std::invalid_argument("form must have positive even diagonal");
  IntMat<N> h = form.hessian;
  const IntMat<N> u = detail::lll_reduce<N>(h);

  // Cholesky of Q = H/2 in the reduced basis: Q(y) = sum q_ii (y_i + sum_{j>i} q_ij y_j)^2.
  std::array<std::array<long double, N>, N> q{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) q[i][j] = static_cast<long double>(h[i][j]) / 2;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < N; ++k)
      for (std::size_t l = k; l < N; ++l) q[k][l] -= q[k][i] * q[i][l];
    if (q[i][i] <= 0) throw std::invalid_argument("form is not positive definite");
  }

  const long double slack = 1e-9L * (static_cast<long double>(bound) + 1) + 1e-9L;
  std::uint64_t candidates = 0;
  IntVec<N> y{};
  bool stopped = false;

  std::function<void(std::size_t, long double)> rec = [&](std::size_t i, long double rem) {
    long double center = 0;
    for (std::size_t j = i + 1; j < N; ++j) center -= q[i][j] * static_cast<long double>(y[j]);
    long double r = std::sqrt(std::max<long double>(rem + slack, 0) / q[i][i]);
    Int lo = static_cast<Int>(std::ceil(center - r - 1e-9L));
    Int hi = static_cast<Int>(std::floor(center + r + 1e-9L));
    if (i == 0) {
      // Q = h00/2 y0^2 + y0 * lin + rest, all exact
      Wide lin = 0, rest = 0;
      for (std::size_t a = 1; a < N; ++a) {
        lin += Wide(h[0][a]) * y[a];
        rest += Wide(h[a][a] / 2) * y[a] * y[a];
        for (std::size_t b = a + 1; b < N; ++b) rest += Wide(h[a][b]) * y[a] * y[b];
      }
      const Wide half = h[0][0] / 2;
      for (Int t = lo; t <= hi; ++t) {
        if (++candidates > limits.max_candidates) throw ResourceError("enumeration candidate budget exceeded");
        Wide v = half * t * t + lin * t + rest;
        if (v > bound) continue;
        if constexpr (std::is_invocable_v<Visitor&, Int>) {
          if (!visit(static_cast<Int>(v))) {
            stopped = true;
            return;
          }
        } else {
          y[0] = t;
          IntVec<N> x{};
          for (std::size_t rr = 0; rr < N; ++rr) {
            Wide s = 0;
            for (std::size_t cc = 0; cc < N; ++cc) s += Wide(u[rr][cc]) * y[cc];
            x[rr] = checked::narrow(s);
          }
          if (!visit(static_cast<const IntVec<N>&>(x), static_cast<Int>(v))) {
            stopped = true;
            return;
          }
        }
      }
      return;
    }
    for (Int t = lo; t <= hi && !stopped; ++t) {
      y[i] = t;
      long double d = static_cast<long double>(t) - center;
      long double nrem = rem - q[i][i] * d * d;
      if (nrem < -slack) continue;
      rec(i - 1, nrem);
    }
    y[i] = 0;
  };
  rec(N - 1, static_cast<long double>(bound));
  return !stopped;
}

/// r_0..r_bound: number of vectors with Q(x) = m.
template <std::size_t N>
std::vector<Int> count_by_value(const QuadraticForm<N>& form, Int bound, const EnumerationLimits& limits = {}) {
  if (bound < 0) return {};
  std::vector<Int> r(static_cast<std::size_t>(bound + 1), 0);
  enumerate_vectors<N>(
      form, bound,
      [&](Int v) {
        ++r[static_cast<std::size_t>(v)];
        return true;
      },
      limits);
  return r;
}

/// True when Q represents the value m.
template <std::size_t N>
bool represents(const QuadraticForm<N>& form, Int m, const EnumerationLimits& limits = {}) {
  bool found = false;
  enumerate_vectors<N>(
      form, m,
      [&](Int v) {
        if (v == m) {
          found = true;
          return false;
        }
        return true;
      },
      limits);
  return found;
}

}  // namespace quatlift
