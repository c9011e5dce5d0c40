#pragma once

// Hecke eigencomponents of a class module, the vector e_{f,O'} cutting out
// the lift of a component, and Fourier coefficients read off Brandt rows.
//
// The decomposition works with S_q = W^{1/2} B_q W^{-1/2}, W = diag(heights),
// which is symmetric because B_q is self-adjoint for the height pairing.
// Joint eigenspaces are found by refining an orthonormal basis one prime at
// a time. Integral eigenvalue systems are then recomputed exactly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quatlift/brandt.hpp"
#include "quatlift/enumerate.hpp"
#include "quatlift/ideal.hpp"
#include "quatlift/matrix.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/parallel.hpp"
#include "quatlift/theta.hpp"

namespace quatlift {

class PrecisionError : public Error {
 public:
  using Error::Error;
};

enum class ComponentKind { eisenstein, twisted_eisenstein, old, cuspidal };

inline std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::eisenstein: return "eisenstein";
    case ComponentKind::twisted_eisenstein: return "twisted_eisenstein";
    case ComponentKind::old: return "old";
    case ComponentKind::cuspidal: return "cuspidal";
  }
  return "?";
}

struct IsotypicComponent {
  std::vector<Int> primes;
  std::vector<double> eigenvalues;
  bool exact = false;
  std::vector<Int> exact_eigenvalues;         ///< filled when exact
  std::vector<std::vector<Int>> basis;        ///< primitive integral, exact path only
  std::vector<std::vector<double>> float_basis;
  Eigen::MatrixXd unitary;                    ///< orthonormal columns in S-coordinates
  ComponentKind kind = ComponentKind::cuspidal;
  bool quadratic_twist = false;  ///< eigenvalues (q|p) a_q(g), g of level p

  std::size_t dim() const { return float_basis.size(); }

  double eigenvalue(Int q) const {
    for (std::size_t k = 0; k < primes.size(); ++k)
      if (primes[k] == q) return eigenvalues[k];
    throw std::out_of_range("no eigenvalue recorded for q = " + std::to_string(q));
  }
};

struct DecomposeOptions {
  double tol = 1e-10;
  /// eigenvalue systems of the cusp forms of level p (from M(O)); used to tag old components
  std::vector<std::vector<double>> level_p_systems;
  Int p = 0;
};

/// Default Hecke primes: q <= bound, q coprime to disc.
inline std::vector<Int> hecke_primes(Int disc, Int bound) {
  std::vector<Int> out;
  for (Int q : primes_up_to(bound))
    if (disc % q != 0) out.push_back(q);
  return out;
}

namespace detail {

inline Eigen::MatrixXd symmetrized(const IntMatrix& b, const std::vector<Int>& w) {
  const auto n = static_cast<Eigen::Index>(b.rows());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      s(i, j) = std::sqrt(double(w[i])) * double(b(i, j)) / std::sqrt(double(w[j]));
  return 0.5 * (s + s.transpose());
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

inline bool same_system(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!near(a[k], b[k], tol)) return false;
  return true;
}

}  // namespace detail

/// Simultaneous eigenspaces of {B_q : q in primes}.
inline std::vector<IsotypicComponent> isotypic_decompose(const BrandtFamily& fam, const std::vector<Int>& primes,
                                                         const DecomposeOptions& opt = {}) {
  if (primes.empty()) throw std::invalid_argument("need at least one Hecke prime");
  const std::size_t n = fam.dim();
  const auto& w = fam.heights;
  for (Int q : primes) {
    if (fam.disc % q == 0) throw std::invalid_argument("Hecke prime divides disc");
    if (q > fam.max_m()) throw std::out_of_range("Brandt family too short for q = " + std::to_string(q));
  }
  for (std::size_t a = 0; a < primes.size(); ++a)
    for (std::size_t b = a + 1; b < primes.size(); ++b)
      if (fam[primes[a]] * fam[primes[b]] != fam[primes[b]] * fam[primes[a]])
        throw InvariantError("Brandt matrices do not commute");

  std::vector<Eigen::MatrixXd> S;
  for (Int q : primes) S.push_back(detail::symmetrized(fam[q], w));

  // Refine by one operator at a time.
  std::vector<Eigen::MatrixXd> spaces{Eigen::MatrixXd::Identity(Eigen::Index(n), Eigen::Index(n))};
  const double cluster_tol = 1e-6;
  for (const auto& s : S) {
    std::vector<Eigen::MatrixXd> next;
    for (const auto& Q : spaces) {
      Eigen::MatrixXd m = Q.transpose() * s * Q;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
      const auto& ev = es.eigenvalues();
      Eigen::Index start = 0;
      for (Eigen::Index k = 1; k <= ev.size(); ++k) {
        if (k == ev.size() || !detail::near(ev(k), ev(k - 1), cluster_tol)) {
          next.push_back(Q * es.eigenvectors().middleCols(start, k - start));
          start = k;
        }
      }
    }
    spaces = std::move(next);
  }

  std::vector<IsotypicComponent> out;
  for (const auto& U : spaces) {
    IsotypicComponent c;
    c.primes = primes;
    c.unitary = U;
    for (std::size_t k = 0; k < S.size(); ++k) {
      Eigen::MatrixXd m = U.transpose() * S[k] * U;
      double lambda = m.trace() / double(U.cols());
      double scale = std::max(1.0, S[k].norm());
      if ((S[k] * U - lambda * U).norm() > opt.tol * scale * 1e3)
        throw InvariantError("joint eigenspace residual too large at q = " + std::to_string(primes[k]));
      c.eigenvalues.push_back(lambda);
    }
    bool integral = std::all_of(c.eigenvalues.begin(), c.eigenvalues.end(),
                                [&](double x) { return std::abs(x - std::round(x)) <= opt.tol * std::max(1.0, std::abs(x)); });
    if (integral) {
      IntMatrix stacked(primes.size() * n, n);
      for (std::size_t k = 0; k < primes.size(); ++k) {
        Int lambda = static_cast<Int>(std::llround(c.eigenvalues[k]));
        c.exact_eigenvalues.push_back(lambda);
        const IntMatrix& b = fam[primes[k]];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) stacked(k * n + i, j) = b(i, j) - (i == j ? lambda : 0);
      }
      c.basis = integer_nullspace(stacked);
      if (c.basis.size() != std::size_t(U.cols()))
        throw InvariantError("exact eigenspace dimension differs from the numerical one");
      c.exact = true;
      for (auto& x : c.eigenvalues) x = std::round(x);
      for (const auto& v : c.basis) c.float_basis.emplace_back(v.begin(), v.end());
    } else {
      for (Eigen::Index col = 0; col < U.cols(); ++col) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = U(Eigen::Index(i), col) / std::sqrt(double(w[i]));
        c.float_basis.push_back(v);
      }
    }

    bool eis = true, twisted = opt.p != 0, old = false, qtwist = false;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      double q1 = double(primes[k] + 1);
      eis = eis && detail::near(c.eigenvalues[k], q1, 1e-8);
      if (opt.p != 0) twisted = twisted && detail::near(c.eigenvalues[k], legendre(primes[k], opt.p) * q1, 1e-8);
    }
    for (const auto& sys : opt.level_p_systems) {
      if (detail::same_system(sys, c.eigenvalues, 1e-8)) old = true;
      std::vector<double> tw(sys.size());
      for (std::size_t k = 0; k < sys.size(); ++k) tw[k] = legendre(primes[k], opt.p) * sys[k];
      if (detail::same_system(tw, c.eigenvalues, 1e-8)) qtwist = true;
    }
    c.kind = eis ? ComponentKind::eisenstein
             : twisted ? ComponentKind::twisted_eisenstein
             : old ? ComponentKind::old
                   : ComponentKind::cuspidal;
    c.quadratic_twist = c.kind == ComponentKind::cuspidal && qtwist;
    out.push_back(std::move(c));
  }

  std::sort(out.begin(), out.end(), [](const IsotypicComponent& a, const IsotypicComponent& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    for (std::size_t k = 0; k < a.eigenvalues.size(); ++k)
      if (!detail::near(a.eigenvalues[k], b.eigenvalues[k], 1e-8)) return a.eigenvalues[k] > b.eigenvalues[k];
    return false;
  });
  return out;
}

/// max |sum_c P_c - I| over the orthogonal projectors of the components.
inline double reconstruction_error(const std::vector<IsotypicComponent>& comps) {
  if (comps.empty()) return 0.0;
  const auto n = comps.front().unitary.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : comps) sum += c.unitary * c.unitary.transpose();
  return (sum - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// Eigenvalue systems of the cuspidal components of the maximal-order module.
inline std::vector<std::vector<double>> cusp_systems(const std::vector<IsotypicComponent>& comps) {
  std::vector<std::vector<double>> out;
  for (const auto& c : comps)
    if (c.kind != ComponentKind::eisenstein) out.push_back(c.eigenvalues);
  return out;
}

/// Representation numbers r_m(a_{i0}^{-1} a_i) for every class i, m <= n_max.
inline std::vector<std::vector<Int>> brandt_row_counts(const ClassSet& cs, std::size_t i0, Int n_max) {
  std::vector<std::vector<Int>> counts(cs.size());
  Lattice inv = inverse_lattice(cs.reps.at(i0));
  parallel_for(cs.size(), [&](std::size_t i) {
    Lattice c = product(inv, cs.reps[i]);
    Rational normalizer = lattice_norm(cs.reps[i]) / lattice_norm(cs.reps[i0]);
    counts[i] = count_by_value(norm_form(c, normalizer), n_max);
  });
  return counts;
}

/// a_n of a component for n <= n_max from t_n v = a_n v, read at the
/// coordinate where the eigenvector is largest. a_n = 0 whenever p | n.
inline std::vector<double> an_sequence(const IsotypicComponent& comp, const ClassSet& cs, Int p, Int n_max) {
  if (comp.kind == ComponentKind::eisenstein || comp.kind == ComponentKind::twisted_eisenstein)
    throw std::invalid_argument("an_sequence needs a cuspidal component");
  const auto& v = comp.float_basis.front();
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[i0]) + 1e-12) i0 = i;
  auto counts = brandt_row_counts(cs, i0, n_max);
  std::vector<double> a(static_cast<std::size_t>(n_max + 1), 0.0);
  const double denom = 2.0 * double(cs.heights[i0]) * v[i0];
  for (Int m = 1; m <= n_max; ++m) {
    if (m % p == 0) continue;
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += double(counts[i][std::size_t(m)]) * v[i];
    a[std::size_t(m)] = s / denom;
  }
  if (comp.exact)
    for (auto& x : a) x = std::round(x);
  return a;
}

/// a_n rebuilt from prime coefficients: multiplicative, a_{q^{k+2}} =
/// a_{q^{k+1}} a_q - q a_{q^k}, and a_{p^k} = 0.
inline std::vector<double> an_from_primes(const std::vector<double>& prime_coeffs, Int p, Int n_max) {
  std::vector<double> a(static_cast<std::size_t>(n_max + 1), 0.0);
  if (n_max >= 1) a[1] = 1;
  for (Int n = 2; n <= n_max; ++n) {
    auto f = factor(n);
    double v = 1;
    for (auto [q, e] : f) {
      if (q == p) {
        v = 0;
        break;
      }
      double prev = 1, cur = prime_coeffs.at(std::size_t(q));
      for (int k = 1; k < e; ++k) {
        double nx = cur * prime_coeffs[std::size_t(q)] - double(q) * prev;
        prev = cur;
        cur = nx;
      }
      v *= cur;
    }
    a[std::size_t(n)] = v;
  }
  return a;
}

/// e_{f,O'} and its lift coefficients.
struct LiftVector {
  bool zero = false;
  std::size_t rank = 0;
  bool exact = false;
  std::vector<Int> vector;          ///< exact path
  std::vector<double> float_vector;
  std::vector<Rational> coeffs;     ///< c(d), d = 0..d_max, exact path
  std::vector<double> float_coeffs;
};

namespace detail {

/// Kernel rank of the lift on a component at depth T (exact).
inline std::size_t lift_rank_exact(const IsotypicComponent& comp, const LiftForms& lift, Int depth) {
  RatMatrix m(std::size_t(depth + 1), comp.dim());
  for (std::size_t c = 0; c < comp.dim(); ++c) {
    std::vector<Rational> v(comp.basis[c].begin(), comp.basis[c].end());
    auto co = lift.coefficients(v, depth);
    for (Int d = 0; d <= depth; ++d) m(std::size_t(d), c) = co[std::size_t(d)];
  }
  return rank(m);
}

inline Eigen::MatrixXd lift_matrix_float(const IsotypicComponent& comp, const LiftForms& lift, Int depth) {
  Eigen::MatrixXd m(depth + 1, Eigen::Index(comp.dim()));
  for (std::size_t c = 0; c < comp.dim(); ++c) {
    auto co = lift.coefficients(comp.float_basis[c], depth);
    for (Int d = 0; d <= depth; ++d) m(d, Eigen::Index(c)) = co[std::size_t(d)];
  }
  return m;
}

inline std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  double top = s.size() ? s(0) : 0.0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * std::max(1.0, top)) ++r;
  return r;
}

}  // namespace detail

/// Kernel of the lift restricted to a component, checked at depth and
/// 2*depth; the generator of its height-orthogonal complement, normalized.
inline LiftVector e_f_vector(const IsotypicComponent& comp, const LiftForms& lift, const std::vector<Int>& heights,
                             Int depth, Int d_max) {
  if (2 * depth > lift.depth()) throw std::out_of_range("lift computed to less than twice the requested depth");
  if (d_max > lift.depth()) throw std::out_of_range("d_max beyond the lift depth");
  const std::size_t k = comp.dim();
  LiftVector out;
  out.exact = comp.exact;
  if (comp.exact) {
    std::size_t r1 = detail::lift_rank_exact(comp, lift, depth);
    std::size_t r2 = detail::lift_rank_exact(comp, lift, 2 * depth);
    if (r1 != r2) throw PrecisionError("lift rank changes between depth T and 2T; raise depth");
    out.rank = r1;
    if (r1 > 1) throw RankError("lift rank exceeds one on an eigencomponent");
    if (r1 == 0) {
      out.zero = true;
      out.vector.assign(heights.size(), 0);
    } else {
      // kernel in component coordinates
      RatMatrix m(std::size_t(depth + 1), k);
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<Rational> v(comp.basis[c].begin(), comp.basis[c].end());
        auto co = lift.coefficients(v, depth);
        for (Int d = 0; d <= depth; ++d) m(std::size_t(d), c) = co[std::size_t(d)];
      }
      auto ker = nullspace(m);
      // x with <V kappa, V x> = 0 for all kernel vectors kappa
      RatMatrix cond(std::max<std::size_t>(ker.size(), 1), k, Rational(0));
      for (std::size_t r = 0; r < ker.size(); ++r) {
        std::vector<Rational> vk(heights.size(), Rational(0));
        for (std::size_t c = 0; c < k; ++c)
          for (std::size_t i = 0; i < heights.size(); ++i) vk[i] += Rational(ker[r][c] * comp.basis[c][i]);
        for (std::size_t c = 0; c < k; ++c) {
          Rational s(0);
          for (std::size_t i = 0; i < heights.size(); ++i) s += vk[i] * Rational(comp.basis[c][i] * heights[i]);
          cond(r, c) = s;
        }
      }
      auto x = nullspace(cond);
      if (x.size() != 1) throw InvariantError("orthogonal complement of the lift kernel is not a line");
      std::vector<Rational> e(heights.size(), Rational(0));
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < heights.size(); ++i) e[i] += Rational(x[0][c] * comp.basis[c][i]);
      out.vector = primitive_integer(e);
    }
    std::vector<Rational> ev(out.vector.begin(), out.vector.end());
    out.coeffs = lift.coefficients(ev, d_max);
    for (const auto& c : out.coeffs) out.float_coeffs.push_back(c.to_double());
    out.float_vector.assign(out.vector.begin(), out.vector.end());
    return out;
  }

  Eigen::MatrixXd m1 = detail::lift_matrix_float(comp, lift, depth);
  Eigen::MatrixXd m2 = detail::lift_matrix_float(comp, lift, 2 * depth);
  const double tol = 1e-9;
  std::size_t r1 = detail::numeric_rank(m1, tol), r2 = detail::numeric_rank(m2, tol);
  if (r1 != r2) throw PrecisionError("lift rank changes between depth T and 2T; raise depth");
  out.rank = r1;
  if (r1 > 1) throw RankError("lift rank exceeds one on an eigencomponent");
  std::vector<double> e(heights.size(), 0.0);
  if (r1 == 0) {
    out.zero = true;
  } else {
    // In S-coordinates the height pairing is Euclidean; the complement of the
    // kernel is spanned by the top right singular vector.
    Eigen::MatrixXd mu(m1.rows(), Eigen::Index(k));
    // columns of unitary correspond to W^{1/2} v; re-express the lift on them
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> v(heights.size());
      for (std::size_t i = 0; i < heights.size(); ++i)
        v[i] = comp.unitary(Eigen::Index(i), Eigen::Index(c)) / std::sqrt(double(heights[i]));
      auto co = lift.coefficients(v, depth);
      for (Int d = 0; d <= depth; ++d) mu(d, Eigen::Index(c)) = co[std::size_t(d)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mu, Eigen::ComputeFullV);
    Eigen::VectorXd x = svd.matrixV().col(0);
    for (std::size_t i = 0; i < heights.size(); ++i) {
      double s = 0;
      for (std::size_t c = 0; c < k; ++c) s += comp.unitary(Eigen::Index(i), Eigen::Index(c)) * x(Eigen::Index(c));
      e[i] = s / std::sqrt(double(heights[i]));
    }
    double norm = std::sqrt(height_pairing(heights, e, e));
    double sign = 0;
    for (double y : e)
      if (std::abs(y) > 1e-8) {
        sign = y > 0 ? 1 : -1;
        break;
      }
    for (auto& y : e) y *= sign / norm;
  }
  out.float_vector = e;
  out.float_coeffs = lift.coefficients(e, d_max);
  return out;
}

}  // namespace quatlift
