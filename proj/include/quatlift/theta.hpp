#pragma once

// Special points and theta maps. The ternary form of an order O is
// Q = -Delta / omega on rho(O) = {2u - tr u}, so that the elements of O
// with Delta = -d, counted modulo Z, are the vectors of rho(O) with
// Q = d / omega.

#include <string>
#include <vector>

#include "quatlift/brandt.hpp"
#include "quatlift/enumerate.hpp"
#include "quatlift/lattice.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/parallel.hpp"

namespace quatlift {

struct TernaryForm {
  QuadraticForm<3> form;  ///< Q = -Delta / omega
  Int omega = 0;
  Int level = 0;          ///< least N with N H^{-1} even integral
  Int disc = 0;           ///< det(H) / 2
};

namespace detail {

inline Int ternary_level(const IntMat<3>& h) {
  const Int det = checked::narrow(determinant<3>(h));
  const IntMat<3> adj = adjugate<3>(h);
  Int n = 1;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Int modulus = i == j ? 2 * det : det;
      n = lcm(n, modulus / gcd(modulus, adj[i][j]));
    }
  return n;
}

}  // namespace detail

/// Ternary form of an order; throws when Q is not integral.
inline TernaryForm ternary_form(const Lattice& order) {
  const auto& alg = order.algebra();
  Int den = 1;
  std::vector<QuatElement> rho;
  for (const auto& u : order.basis()) {
    QuatElement z = u * Rational(2) - QuatElement::scalar(alg, u.trace());
    rho.push_back(z);
    den = lcm(den, z.den());
  }
  std::vector<IntVec<3>> rows;
  for (const auto& z : rho) {
    Int f = den / z.den();
    rows.push_back({checked::mul(z.coords()[1], f), checked::mul(z.coords()[2], f), checked::mul(z.coords()[3], f)});
  }
  IntMat<3> hnf = hnf_lower<3>(rows);
  std::array<QuatElement, 3> basis;
  for (std::size_t i = 0; i < 3; ++i) basis[i] = QuatElement(alg, {0, hnf[i][0], hnf[i][1], hnf[i][2]}, den);
  TernaryForm t;
  Rational w = delta_gcd(order);
  t.omega = w.to_integer();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Rational v = (basis[i] * basis[j].conj()).trace() / Rational(t.omega);
      if (!v.is_integer()) throw InvariantError("ternary form is not integral");
      t.form.hessian[i][j] = v.num();
    }
  for (std::size_t i = 0; i < 3; ++i)
    if (t.form.hessian[i][i] % 2 != 0) throw InvariantError("ternary form has odd diagonal");
  Int det = checked::narrow(determinant<3>(t.form.hessian));
  if (det % 2 != 0) throw InvariantError("odd ternary determinant");
  t.disc = det / 2;
  t.level = detail::ternary_level(t.form.hessian);
  return t;
}

/// Special-point counts of a class set: a_d([a_i]) = r_{d/omega}(Q_{a_i}).
class SpecialPoints {
 public:
  SpecialPoints() = default;

  /// Counts for every class up to discriminant d_max.
  SpecialPoints(const std::vector<Lattice>& right_orders, Int d_max) : d_max_(d_max) {
    const std::size_t n = right_orders.size();
    forms_.resize(n);
    counts_.resize(n);
    parallel_for(n, [&](std::size_t i) { forms_[i] = ternary_form(right_orders[i]); });
    omega_ = n ? forms_[0].omega : 1;
    for (const auto& f : forms_)
      if (f.omega != omega_) throw InvariantError("classes with different omega");
    parallel_for(n, [&](std::size_t i) { counts_[i] = count_by_value(forms_[i].form, d_max / omega_); });
  }

  Int omega() const { return omega_; }
  Int d_max() const { return d_max_; }
  std::size_t size() const { return forms_.size(); }
  const TernaryForm& form(std::size_t i) const { return forms_.at(i); }

  /// r_n(Q_{a_i}), n = d / omega.
  Int r(std::size_t i, Int n) const {
    if (n * omega_ > d_max_) throw std::out_of_range("special points beyond computed bound");
    return counts_[i][static_cast<std::size_t>(n)];
  }

  /// a_d([a_i]).
  Int a(std::size_t i, Int d) const {
    if (d < 0) return 0;
    if (d % omega_ != 0) return 0;
    return r(i, d / omega_);
  }

  /// e_d as a dual vector (values on the classes).
  std::vector<Int> e(Int d) const {
    std::vector<Int> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = a(i, d);
    return v;
  }

 private:
  Int d_max_ = 0;
  Int omega_ = 1;
  std::vector<TernaryForm> forms_;
  std::vector<std::vector<Int>> counts_;
};

struct QExpansion {
  std::string weight;     ///< "2" or "3/2"
  Int level = 0;
  std::string character;  ///< "trivial" or "kappa_p"
  std::vector<Rational> coeffs;
};

/// Theta(v): coefficient at q^n is (1/2) <e_{n omega}, v>.
template <typename T>
QExpansion theta32(const SpecialPoints& sp, const std::vector<T>& v, Int depth, Int level) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  QExpansion out{"3/2", level, "kappa", {}};
  for (Int n = 0; n <= depth; ++n) {
    Rational c(0);
    for (std::size_t i = 0; i < v.size(); ++i) c += Rational(v[i]) * Rational(sp.r(i, n));
    out.coeffs.push_back(c / Rational(2));
  }
  return out;
}

/// phi(v, w): coefficient at q^m is <v, t_m w> (v a dual vector), with
/// constant term deg v deg w / 2.
inline QExpansion phi2(HeckeAlgebra& hecke, const std::vector<Rational>& v,
                       const std::vector<Rational>& w, Int depth, Int level) {
  QExpansion out{"2", level, "trivial", {}};
  out.coeffs.push_back(degree(v) * degree(w) / Rational(2));
  for (Int m = 1; m <= depth; ++m) {
    IntMatrix t = hecke.matrix(m);
    Rational c(0);
    for (std::size_t j = 0; j < t.rows(); ++j) {
      Rational tw(0);
      for (std::size_t i = 0; i < t.cols(); ++i) tw += Rational(t(j, i)) * w[i];
      c += v[j] * tw;
    }
    out.coeffs.push_back(c);
  }
  return out;
}

/// The level-p^2 lift on M(Õ): for every Õ-class one subideal c_i in
/// Psi^Õ_{O'}(b_i), and c(d) = (1/2) sum v_i r_d(Q_{c_i}).
class LiftForms {
 public:
  LiftForms(const Tower& t, const ClassSet& tilde, const Order& oprime, Int depth) : depth_(depth), p_(t.p) {
    Lattice m = m_ideal(oprime.lattice, t.tilde.lattice, t.p);
    std::vector<Lattice> right(tilde.size());
    chosen_.resize(tilde.size());
    parallel_for(tilde.size(), [&](std::size_t i) {
      chosen_[i] = psi_down_p2(tilde.reps[i], oprime.lattice, m, t.p).front();
      right[i] = side_order(chosen_[i], Side::right);
    });
    sp_ = SpecialPoints(right, depth * t.p);
    if (sp_.omega() != t.p) throw InvariantError("omega of a level-p^2 right order is not p");
  }

  Int depth() const { return depth_; }
  const std::vector<Lattice>& chosen() const { return chosen_; }
  const SpecialPoints& special_points() const { return sp_; }

  template <typename T>
  std::vector<T> coefficients(const std::vector<T>& v, Int d_max) const {
    if (d_max > depth_) throw std::out_of_range("lift coefficient beyond computed depth");
    std::vector<T> c(static_cast<std::size_t>(d_max + 1), T{});
    for (Int d = 0; d <= d_max; ++d) {
      T s{};
      for (std::size_t i = 0; i < v.size(); ++i) s = s + v[i] * T(sp_.r(i, d));
      c[static_cast<std::size_t>(d)] = s / T(2);
    }
    return c;
  }

  QExpansion expansion(const std::vector<Rational>& v) const {
    return QExpansion{"3/2", 4 * p_ * p_, "kappa_p", coefficients(v, depth_)};
  }

 private:
  Int depth_;
  Int p_;
  std::vector<Lattice> chosen_;
  SpecialPoints sp_;
};

/// Default expansion depth ceil(3 p (p + 1) / 4).
inline Int default_depth(Int p) { return (3 * p * (p + 1) + 3) / 4; }

}  // namespace quatlift
