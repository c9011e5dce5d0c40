#pragma once

// Per-component analysis on M(Õ): root numbers of f and f (x) p*, the
// vanishing conditions (A)/(B), alpha_f, and the table comparing twisted
// central values with the squared lift coefficients c(d).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quatlift/lvalue.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/spectral.hpp"
#include "quatlift/theta.hpp"

namespace quatlift {

struct Tolerances {
  double eigen = 1e-10;
  double fit = 1e-8;
  double ratio = 1e-3;
  double zero_floor = 1e-6;
};

/// p* = (-1|p) p.
inline Int p_star(Int p) { return legendre(-1, p) * p; }

struct Conditions {
  Rational alpha;
  LValueEstimate L1;       ///< L(f,1), conductor p^2
  LValueEstimate L_pstar;  ///< L(f (x) p*, 1), conductor fitted in {p, p^2}
  bool condA = false;
  bool condB = false;
};

/// alpha_f = 1/2 for two-dimensional components, p / (2(p-1)) for one-dimensional ones.
inline Rational alpha_f(const IsotypicComponent& comp, Int p) {
  if (comp.dim() == 2) return Rational(1, 2);
  if (comp.dim() == 1) return Rational(p, 2 * (p - 1));
  throw std::invalid_argument("alpha_f undefined for a component of dimension " + std::to_string(comp.dim()));
}

/// L(f (x) p*, 1); the level-p candidates carry a_{p^k} = eps^k.
inline LValueEstimate pstar_value(const std::vector<double>& a, Int p, double tol_fit) {
  const Int terms = static_cast<Int>(a.size()) - 1;
  const Int ps = p_star(p);
  std::optional<LValueEstimate> best;
  std::vector<Int> skipped;
  auto consider = [&](Int N, double ap, int eps) {
    LCandidate c{N, twist_coefficients(a, ps, p, ap, terms), eps};
    try {
      auto e = fit_central_value({c}, tol_fit);
      if (!best || e.residual < best->residual) best = e;
    } catch (const FitFailure&) {
      if (terms_needed(N) > terms) skipped.push_back(N);
    }
  };
  consider(p, 1.0, 1);
  consider(p, -1.0, -1);
  consider(p * p, 0.0, 0);
  if (!best) throw FitFailure("L(f (x) p*, 1): no candidate fits");
  best->skipped_conductors = skipped;
  return *best;
}

inline Conditions alpha_and_conditions(const IsotypicComponent& comp, const std::vector<double>& a, Int p, int sigma,
                                       double tol_fit) {
  Conditions c;
  c.alpha = alpha_f(comp, p);
  const Int terms = static_cast<Int>(a.size()) - 1;
  c.L1 = fit_central_value({LCandidate{p * p, twist_coefficients(a, 1, p, 0.0, terms)}}, tol_fit);
  c.L_pstar = pstar_value(a, p, tol_fit);
  const int m1 = legendre(-1, p);
  c.condA = c.L_pstar.conductor == p && c.L_pstar.epsilon == m1 * sigma;
  c.condB = c.L_pstar.conductor == p * p && c.L_pstar.epsilon == m1;
  return c;
}

/// L(f, -pd, 1) with (N, eps) fitted over {p d^2, p^2 d^2, p^3 d^2, p^4 d^2}.
inline LValueEstimate twisted_value(const std::vector<double>& a, Int p, Int d, const LValueEstimate& pstar,
                                    double tol_fit) {
  const Int D = -p * d;
  if (!is_fundamental_discriminant(D)) throw std::invalid_argument("-pd is not a fundamental discriminant");
  const Int terms = static_cast<Int>(a.size()) - 1;
  // f (x) chi_{-pd} = (f (x) p*) (x) chi_{D'}, D' = -pd / p*
  const Int Dp = D / p_star(p);
  double ap = 0.0;
  if (pstar.conductor == p) ap = double(pstar.epsilon * kronecker(Dp, p));
  std::vector<LCandidate> cands;
  std::vector<Int> skipped;
  for (Int k = 1; k <= 4; ++k) {
    Int N = checked::mul(ipow(p, unsigned(k)), checked::mul(d, d));
    if (terms_needed(N) > terms) {
      skipped.push_back(N);
      continue;
    }
    cands.push_back(LCandidate{N, twist_coefficients(a, D, p, k == 1 ? ap : 0.0, terms)});
  }
  if (cands.empty()) throw FitFailure("no conductor candidate fits in the available coefficients");
  auto e = fit_central_value(cands, tol_fit);
  e.skipped_conductors.insert(e.skipped_conductors.end(), skipped.begin(), skipped.end());
  return e;
}

struct GrossRow {
  Int d = 0;
  bool exact = false;
  Rational c;           ///< exact path
  double c_float = 0;
  LValueEstimate L;
  bool has_ratio = false;
  double ratio = 0;     ///< L sqrt(pd) / c^2
};

enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct GrossTable {
  std::vector<GrossRow> rows;
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
  double ratio_spread = 0;  ///< max |r / r_0 - 1| over usable rows
  std::size_t usable = 0;
};

/// Admissible d: 1 <= d <= d_max, -pd fundamental, (d|p) = sigma.
inline std::vector<Int> admissible_d(Int p, int sigma, Int d_max) {
  std::vector<Int> out;
  for (Int d = 1; d <= d_max; ++d)
    if (is_fundamental_discriminant(-p * d) && legendre(d, p) == sigma) out.push_back(d);
  return out;
}

inline GrossTable gross_table(const std::vector<double>& a, const LiftVector& lift, const Conditions& cond, Int p,
                              int sigma, Int d_max, const Tolerances& tol) {
  GrossTable t;
  auto ds = admissible_d(p, sigma, d_max);
  t.rows.resize(ds.size());
  std::vector<std::string> errors(ds.size());
  parallel_for(ds.size(), [&](std::size_t k) {
    GrossRow& r = t.rows[k];
    r.d = ds[k];
    r.exact = lift.exact;
    if (lift.exact) r.c = lift.coeffs.at(std::size_t(r.d));
    r.c_float = lift.float_coeffs.at(std::size_t(r.d));
    r.L = twisted_value(a, p, r.d, cond.L_pstar, tol.fit);
    bool c_zero = lift.exact ? r.c.is_zero() : std::abs(r.c_float) < tol.zero_floor;
    if (!c_zero) {
      r.has_ratio = true;
      r.ratio = r.L.value * std::sqrt(double(p * r.d)) / (r.c_float * r.c_float);
    }
  });

  if (lift.zero) {
    bool ok = true;
    for (const auto& r : t.rows)
      if (std::abs(cond.L1.value * r.L.value) >= tol.zero_floor) ok = false;
    t.verdict = ok ? Verdict::pass : Verdict::fail;
    t.detail = ok ? "zero lift; L(f,1) L(f,-pd,1) vanishes on every row" : "zero lift but some L(f,1) L(f,-pd,1) is nonzero";
    return t;
  }
  std::vector<double> ratios;
  bool zeros_match = true;
  for (const auto& r : t.rows) {
    bool L_zero = std::abs(r.L.value) < tol.zero_floor;
    if (r.has_ratio) ratios.push_back(r.ratio);
    if (L_zero == r.has_ratio) zeros_match = false;
  }
  t.usable = ratios.size();
  if (ratios.size() < 3) {
    t.verdict = Verdict::inconclusive;
    t.detail = "fewer than 3 rows with c(d) != 0";
    return t;
  }
  for (double r : ratios) t.ratio_spread = std::max(t.ratio_spread, std::abs(r / ratios.front() - 1));
  bool constant = t.ratio_spread <= tol.ratio;
  t.verdict = constant && zeros_match ? Verdict::pass : Verdict::fail;
  if (!constant) t.detail = "ratio not constant";
  else if (!zeros_match) t.detail = "c(d) = 0 and L(f,-pd,1) = 0 disagree on some row";
  else t.detail = "ratio constant on all rows with c(d) != 0";
  return t;
}

/// Coefficients needed for twisted values up to conductor p^2 d_max^2.
inline Int coefficient_budget(Int p, Int d_max) {
  return std::max(terms_needed(p * p), terms_needed(checked::mul(p * p, d_max * d_max)));
}

}  // namespace quatlift
