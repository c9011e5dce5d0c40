#pragma once

// Central values of weight-2 L-series by the smoothed functional equation
//
//   L(1) = sum a_n/n [exp(-2 pi n A / sqrt N) + eps exp(-2 pi n / (A sqrt N))],
//
// valid for every A > 0. The sign eps and the conductor N are not known in
// advance; a candidate (N, eps) is accepted when the sums at A = 1 and
// A = 1.25 agree.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "quatlift/arith.hpp"

namespace quatlift {

class FitFailure : public Error {
 public:
  using Error::Error;
};

struct LValueEstimate {
  double value = 0;
  double error = 0;
  Int terms = 0;
  int epsilon = 0;
  Int conductor = 0;
  double residual = 0;
  std::vector<Int> skipped_conductors;  ///< candidates needing more terms than available
};

/// Coefficients together with the conductor they are meant for.
struct LCandidate {
  Int conductor = 0;
  std::vector<double> coeffs;  ///< index n, coeffs[0] unused
  int epsilon = 0;             ///< fixed sign, or 0 to try both
};

constexpr double kFitA1 = 1.0;
constexpr double kFitA2 = 1.25;

/// Bound on the tail n > M using |a_n| / n <= 2 (Deligne: |a_n| <= d(n) sqrt n <= 2n).
inline double tail_bound(Int conductor, Int M) {
  const double c = 2 * std::numbers::pi / (kFitA2 * std::sqrt(double(conductor)));
  return 2 * std::exp(-c * double(M + 1)) / (1 - std::exp(-c));
}

/// Least M with tail_bound(N, M) < tol.
inline Int terms_needed(Int conductor, double tol = 1e-13) {
  const double c = 2 * std::numbers::pi / (kFitA2 * std::sqrt(double(conductor)));
  double m = std::log(2 / (tol * (1 - std::exp(-c)))) / c;
  return static_cast<Int>(std::ceil(m)) + 1;
}

inline double smoothed_sum(const std::vector<double>& a, Int conductor, int eps, double A, Int terms) {
  const double s = std::sqrt(double(conductor));
  const double c1 = 2 * std::numbers::pi * A / s, c2 = 2 * std::numbers::pi / (A * s);
  double total = 0;
  for (Int n = terms; n >= 1; --n) {
    double an = a[std::size_t(n)];
    if (an == 0) continue;
    total += an / double(n) * (std::exp(-c1 * double(n)) + eps * std::exp(-c2 * double(n)));
  }
  return total;
}

/// Fit (N, eps) among the candidates; the accepted pair has the smallest residual.
inline LValueEstimate fit_central_value(const std::vector<LCandidate>& candidates, double tol_fit = 1e-8,
                                        double tol_tail = 1e-13) {
  std::optional<LValueEstimate> best;
  std::vector<Int> skipped;
  for (const auto& cand : candidates) {
    Int available = static_cast<Int>(cand.coeffs.size()) - 1;
    Int need = terms_needed(cand.conductor, tol_tail);
    if (need > available) {
      skipped.push_back(cand.conductor);
      continue;
    }
    for (int eps : {1, -1}) {
      if (cand.epsilon != 0 && eps != cand.epsilon) continue;
      double v1 = smoothed_sum(cand.coeffs, cand.conductor, eps, kFitA1, need);
      double v2 = smoothed_sum(cand.coeffs, cand.conductor, eps, kFitA2, need);
      double res = std::abs(v1 - v2);
      if (res > tol_fit * std::max(1.0, std::abs(v1))) continue;
      if (best && res >= best->residual) continue;
      LValueEstimate e;
      e.value = eps == -1 ? 0.0 : v1;
      e.residual = res;
      e.terms = need;
      e.epsilon = eps;
      e.conductor = cand.conductor;
      e.error = res + 2 * tail_bound(cand.conductor, need) + (eps == -1 ? std::abs(v1) : 0.0);
      best = e;
    }
  }
  if (!best) {
    std::string msg = "no (conductor, sign) candidate is A-independent";
    if (!skipped.empty()) msg += " (" + std::to_string(skipped.size()) + " candidates skipped for lack of terms)";
    throw FitFailure(msg);
  }
  best->skipped_conductors = skipped;
  return *best;
}

/// Value at a known conductor, with the sign fitted.
inline LValueEstimate central_value(const std::vector<double>& a, Int conductor, double tol_fit = 1e-8) {
  return fit_central_value({LCandidate{conductor, a}}, tol_fit);
}

/// b_n = a_n chi(n) for p not dividing n; b_{p^k m} = ap^k b_m (ap = 0 kills them).
inline std::vector<double> twist_coefficients(const std::vector<double>& a, Int D, Int p, double ap, Int terms) {
  std::vector<double> b(std::size_t(terms + 1), 0.0);
  for (Int n = 1; n <= terms; ++n) {
    Int m = n;
    double f = 1;
    while (m % p == 0) {
      m /= p;
      f *= ap;
    }
    if (f == 0) continue;
    b[std::size_t(n)] = f * a[std::size_t(m)] * kronecker(D, m);
  }
  return b;
}

}  // namespace quatlift
