#pragma once

// Invariant checks over a prime: structure constants, Eichler mass, the
// Hecke relations, the special-point identity for e_d and the
// compatibility of psi with Hecke operators.

#include <sstream>
#include <string>
#include <vector>

#include "quatlift/brandt.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/theta.hpp"

namespace quatlift {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// n(Õ) = p^2, n_1(Õ) = 4p, omega(Õ) = p; n(O') = p^3, n_1(O') = 4p^2,
/// omega(O') = p; disc(O) = p.
inline CheckResult check_structure_constants(const Tower& t) {
  const Int p = t.p;
  std::ostringstream os;
  bool ok = t.maximal.disc == p;
  os << "disc(O)=" << t.maximal.disc;
  auto expect = [&](const Order& o, Int n, Int n1, const char* name) {
    os << " " << name << ":n=" << o.level << ",n1=" << o.theta_level << ",omega=" << o.omega;
    ok = ok && o.level == n && o.theta_level == n1 && o.omega == p;
  };
  expect(t.tilde, p * p, 4 * p, "tilde");
  for (const auto& o : t.level_p2) expect(o.order, p * p * p, 4 * p * p, "p2");
  return {"structure constants p=" + std::to_string(p), ok, os.str()};
}

/// sum 1/(2 w_i) over I(O) equals (p - 1)/24.
inline CheckResult check_mass(const ClassSet& maximal, Int p) {
  Rational mass(0);
  for (Int w : maximal.heights) mass += Rational(1, 2 * w);
  Rational expected(p - 1, 24);
  return {"mass p=" + std::to_string(p), mass == expected, "mass=" + mass.str() + " expected=" + expected.str()};
}

/// B_1 = I, self-adjointness, commutation and coprime multiplicativity for
/// m, n <= bound coprime to p, recursion at q in {2, 3}, column sums q + 1.
inline CheckResult check_hecke(const BrandtFamily& fam, Int p, Int bound, const std::string& label) {
  std::vector<std::string> bad;
  if (fam[1] != IntMatrix::identity(fam.dim())) bad.push_back("B1 != I");
  for (Int m = 1; m <= fam.max_m(); ++m)
    if (!is_self_adjoint(fam[m], fam.heights)) bad.push_back("B" + std::to_string(m) + " not self-adjoint");
  for (Int m = 1; m <= bound; ++m) {
    if (m % p == 0) continue;
    for (Int n = m + 1; n <= bound; ++n) {
      if (n % p == 0) continue;
      if (fam[m] * fam[n] != fam[n] * fam[m]) bad.push_back("B" + std::to_string(m) + ",B" + std::to_string(n) + " do not commute");
      if (gcd(m, n) == 1 && m * n <= fam.max_m() && fam[m * n] != fam[m] * fam[n])
        bad.push_back("B" + std::to_string(m * n) + " != B" + std::to_string(m) + " B" + std::to_string(n));
    }
  }
  for (Int q : {2, 3}) {
    if (q == p) continue;
    Int prev = 1, cur = q;
    while (cur * q <= fam.max_m()) {
      IntMatrix next = fam[cur] * fam[q] - q * fam[prev];
      if (next != fam[cur * q]) bad.push_back("recursion fails at " + std::to_string(cur * q));
      prev = cur;
      cur *= q;
    }
  }
  for (Int q : primes_up_to(std::min(bound, fam.max_m()))) {
    if (q == p) continue;
    for (Int s : column_sums(fam[q]))
      if (s != q + 1) {
        bad.push_back("column sum of B" + std::to_string(q) + " != " + std::to_string(q + 1));
        break;
      }
  }
  std::string detail = bad.empty() ? "B1..B" + std::to_string(fam.max_m()) + " ok" : bad.front();
  if (bad.size() > 1) detail += " (+" + std::to_string(bad.size() - 1) + " more)";
  return {"hecke " + label, bad.empty(), detail};
}

/// e_d B_q = e_{dq^2} + (-d|q) e_d + q e_{d/q^2} for d <= d_max with -d = 0, 1 mod 4.
inline CheckResult check_edhecke(const ClassSet& cs, const BrandtFamily& fam, Int p, Int d_max,
                                 const std::vector<Int>& qs, const std::string& label) {
  Int qmax = 1;
  for (Int q : qs) qmax = std::max(qmax, q);
  SpecialPoints sp(cs.right_orders, d_max * qmax * qmax);
  std::size_t checked = 0, failed = 0;
  std::string first;
  for (Int q : qs) {
    if (p % q == 0) continue;
    for (Int d = 0; d <= d_max; ++d) {
      if (mod(-d, 4) == 2 || mod(-d, 4) == 3) continue;
      auto ed = sp.e(d);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        Int lhs = 0;
        for (std::size_t j = 0; j < cs.size(); ++j) lhs += ed[j] * fam[q](j, i);
        Int rhs = sp.a(i, d * q * q) + kronecker(-d, q) * sp.a(i, d);
        if (d % (q * q) == 0) rhs += q * sp.a(i, d / (q * q));
        ++checked;
        if (lhs != rhs) {
          if (!failed) first = "q=" + std::to_string(q) + " d=" + std::to_string(d);
          ++failed;
        }
      }
    }
  }
  return {"edhecke " + label, failed == 0,
          failed ? std::to_string(failed) + " failures, first " + first : std::to_string(checked) + " identities"};
}

/// B'_m Psi = Psi B_m for m <= bound coprime to p.
inline CheckResult check_psi_commutation(const ClassSet& tilde, const BrandtFamily& tfam, const ClassSet& p2,
                                         const BrandtFamily& pfam, Int p, Int bound, const std::string& label) {
  IntMatrix psi = psi_matrix(tilde, p2);
  std::vector<Int> bad;
  for (Int m = 1; m <= bound; ++m) {
    if (m % p == 0) continue;
    if (pfam[m] * psi != psi * tfam[m]) bad.push_back(m);
  }
  std::string detail = bad.empty() ? "m <= " + std::to_string(bound) + " ok" : "fails at m=" + std::to_string(bad.front());
  return {"psi commutation " + label, bad.empty(), detail};
}

}  // namespace quatlift
