#pragma once

// End-to-end analysis for one prime: tower, class sets, decomposition of
// M(Õ), and per component the lift, root numbers and the Gross table.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "quatlift/brandt.hpp"
#include "quatlift/gross.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/spectral.hpp"
#include "quatlift/theta.hpp"

namespace quatlift {

struct PipelineOptions {
  Int depth = 0;         ///< 0: default_depth(p)
  Int d_max = 150;
  Int hecke_bound = 13;
  Tolerances tol;
};

/// Everything that does not depend on sigma.
struct PrimeContext {
  Tower tower;
  ClassSet maximal;
  ClassSet tilde;
  BrandtFamily maximal_brandt;
  BrandtFamily tilde_brandt;
  std::vector<Int> primes;
  std::vector<IsotypicComponent> maximal_components;
  std::vector<IsotypicComponent> components;
};

inline PrimeContext prepare(Int p, const PipelineOptions& opt = {}) {
  PrimeContext ctx;
  ctx.tower = build_tower(p);
  ctx.maximal = maximal_class_set(ctx.tower);
  ctx.tilde = tilde_class_set(ctx.tower, ctx.maximal);
  ctx.primes = hecke_primes(p, opt.hecke_bound);
  if (ctx.primes.empty()) throw std::invalid_argument("no Hecke primes below the bound");
  ctx.maximal_brandt = brandt_matrices(ctx.maximal, ctx.tower.maximal.disc, ctx.primes.back());
  ctx.tilde_brandt = brandt_matrices(ctx.tilde, ctx.tower.tilde.disc, ctx.primes.back());
  DecomposeOptions mo;
  mo.tol = opt.tol.eigen;
  mo.p = p;
  ctx.maximal_components = isotypic_decompose(ctx.maximal_brandt, ctx.primes, mo);
  DecomposeOptions to = mo;
  to.level_p_systems = cusp_systems(ctx.maximal_components);
  ctx.components = isotypic_decompose(ctx.tilde_brandt, ctx.primes, to);
  return ctx;
}

struct ComponentReport {
  std::size_t index = 0;
  const IsotypicComponent* component = nullptr;
  bool analyzed = false;       ///< cuspidal components only
  std::string skipped_reason;
  Conditions conditions;
  LiftVector lift;
  bool depth_stable = false;   ///< c(d), d <= d_max, equal at depth T and 2T
  GrossTable table;
  std::vector<double> an;      ///< a_0..a_k, a short prefix for reporting
};

struct GrossReport {
  Int p = 0;
  int sigma = 0;
  Int depth = 0;
  Int d_max = 0;
  Int coefficient_terms = 0;
  Tolerances tol;
  std::vector<ComponentReport> components;
};

namespace detail {

inline bool same_coeffs(const LiftVector& a, const LiftVector& b, Int d_max) {
  if (a.zero != b.zero) return false;
  if (a.exact && b.exact) {
    for (Int d = 0; d <= d_max; ++d)
      if (a.coeffs[std::size_t(d)] != b.coeffs[std::size_t(d)]) return false;
    return true;
  }
  for (Int d = 0; d <= d_max; ++d) {
    double x = a.float_coeffs[std::size_t(d)], y = b.float_coeffs[std::size_t(d)];
    if (std::abs(x - y) > 1e-8 * std::max(1.0, std::abs(x))) return false;
  }
  return true;
}

}  // namespace detail

/// Full analysis of the components of M(Õ) against O'(sigma).
/// With tables = false only the lift and the root-number conditions are computed.
inline GrossReport run_gross(const PrimeContext& ctx, int sigma, const PipelineOptions& opt, bool tables = true) {
  const Int p = ctx.tower.p;
  GrossReport rep;
  rep.p = p;
  rep.sigma = sigma;
  rep.depth = opt.depth > 0 ? opt.depth : default_depth(p);
  rep.d_max = opt.d_max;
  rep.tol = opt.tol;
  const Int T = rep.depth;
  LiftForms lift(ctx.tower, ctx.tilde, ctx.tower.oprime(sigma), std::max(4 * T, opt.d_max));
  rep.coefficient_terms = tables ? coefficient_budget(p, opt.d_max) : terms_needed(p * p);

  for (std::size_t k = 0; k < ctx.components.size(); ++k) {
    const auto& comp = ctx.components[k];
    ComponentReport cr;
    cr.index = k;
    cr.component = &comp;
    if (comp.kind != ComponentKind::cuspidal) {
      cr.skipped_reason = to_string(comp.kind) + " component";
      rep.components.push_back(std::move(cr));
      continue;
    }
    cr.analyzed = true;
    auto a = an_sequence(comp, ctx.tilde, p, rep.coefficient_terms);
    cr.an.assign(a.begin(), a.begin() + std::min<std::ptrdiff_t>(std::ptrdiff_t(a.size()), 31));
    cr.conditions = alpha_and_conditions(comp, a, p, sigma, opt.tol.fit);
    cr.lift = e_f_vector(comp, lift, ctx.tilde.heights, T, opt.d_max);
    auto twice = e_f_vector(comp, lift, ctx.tilde.heights, 2 * T, opt.d_max);
    cr.depth_stable = detail::same_coeffs(cr.lift, twice, opt.d_max);
    if (!cr.depth_stable) throw PrecisionError("lift coefficients differ between depth T and 2T");
    if (tables) cr.table = gross_table(a, cr.lift, cr.conditions, p, sigma, opt.d_max, opt.tol);
    rep.components.push_back(std::move(cr));
  }
  return rep;
}

}  // namespace quatlift
