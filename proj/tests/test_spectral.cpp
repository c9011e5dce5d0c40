#include <gtest/gtest.h>

#include "support.hpp"

using namespace quatlift;
using namespace quatlift::testing;

namespace {

const PrimeContext& context(Int p) {
  static std::map<Int, std::unique_ptr<PrimeContext>> cache;
  auto& slot = cache[p];
  if (!slot) slot = std::make_unique<PrimeContext>(prepare(p));
  return *slot;
}

std::vector<const IsotypicComponent*> cuspidal(const PrimeContext& ctx) {
  std::vector<const IsotypicComponent*> out;
  for (const auto& c : ctx.components)
    if (c.kind == ComponentKind::cuspidal) out.push_back(&c);
  return out;
}

// 11a: y^2 + y = x^3 - x^2 - 10x - 20
Int curve11_ap(Int q) { return q + 1 - count_points(q, 0, -1, 1, -10, -20); }

}  // namespace

TEST(Spectral, SevenHasTheConductor49Form) {
  const auto& ctx = context(7);
  auto cs = cuspidal(ctx);
  ASSERT_EQ(cs.size(), 1u);
  const auto& f = *cs.front();
  EXPECT_TRUE(f.exact);
  for (Int q : {2, 3, 5, 11, 13}) EXPECT_EQ(f.eigenvalue(q), double(curve49_ap(q))) << q;
}

TEST(Spectral, SevenComponentKinds) {
  const auto& ctx = context(7);
  std::map<ComponentKind, std::size_t> dims;
  for (const auto& c : ctx.components) dims[c.kind] += c.dim();
  EXPECT_EQ(dims[ComponentKind::eisenstein], 1u);
  EXPECT_EQ(dims[ComponentKind::twisted_eisenstein], 1u);
  EXPECT_EQ(dims[ComponentKind::cuspidal], 2u);
  for (const auto& c : ctx.components)
    if (c.kind == ComponentKind::twisted_eisenstein)
      for (Int q : {2, 3, 5, 11, 13}) EXPECT_EQ(c.eigenvalue(q), double(legendre(q, 7) * (q + 1)));
}

TEST(Spectral, CoefficientsMatchPointCounts) {
  const auto& ctx = context(7);
  auto a = an_sequence(*cuspidal(ctx).front(), ctx.tilde, 7, 300);
  auto ref = curve49_an(300);
  for (Int n = 1; n <= 300; ++n) EXPECT_EQ(a[std::size_t(n)], ref[std::size_t(n)]) << n;
  EXPECT_EQ(a[6], a[2] * a[3]);
  EXPECT_EQ(a[4], a[2] * a[2] - 2);
  EXPECT_EQ(a[7], 0.0);
}

TEST(Spectral, CoefficientsFromPrimesAgree) {
  for (Int p : {7, 11, 13}) {
    const auto& ctx = context(p);
    for (const auto* c : cuspidal(ctx)) {
      auto a = an_sequence(*c, ctx.tilde, p, 120);
      std::vector<double> primes(121, 0.0);
      for (Int q : primes_up_to(120)) primes[std::size_t(q)] = a[std::size_t(q)];
      auto b = an_from_primes(primes, p, 120);
      for (Int n = 1; n <= 120; ++n) EXPECT_NEAR(a[std::size_t(n)], b[std::size_t(n)], 1e-6) << p << " " << n;
      for (std::size_t k = 0; k < c->primes.size(); ++k)
        EXPECT_NEAR(a[std::size_t(c->primes[k])], c->eigenvalues[k], 1e-8);
    }
  }
}

TEST(Spectral, DecompositionIsComplete) {
  for (Int p : {7, 11, 13}) {
    const auto& ctx = context(p);
    std::size_t total = 0;
    for (const auto& c : ctx.components) total += c.dim();
    EXPECT_EQ(total, ctx.tilde.size());
    EXPECT_LT(reconstruction_error(ctx.components), 1e-9);
    for (const auto* c : cuspidal(ctx)) EXPECT_TRUE(c->dim() == 1 || c->dim() == 2) << p;
  }
}

TEST(Spectral, ComponentsAreHeightOrthogonal) {
  for (Int p : {7, 11}) {
    const auto& ctx = context(p);
    const auto& h = ctx.tilde.heights;
    for (std::size_t x = 0; x < ctx.components.size(); ++x)
      for (std::size_t y = x + 1; y < ctx.components.size(); ++y)
        for (const auto& u : ctx.components[x].float_basis)
          for (const auto& v : ctx.components[y].float_basis) {
            double s = 0, nu = 0, nv = 0;
            for (std::size_t i = 0; i < u.size(); ++i) {
              s += u[i] * v[i] * double(h[i]);
              nu += u[i] * u[i] * double(h[i]);
              nv += v[i] * v[i] * double(h[i]);
            }
            EXPECT_LT(std::abs(s), 1e-9 * std::sqrt(nu * nv));
          }
  }
}

TEST(Spectral, BasisVectorsAreEigenvectors) {
  const auto& ctx = context(11);
  for (const auto& c : ctx.components)
    for (std::size_t k = 0; k < c.primes.size(); ++k) {
      const auto& B = ctx.tilde_brandt[c.primes[k]];
      for (const auto& v : c.float_basis)
        for (std::size_t j = 0; j < v.size(); ++j) {
          double s = 0;
          for (std::size_t i = 0; i < v.size(); ++i) s += double(B(j, i)) * v[i];
          EXPECT_NEAR(s, c.eigenvalues[k] * v[j], 1e-8);
        }
    }
}

TEST(Spectral, ElevenOldAndTwistedForms) {
  const auto& ctx = context(11);
  ASSERT_EQ(ctx.maximal_components.size(), 2u);
  bool old = false, twist = false;
  for (const auto& c : ctx.components) {
    bool is_11a = true, is_twist = true;
    for (Int q : {2, 3, 5, 7, 13}) {
      is_11a = is_11a && c.eigenvalue(q) == double(curve11_ap(q));
      is_twist = is_twist && c.eigenvalue(q) == double(legendre(q, 11) * curve11_ap(q));
    }
    if (is_11a) {
      EXPECT_EQ(c.kind, ComponentKind::old);
      old = true;
    }
    if (is_twist) {
      EXPECT_TRUE(c.quadratic_twist);
      twist = true;
    }
  }
  EXPECT_TRUE(old);
  EXPECT_TRUE(twist);
}

TEST(Spectral, LiftVectorIgnoresBasisScaling) {
  const auto& ctx = context(7);
  const auto& f = *cuspidal(ctx).front();
  LiftForms lift(ctx.tower, ctx.tilde, ctx.tower.oprime(1), 4 * default_depth(7));
  auto base = e_f_vector(f, lift, ctx.tilde.heights, default_depth(7), 150);
  IsotypicComponent g = f;
  for (auto& v : g.basis)
    for (auto& x : v) x *= -3;
  for (auto& v : g.float_basis)
    for (auto& x : v) x *= -3;
  std::swap(g.basis[0], g.basis[1]);
  std::swap(g.float_basis[0], g.float_basis[1]);
  auto scaled = e_f_vector(g, lift, ctx.tilde.heights, default_depth(7), 150);
  EXPECT_EQ(base.zero, scaled.zero);
  EXPECT_EQ(base.vector, scaled.vector);
  EXPECT_EQ(base.coeffs, scaled.coeffs);
}

TEST(Spectral, HeckePrimesSkipTheDiscriminant) {
  EXPECT_EQ(hecke_primes(7, 13), (std::vector<Int>{2, 3, 5, 11, 13}));
  EXPECT_EQ(hecke_primes(49, 13), (std::vector<Int>{2, 3, 5, 11, 13}));
}
