#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hjet/jets.hpp"
#include "hjet/linalg.hpp"

using namespace hjet;
using fixtures::q;

namespace {

UniPoly up(std::initializer_list<Rational> c) { return UniPoly(std::vector<Rational>(c)); }

PolyCurve contact_curve() {
  return PolyCurve({up({0, 1}), up({0, 1}), up({0, 0, q(1, 2)})});
}

QVector random_tangent(std::mt19937_64& rng, const Distribution& d) {
  QMatrix k = kernel_basis(d.coframe_at_base());
  std::uniform_int_distribution<int> c(-3, 3);
  QVector v(d.ambient_dim(), Rational(0));
  for (size_t i = 0; i < k.cols(); ++i) {
    const Rational w = c(rng);
    for (size_t mu = 0; mu < v.size(); ++mu) v[mu] += w * k(mu, i);
  }
  return v;
}

std::vector<std::vector<Rational>> random_free(std::mt19937_64& rng, size_t levels, size_t n) {
  std::uniform_int_distribution<int> c(-3, 3);
  std::vector<std::vector<Rational>> f(levels);
  for (auto& v : f)
    for (size_t i = 0; i < n; ++i) v.push_back(Rational(c(rng)));
  return f;
}

}  // namespace

TEST(PolyCurve, JetMatchesDerivatives) {
  QJet j = contact_curve().jet(0, 3);
  EXPECT_EQ(j.d[0], (QVector{0, 0, 0}));
  EXPECT_EQ(j.d[1], (QVector{1, 1, 0}));
  EXPECT_EQ(j.d[2], (QVector{0, 0, 1}));
  EXPECT_EQ(j.d[3], (QVector{0, 0, 0}));
  QJet j2 = contact_curve().jet(2, 1);
  EXPECT_EQ(j2.d[0], (QVector{2, 2, 2}));
  EXPECT_EQ(j2.d[1], (QVector{1, 1, 2}));
}

TEST(PullbackJet, Examples) {
  Distribution c = fixtures::contact();
  Matrix<Rational> horiz = pullback_jet(c.coframe(), contact_curve().jet(0, 3));
  EXPECT_EQ(horiz.cols(), 3u);
  EXPECT_TRUE(horiz.is_zero());

  PolyCurve constant({UniPoly(q(1)), UniPoly(q(2)), UniPoly(q(3))});
  EXPECT_TRUE(pullback_jet(c.coframe(), constant.jet(0, 4)).is_zero());

  PolyCurve vertical({UniPoly(), UniPoly(), up({0, 1})});
  Matrix<Rational> v = pullback_jet(c.coframe(), vertical.jet(0, 3));
  EXPECT_EQ(v, (QMatrix{{1, 0, 0}}));

  EXPECT_THROW(pullback_jet(c.coframe(), contact_curve().jet(0, 0)), JetError);
}

TEST(PullbackJet, AgreesWithComposedPolynomial) {
  // Oracle: lambda(u) . u' as an explicit polynomial in t, differentiated.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Distribution d = fixtures::random_distribution(rng, 4, 2);
    std::vector<UniPoly> comps;
    for (int mu = 0; mu < 4; ++mu) comps.push_back(up({c(rng), c(rng), c(rng), c(rng)}));
    PolyCurve u(comps);
    PolyCurve du = u.derivative();
    const Rational t0 = q(c(rng), 2);
    Matrix<Rational> pb = pullback_jet(d.coframe(), u.jet(t0, 5));
    for (size_t s = 0; s < 2; ++s) {
      UniPoly g;
      for (size_t mu = 0; mu < 4; ++mu) {
        UniPoly lam;
        for (const auto& [mono, coeff] : d.coframe()[s][mu].terms()) {
          UniPoly term(coeff);
          for (const auto& [var, e] : mono.factors())
            for (uint32_t i = 0; i < e; ++i) term = term * u[var];
          lam += term;
        }
        g += lam * du[mu];
      }
      for (size_t k = 0; k <= 4; ++k) {
        EXPECT_EQ(pb(s, k), g.evaluate(t0));
        g = g.derivative();
      }
    }
  }
}

TEST(TangencySolve, Examples) {
  Distribution c = fixtures::contact();
  QJet j = tangency_solve<Rational>(c, {1, 1, 0}, 1);
  ASSERT_EQ(j.order(), 2u);
  EXPECT_EQ(j.d[2], (QVector{0, 0, 1}));

  QJet z = tangency_solve<Rational>(c, {0, 0, 0}, 4);
  for (size_t k = 1; k <= 5; ++k) EXPECT_EQ(z.d[k], fixtures::zeros(3));

  EXPECT_THROW(tangency_solve<Rational>(c, {0, 0, 1}, 2), JetError);
  EXPECT_THROW(tangency_solve<Rational>(c, {1, 1}, 2), JetError);
}

TEST(TangencySolve, PullbackVanishesOnRandomInstances) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const size_t dim = 3 + trial % 3;
    const size_t p = 1 + trial % 2;
    Distribution d = fixtures::random_distribution(rng, dim, p);
    const size_t alpha = 5;
    QJet j = tangency_solve<Rational>(d, random_tangent(rng, d), alpha, random_free(rng, alpha, dim - p));
    ASSERT_EQ(j.order(), alpha + 1);
    EXPECT_TRUE(pullback_jet(d.coframe(), j).is_zero()) << "trial " << trial;
  }
}

TEST(TangencySolve, AffineInTheFreeChoice) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    Distribution d = fixtures::random_distribution(rng, 4, 2);
    const QVector first = random_tangent(rng, d);
    auto free_a = random_free(rng, 4, 2);
    auto free_b = free_a;
    const size_t level = 1 + trial % 4;
    free_b[level - 1] = random_free(rng, 1, 2)[0];
    QJet a = tangency_solve<Rational>(d, first, 4, free_a).truncated(level + 1);
    QJet b = tangency_solve<Rational>(d, first, 4, free_b).truncated(level + 1);
    for (size_t k = 0; k <= level; ++k) EXPECT_EQ(a.d[k], b.d[k]);
    QMatrix diff(4, 1);
    for (size_t mu = 0; mu < 4; ++mu) diff(mu, 0) = a.d[level + 1][mu] - b.d[level + 1][mu];
    EXPECT_TRUE((d.coframe_at_base() * diff).is_zero());
  }
}

TEST(TangencySolve, Deterministic) {
  Distribution e = fixtures::engel();
  EXPECT_EQ(tangency_solve<Rational>(e, {1, 0, 0, 1}, 5), tangency_solve<Rational>(e, {1, 0, 0, 1}, 5));
}

TEST(SymbolicFiber, ContactOneLevel) {
  Distribution c = fixtures::contact();
  AdaptedFrameData f = adapted_frame(c, flag_at_point(c, 6));
  TauAssignment tau;
  tau.set(1, TauLabel::tau(1, 1));
  PolyJet j = symbolic_fiber(c, {1, 1, 0}, 1, tau, &f);
  // V_1 = (0, 0, 1) and tau^{1,1} = d_x at the origin.
  MultiPoly x1 = MultiPoly::variable(1, 0);
  EXPECT_EQ(j.d[2][0], x1);
  EXPECT_TRUE(j.d[2][1].is_zero());
  EXPECT_EQ(j.d[2][2], MultiPoly(Rational(1), 1));
}

TEST(SymbolicFiber, StructureOnEngel) {
  Distribution e = fixtures::engel();
  AdaptedFrameData f = adapted_frame(e, flag_at_point(e, 8));
  TauAssignment tau;
  tau.set(1, TauLabel::tau(1, 1));
  tau.set(2, TauLabel::tau(2, 1));
  tau.set(4, TauLabel::tau(1, 1));
  const size_t alpha = 5;
  const QVector first = {1, 0, 0, 1};
  PolyJet j = symbolic_fiber(e, first, alpha, tau, &f);
  for (size_t qq = 1; qq <= alpha; ++qq) {
    const QVector t = tau.resolve(static_cast<int>(qq), &f, 4);
    for (size_t mu = 0; mu < 4; ++mu) {
      EXPECT_EQ(j.d[qq + 1][mu].coefficient_of(static_cast<uint32_t>(qq - 1), 1).constant_term(), t[mu]);
      for (size_t k = 0; k <= qq; ++k) EXPECT_FALSE(j.d[k][mu].involves(static_cast<uint32_t>(qq - 1)));
    }
  }
  QJet zero = specialize(j, std::vector<Rational>(alpha, Rational(0)));
  EXPECT_EQ(zero.d, tangency_solve<Rational>(e, first, alpha).d);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-9, 9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Rational> xs;
    for (size_t i = 0; i < alpha; ++i) xs.push_back(Rational(c(rng)));
    EXPECT_TRUE(pullback_jet(e.coframe(), specialize(j, xs)).is_zero());
  }
  EXPECT_TRUE(pullback_jet(e.coframe(), j).is_zero());
}

TEST(SymbolicFiber, RejectsTauOutsideD) {
  Distribution c = fixtures::contact();
  TauAssignment tau;
  tau.set(1, TauLabel::explicit_vector({0, 0, 1}));
  EXPECT_THROW(symbolic_fiber(c, {1, 1, 0}, 2, tau, nullptr), JetError);
  TauAssignment none;
  PolyJet j = symbolic_fiber(c, {1, 1, 0}, 2, none, nullptr);
  EXPECT_EQ(specialize(j, {0, 0}).d, tangency_solve<Rational>(c, {1, 1, 0}, 2).d);
}
