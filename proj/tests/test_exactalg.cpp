#include <gtest/gtest.h>

#include <random>

#include "hjet/linalg.hpp"
#include "hjet/multipoly.hpp"
#include "hjet/poly_parse.hpp"
#include "hjet/ratfunc.hpp"
#include "hjet/rational.hpp"
#include "hjet/series.hpp"

using namespace hjet;

namespace {

using QSeries = TruncatedSeries<Rational>;

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

MultiPoly P(const std::string& s, uint32_t n = 3) { return parse_poly(s, indexed_names("y", n)); }

QSeries series(std::vector<Rational> c) { return QSeries(std::move(c)); }

// Oracle: substitute univariate polynomials into f by plain polynomial
// arithmetic, then read Taylor coefficients off repeated derivatives.
UniPoly substitute(const MultiPoly& f, const std::vector<UniPoly>& u) {
  UniPoly acc;
  for (const auto& [mono, c] : f.terms()) {
    UniPoly term(c);
    for (const auto& [var, e] : mono.factors())
      for (uint32_t k = 0; k < e; ++k) term = term * u[var];
    acc += term;
  }
  return acc;
}

Rational taylor_coefficient(UniPoly g, size_t k) {
  for (size_t i = 0; i < k; ++i) g = g.derivative();
  return g.evaluate(0) / Rational(factorial(static_cast<long>(k)));
}

MultiPoly random_poly(std::mt19937_64& rng, uint32_t nvars, uint32_t max_deg, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<uint32_t> var(0, nvars - 1);
  std::uniform_int_distribution<uint32_t> deg(0, max_deg);
  MultiPoly p = MultiPoly::zero(nvars);
  for (int t = 0; t < terms; ++t) {
    MultiPoly m(Rational(coef(rng)), nvars);
    uint32_t d = deg(rng);
    for (uint32_t i = 0; i < d; ++i) m = m * MultiPoly::variable(nvars, var(rng));
    p += m;
  }
  return p;
}

QMatrix random_qmatrix(std::mt19937_64& rng, size_t r, size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  QMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = Rational(d(rng));
  return m;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("6/4"), q(3, 2));
  EXPECT_EQ(parse_rational("-7"), q(-7));
  EXPECT_THROW(parse_rational("3/-6"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_EQ(to_string(q(-4, 6)), "-2/3");
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(3, -1), 0);
  EXPECT_EQ(binomial(3, 4), 0);
}

TEST(MultiPoly, ArithmeticAndDerivative) {
  MultiPoly f = P("(y1 + y2)^2 - 2*y1*y2");
  EXPECT_EQ(f, P("y1^2 + y2^2"));
  EXPECT_EQ(f.derivative(0), P("2*y1"));
  EXPECT_EQ(f.total_degree(), 2u);
  EXPECT_TRUE((f - f).is_zero());
  EXPECT_EQ(P("1/2*y3 - 1/2*y3"), MultiPoly::zero(3));
  Rational pt[] = {q(1), q(2), q(3)};
  EXPECT_EQ(P("y1*y2*y3 + 1/3").evaluate(pt), q(19, 3));
  EXPECT_EQ(P("y1*y2 + y3").specialize({{1, q(5)}}), P("5*y1 + y3"));
  EXPECT_EQ(P("y1^3*y2 + y1*y2").coefficient_of(0, 1), P("y2"));
}

TEST(MultiPoly, ExactDivision) {
  MultiPoly a = P("y1^2 - y2^2");
  EXPECT_EQ(exact_divide(a, P("y1 - y2")), P("y1 + y2"));
  EXPECT_THROW(exact_divide(a, P("y1 + 1")), std::domain_error);
}

TEST(PolyParse, Errors) {
  try {
    P("y1 + * y2");
    FAIL();
  } catch (const PolyParseError& e) {
    EXPECT_EQ(e.column(), 6u);
  }
  EXPECT_THROW(P("y9"), PolyParseError);
  EXPECT_THROW(P("(y1"), PolyParseError);
  EXPECT_THROW(P("y1^-1"), PolyParseError);
}

TEST(Series, ComposeExamples) {
  std::vector<QSeries> u = {series({0, 1})};
  EXPECT_EQ(series_compose<Rational>(P("y1", 1), u), series({0, 1}));

  std::vector<QSeries> v = {series({0, 1, 0}), series({1, 1, 0})};
  EXPECT_EQ(series_compose<Rational>(P("y1*y2", 2), v), series({0, 1, 1}));

  std::vector<QSeries> w = {series({1, 1, q(1, 2)})};
  EXPECT_EQ(series_compose<Rational>(P("y1^2", 1), w), series({1, 2, 2}));
}

TEST(Series, ComposeErrors) {
  std::vector<QSeries> u = {series({0, 1})};
  EXPECT_THROW(series_compose<Rational>(P("y1*y2", 2), u), std::invalid_argument);
  std::vector<QSeries> mixed = {series({0, 1}), series({0, 1, 2})};
  EXPECT_THROW(series_compose<Rational>(P("y1*y2", 2), mixed), std::invalid_argument);
}

TEST(Series, ComposeMatchesFormalDifferentiation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const uint32_t n = 1 + trial % 3;
    MultiPoly f = random_poly(rng, n, 3, 4);
    std::vector<QSeries> u;
    std::vector<UniPoly> polys;
    for (uint32_t i = 0; i < n; ++i) {
      std::vector<Rational> coeffs;
      for (int k = 0; k <= 5; ++k) coeffs.push_back(Rational(c(rng)));
      u.push_back(series(coeffs));
      polys.push_back(UniPoly(coeffs));
    }
    QSeries s = series_compose<Rational>(f, u);
    UniPoly g = substitute(f, polys);
    for (size_t k = 0; k <= 5; ++k) EXPECT_EQ(s[k], taylor_coefficient(g, k)) << "trial " << trial << " k " << k;
  }
}

TEST(Series, CoefficientDependsOnlyOnLowerCoefficients) {
  MultiPoly f = P("y1^2*y2 + 3*y2", 2);
  std::vector<QSeries> u = {series({1, 2, 3, 4}), series({-1, 1, 0, 2})};
  std::vector<QSeries> v = {series({1, 2, 9, 9}), series({-1, 1, 5, 5})};
  QSeries a = series_compose<Rational>(f, u), b = series_compose<Rational>(f, v);
  EXPECT_EQ(a[0], b[0]);
  EXPECT_EQ(a[1], b[1]);
  EXPECT_NE(a[2], b[2]);
}

TEST(Series, DerivativesAndHorner) {
  QSeries e = QSeries::from_derivatives({1, 1, 1, 1});
  EXPECT_EQ(e, series({1, 1, q(1, 2), q(1, 6)}));
  EXPECT_EQ(e.derivative(), series({1, 1, q(1, 2)}));
  EXPECT_EQ(e.derivative_at(3), q(1));
  // 1/(1-x) composed with x = t + t^2 is 1 + t + 2t^2 + 3t^3.
  QSeries geom = series({1, 1, 1, 1});
  EXPECT_EQ(series_compose(geom, series({0, 1, 1, 0})), series({1, 1, 2, 3}));
  EXPECT_THROW(series_compose(geom, series({1, 1, 0, 0})), std::invalid_argument);
}

TEST(Series, PolynomialCoefficients) {
  TruncatedSeries<MultiPoly> x({MultiPoly(0), MultiPoly::variable(1, 0)});
  TruncatedSeries<MultiPoly> sq = x * x;
  EXPECT_TRUE(sq[1].is_zero());
  TruncatedSeries<MultiPoly> y({MultiPoly(1), MultiPoly::variable(1, 0), MultiPoly(0)});
  TruncatedSeries<MultiPoly> y2 = y * y;
  EXPECT_EQ(y2[1], P("2*y1", 1));
  EXPECT_EQ(y2[2], P("y1^2", 1));
}

TEST(Rank, Examples) {
  EXPECT_EQ(exact_rank(QMatrix::identity(2)), 2u);
  EXPECT_EQ(exact_rank(QMatrix{{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(exact_rank(QMatrix{{-1, 1, 0}, {0, 0, 1}}), 2u);
  EXPECT_EQ(exact_rank(QMatrix(0, 3)), 0u);
  EXPECT_EQ(exact_rank(QMatrix{{q(1, 2), q(1, 3)}, {q(3, 2), 1}}), 1u);
}

TEST(Rank, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    QMatrix m = random_qmatrix(rng, 3, 3, -6, 6);
    Rational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    EXPECT_EQ(determinant(m), cof);
  }
}

TEST(Rank, InvariantUnderPermutationAndScaling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t r = 2 + trial % 4, c = 2 + (trial * 7) % 5;
    QMatrix m = random_qmatrix(rng, r, c, -2, 2);
    if (trial % 3 == 0) m.set_block(r - 1, 0, m.block(0, 0, 1, c));
    const size_t base = exact_rank(m);
    EXPECT_EQ(base, rank(m));
    std::vector<size_t> rows(r), cols(c);
    for (size_t i = 0; i < r; ++i) rows[i] = r - 1 - i;
    for (size_t j = 0; j < c; ++j) cols[j] = (j + 1) % c;
    EXPECT_EQ(exact_rank(m.select_rows(rows).select_columns(cols)), base);
    QMatrix s = m;
    for (size_t j = 0; j < c; ++j) s(0, j) *= q(-3, 7);
    EXPECT_EQ(exact_rank(s), base);
  }
}

TEST(Rank, SymbolicAndProbabilistic) {
  MultiPoly x1 = MultiPoly::variable(2, 0);
  PolyMatrix a{{x1}};
  std::mt19937_64 rng(1);
  EXPECT_EQ(rank_probabilistic(a, 1, 100, rng), 1u);
  PolyMatrix b{{x1, x1}, {x1, x1}};
  EXPECT_EQ(rank_probabilistic(b, 5, 100, rng), 1u);
  EXPECT_EQ(symbolic_rank(b), 1u);
  EXPECT_THROW(rank_probabilistic(b, 0, 100, rng), std::invalid_argument);
  EXPECT_THROW(rank_probabilistic(b, 1, 1, rng), std::invalid_argument);

  MultiPoly x2 = MultiPoly::variable(2, 1);
  PolyMatrix c{{x1, x2}, {x2, x1}};
  EXPECT_EQ(determinant(c), x1 * x1 - x2 * x2);
  EXPECT_EQ(symbolic_rank(c), 2u);
}

TEST(Rank, ProbabilisticNeverExceedsEvaluatedRank) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    PolyMatrix m(3, 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) m(i, j) = random_poly(rng, 2, 2, 2);
    std::mt19937_64 a(trial), b(trial);
    const size_t pr = rank_probabilistic(m, 1, 50, a);
    std::uniform_int_distribution<uint64_t> d(1, 50);
    Rational pt[] = {Rational(static_cast<long>(d(b))), Rational(static_cast<long>(d(b)))};
    EXPECT_EQ(pr, exact_rank(evaluate(m, pt)));
    EXPECT_LE(pr, symbolic_rank(m));
  }
}

TEST(RightInverse, Examples) {
  EXPECT_EQ(right_inverse(QMatrix::identity(2)), QMatrix::identity(2));
  QMatrix e1 = right_inverse(QMatrix{{1, 0, 0}});
  EXPECT_EQ(e1, (QMatrix{{1}, {0}, {0}}));
  QMatrix contact = right_inverse(QMatrix{{0, 0, 1}});
  EXPECT_EQ(contact, (QMatrix{{0}, {0}, {1}}));
  EXPECT_THROW(right_inverse(QMatrix{{1, 2}, {2, 4}}), RankDeficientError);
}

TEST(RightInverse, ProductIsIdentity) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const size_t r = 1 + trial % 3, c = r + trial % 3;
    QMatrix m = random_qmatrix(rng, r, c, -3, 3);
    if (exact_rank(m) < r) {
      EXPECT_THROW(right_inverse(m), RankDeficientError);
      continue;
    }
    EXPECT_EQ(m * right_inverse(m), QMatrix::identity(r));
    QMatrix k = kernel_basis(m);
    EXPECT_EQ(k.cols(), c - r);
    EXPECT_TRUE((m * k).is_zero());
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(RatFunc, NormalizationAndCalculus) {
  UniPoly t = UniPoly::monomial(1);
  RatFunc f(t * t - UniPoly(1), t - UniPoly(1));
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f, RatFunc(t + UniPoly(1)));
  RatFunc g = RatFunc(UniPoly(1)) / RatFunc(t);
  EXPECT_EQ(g.derivative(), RatFunc(UniPoly(-1)) / RatFunc(t * t));
  EXPECT_EQ((g * RatFunc(t)), RatFunc(UniPoly(1)));
  EXPECT_THROW(g.evaluate(0), std::domain_error);
  EXPECT_EQ(g.evaluate(q(2)), q(1, 2));
}
