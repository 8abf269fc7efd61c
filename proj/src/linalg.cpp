#include "hjet/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hjet {
namespace {

Matrix<Integer> to_integer_rows(const QMatrix& m) {
  Matrix<Integer> out(m.rows(), m.cols(), Integer(0));
  for (size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (size_t j = 0; j < m.cols(); ++j) {
      Rational scaled = m(i, j) * l;
      out(i, j) = scaled.get_num();
    }
  }
  return out;
}

Integer integer_divexact(const Integer& a, const Integer& b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace


size_t exact_rank(const QMatrix& m) {
  if (m.empty()) return 0;
  return bareiss(to_integer_rows(m), integer_divexact).rank;
}

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return Rational(1);
  Rational scale = 1;
  for (size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    scale *= l;
  }
  const auto res = bareiss(to_integer_rows(m), integer_divexact);
  return Rational(res.det) / scale;
}

size_t symbolic_rank(const PolyMatrix& m) {
  if (m.empty()) return 0;
  return bareiss(m, exact_divide).rank;
}

MultiPoly determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() == 0) return MultiPoly(Rational(1));
  return bareiss(m, exact_divide).det;
}

QMatrix evaluate(const PolyMatrix& m, std::span<const Rational> point) {
  return map_entries<Rational>(m, [&](const MultiPoly& p) { return p.evaluate(point); });
}

size_t rank_probabilistic(const PolyMatrix& m, int trials, uint64_t bound, std::mt19937_64& rng) {
  if (trials < 1) throw std::invalid_argument("rank_probabilistic: trials must be >= 1");
  if (bound < 2) throw std::invalid_argument("rank_probabilistic: bound must be >= 2");
  uint32_t nvars = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) nvars = std::max(nvars, m(i, j).nvars());
  std::uniform_int_distribution<uint64_t> dist(1, bound);
  const size_t full = std::min(m.rows(), m.cols());
  size_t best = 0;
  std::vector<Rational> point(nvars);
  for (int t = 0; t < trials && best < full; ++t) {
    for (auto& v : point) {
      const uint64_t x = dist(rng);
      Integer z;
      mpz_import(z.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
      v = Rational(z);
    }
    best = std::max(best, exact_rank(evaluate(m, point)));
  }
  return best;
}

double rank_failure_bound(const PolyMatrix& m, int trials, uint64_t bound) {
  double degree = 0;
  for (size_t i = 0; i < m.rows(); ++i) {
    uint32_t row_max = 0;
    for (size_t j = 0; j < m.cols(); ++j) row_max = std::max(row_max, m(i, j).total_degree());
    degree += row_max;
  }
  const double single = std::min(1.0, degree / static_cast<double>(bound));
  return std::pow(single, trials);
}

}  // namespace hjet
