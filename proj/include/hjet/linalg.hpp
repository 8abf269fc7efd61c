#ifndef HJET_LINALG_HPP_
#define HJET_LINALG_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "hjet/matrix.hpp"

namespace hjet {

class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result of fraction-free (Bareiss) echelon reduction.
template <class R>
struct BareissResult {
  size_t rank = 0;
  std::vector<size_t> pivot_cols;
  // Determinant when the input is square; zero if singular.
  R det;
};

// Fraction-free echelon reduction over an integral domain R. `exact_div(a, b)`
// must return a / b whenever b divides a. Each step keeps the entries equal
// to minors of the input, so no fractions appear.
template <class R, class ExactDiv>
BareissResult<R> bareiss(Matrix<R> m, ExactDiv exact_div);

// Rank over Q by fraction-free elimination on the row-scaled integer matrix.
size_t exact_rank(const QMatrix& m);
Rational determinant(const QMatrix& m);

// Exact rank and determinant over Q(X) for polynomial matrices.
size_t symbolic_rank(const PolyMatrix& m);
MultiPoly determinant(const PolyMatrix& m);

QMatrix evaluate(const PolyMatrix& m, std::span<const Rational> point);

// Lower bound for the generic rank of a polynomial matrix: the maximum exact
// rank over `trials` evaluations at uniform integer points in [1, bound].
size_t rank_probabilistic(const PolyMatrix& m, int trials, uint64_t bound, std::mt19937_64& rng);

// Upper bound on the probability that rank_probabilistic under-reports the
// generic rank, (deg / bound)^trials with deg the largest possible minor
// degree. Reporting only.
double rank_failure_bound(const PolyMatrix& m, int trials, uint64_t bound);

// Reduced row echelon form over a field with leftmost pivots.
template <class F>
struct Rref {
  Matrix<F> reduced;
  std::vector<size_t> pivots;
  // transform * input == reduced
  Matrix<F> transform;
};

template <class F>
Rref<F> rref(const Matrix<F>& m);

template <class F>
size_t rank(const Matrix<F>& m) {
  return rref(m).pivots.size();
}

// R with M * R = Id for full-row-rank M: rows of R at the leftmost pivot
// columns hold the elimination transform, rows at free columns are zero.
// Throws RankDeficientError otherwise.
template <class F>
Matrix<F> right_inverse(const Matrix<F>& m);

// Columns form a basis of ker M: one vector per free column of the RREF,
// with a 1 in that column.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m);

// --- implementation ---

template <class R, class ExactDiv>
BareissResult<R> bareiss(Matrix<R> m, ExactDiv exact_div) {
  BareissResult<R> result;
  const size_t rows = m.rows();
  const size_t cols = m.cols();
  R prev = R(1);
  bool negate = false;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = rows;
    for (size_t i = r; i < rows; ++i) {
      if (is_zero(m(i, c))) continue;
      if constexpr (std::is_same_v<R, MultiPoly>) {
        if (pivot == rows || m(i, c).num_terms() < m(pivot, c).num_terms()) pivot = i;
      } else {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != r) {
      m.swap_rows(pivot, r);
      negate = !negate;
    }
    const R p = m(r, c);
    for (size_t i = r + 1; i < rows; ++i) {
      const R f = m(i, c);
      for (size_t j = c + 1; j < cols; ++j) {
        R v = p * m(i, j);
        if (!is_zero(f) && !is_zero(m(r, j))) v -= f * m(r, j);
        m(i, j) = exact_div(v, prev);
      }
      m(i, c) = R(0);
    }
    prev = p;
    result.pivot_cols.push_back(c);
    ++r;
  }
  result.rank = r;
  if (rows == cols && r == rows && rows > 0) {
    result.det = negate ? R(-m(rows - 1, cols - 1)) : m(rows - 1, cols - 1);
  } else if (rows == cols && rows == 0) {
    result.det = R(1);
  } else {
    result.det = R(0);
  }
  return result;
}

template <class F>
Rref<F> rref(const Matrix<F>& input) {
  const size_t rows = input.rows();
  const size_t cols = input.cols();
  Rref<F> out{input, {}, Matrix<F>::identity(rows)};
  Matrix<F>& m = out.reduced;
  Matrix<F>& t = out.transform;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = rows;
    for (size_t i = r; i < rows; ++i) {
      if (!is_zero(m(i, c))) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    m.swap_rows(pivot, r);
    t.swap_rows(pivot, r);
    const F inv = F(Rational(1)) / m(r, c);
    for (size_t j = 0; j < cols; ++j) m(r, j) = m(r, j) * inv;
    for (size_t j = 0; j < rows; ++j) t(r, j) = t(r, j) * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const F f = m(i, c);
      for (size_t j = 0; j < cols; ++j)
        if (!is_zero(m(r, j))) m(i, j) = m(i, j) - f * m(r, j);
      for (size_t j = 0; j < rows; ++j)
        if (!is_zero(t(r, j))) t(i, j) = t(i, j) - f * t(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

template <class F>
Matrix<F> right_inverse(const Matrix<F>& m) {
  const Rref<F> red = rref(m);
  if (red.pivots.size() != m.rows()) {
    throw RankDeficientError("right_inverse: matrix does not have full row rank");
  }
  Matrix<F> r(m.cols(), m.rows());
  for (size_t i = 0; i < red.pivots.size(); ++i)
    for (size_t j = 0; j < m.rows(); ++j) r(red.pivots[i], j) = red.transform(i, j);
  return r;
}

template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
  const Rref<F> red = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t p : red.pivots) is_pivot[p] = true;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<F> k(m.cols(), free_cols.size());
  for (size_t f = 0; f < free_cols.size(); ++f) {
    k(free_cols[f], f) = F(Rational(1));
    for (size_t i = 0; i < red.pivots.size(); ++i) k(red.pivots[i], f) = -red.reduced(i, free_cols[f]);
  }
  return k;
}

}  // namespace hjet

#endif  // HJET_LINALG_HPP_
