#ifndef HJET_MATRIX_HPP_
#define HJET_MATRIX_HPP_

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjet/multipoly.hpp"
#include "hjet/ratfunc.hpp"
#include "hjet/rational.hpp"

namespace hjet {

// Dense row-major matrix over an exact scalar ring (Rational or MultiPoly).
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(Rational(0))) {}
  Matrix(size_t rows, size_t cols, const S& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<S>> rows);

  static Matrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  S& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  S& at(size_t r, size_t c);
  const S& at(size_t r, size_t c) const;

  Matrix transpose() const;
  Matrix block(size_t r0, size_t c0, size_t nrows, size_t ncols) const;
  void set_block(size_t r0, size_t c0, const Matrix& b);
  Matrix select_columns(const std::vector<size_t>& cols) const;
  Matrix select_rows(const std::vector<size_t>& rows) const;
  std::vector<S> column(size_t c) const;
  std::vector<S> row(size_t r) const;
  void swap_rows(size_t a, size_t b);
  bool is_zero() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
  Matrix scaled(const S& s) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static Matrix multiply(const Matrix& a, const Matrix& b);

  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<S> data_;
};

using QMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<MultiPoly>;

template <class S>
Matrix<S>::Matrix(std::initializer_list<std::initializer_list<S>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (const auto& v : r) data_.push_back(v);
  }
}

template <class S>
Matrix<S> Matrix<S>::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = S(Rational(1));
  return m;
}

template <class S>
S& Matrix<S>::at(size_t r, size_t c) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return (*this)(r, c);
}

template <class S>
const S& Matrix<S>::at(size_t r, size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return (*this)(r, c);
}

template <class S>
Matrix<S> Matrix<S>::transpose() const {
  Matrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class S>
Matrix<S> Matrix<S>::block(size_t r0, size_t c0, size_t nrows, size_t ncols) const {
  if (r0 + nrows > rows_ || c0 + ncols > cols_) throw std::out_of_range("block out of range");
  Matrix b(nrows, ncols);
  for (size_t i = 0; i < nrows; ++i)
    for (size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

template <class S>
void Matrix<S>::set_block(size_t r0, size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("block out of range");
  for (size_t i = 0; i < b.rows_; ++i)
    for (size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

template <class S>
Matrix<S> Matrix<S>::select_columns(const std::vector<size_t>& cols) const {
  Matrix b(rows_, cols.size());
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols.size(); ++j) b(i, j) = at(i, cols[j]);
  return b;
}

template <class S>
Matrix<S> Matrix<S>::select_rows(const std::vector<size_t>& rows) const {
  Matrix b(rows.size(), cols_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols_; ++j) b(i, j) = at(rows[i], j);
  return b;
}

template <class S>
std::vector<S> Matrix<S>::column(size_t c) const {
  std::vector<S> v;
  v.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i) v.push_back(at(i, c));
  return v;
}

template <class S>
std::vector<S> Matrix<S>::row(size_t r) const {
  std::vector<S> v;
  v.reserve(cols_);
  for (size_t j = 0; j < cols_; ++j) v.push_back(at(r, j));
  return v;
}

template <class S>
void Matrix<S>::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

template <class S>
bool Matrix<S>::is_zero() const {
  for (const auto& v : data_)
    if (!hjet::is_zero(v)) return false;
  return true;
}

template <class S>
Matrix<S>& Matrix<S>::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in +");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <class S>
Matrix<S>& Matrix<S>::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch in -");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <class S>
Matrix<S> Matrix<S>::scaled(const S& s) const {
  Matrix r = *this;
  for (auto& v : r.data_) v = v * s;
  return r;
}

template <class S>
Matrix<S> Matrix<S>::multiply(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in *");
  Matrix r(a.rows_, b.cols_);
  for (size_t i = 0; i < a.rows_; ++i) {
    for (size_t k = 0; k < a.cols_; ++k) {
      const S& aik = a(i, k);
      if (hjet::is_zero(aik)) continue;
      for (size_t j = 0; j < b.cols_; ++j) {
        if (hjet::is_zero(b(k, j))) continue;
        r(i, j) += aik * b(k, j);
      }
    }
  }
  return r;
}

// Applies `f` entrywise, e.g. to evaluate a polynomial matrix at a point.
template <class T, class S, class F>
Matrix<T> map_entries(const Matrix<S>& m, F&& f) {
  Matrix<T> r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = f(m(i, j));
  return r;
}

template <class S>
std::string to_string(const Matrix<S>& m) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    out << (i ? ", [" : "[");
    for (size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ", ";
      if constexpr (std::is_same_v<S, Rational>) {
        out << hjet::to_string(m(i, j));
      } else {
        out << m(i, j).to_string();
      }
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

}  // namespace hjet

#endif  // HJET_MATRIX_HPP_
