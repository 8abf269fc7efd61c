#ifndef HJET_SERIES_HPP_
#define HJET_SERIES_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include "hjet/multipoly.hpp"
#include "hjet/rational.hpp"

namespace hjet {

// c_0 + c_1 t + ... + c_d t^d modulo t^{d+1}, coefficients in S.
template <class S>
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1, S(Rational(0))) {}
  explicit TruncatedSeries(size_t order) : coeffs_(order + 1, S(Rational(0))) {}
  TruncatedSeries(size_t order, const S& constant) : TruncatedSeries(order) { coeffs_[0] = constant; }
  explicit TruncatedSeries(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  }
  // Taylor series from derivatives: c_k = derivs[k] / k!.
  static TruncatedSeries from_derivatives(const std::vector<S>& derivs);

  size_t order() const { return coeffs_.size() - 1; }
  const S& operator[](size_t k) const { return coeffs_.at(k); }
  S& operator[](size_t k) { return coeffs_.at(k); }
  const std::vector<S>& coefficients() const { return coeffs_; }
  // k-th derivative at the expansion point, k! c_k.
  S derivative_at(size_t k) const;
  bool is_constant() const;

  TruncatedSeries derivative() const;
  TruncatedSeries truncated(size_t order) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return multiply(a, b); }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) {
    for (auto& x : a.coeffs_) x = x * c;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, const S& c)
    requires(!std::is_same_v<S, Rational>)
  {
    for (auto& x : a.coeffs_) x = x * c;
    return a;
  }
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  static TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b);
  void check_order(const TruncatedSeries& o) const {
    if (o.order() != order()) throw std::invalid_argument("series truncation orders differ");
  }

  std::vector<S> coeffs_;
};

// Taylor expansion of f(u(t)) where f is a polynomial in y^1..y^N and
// u = (u^1..u^N) share one truncation order. Throws std::invalid_argument on
// arity or order mismatch.
template <class S>
TruncatedSeries<S> series_compose(const MultiPoly& f, std::span<const TruncatedSeries<S>> u);

// outer(inner(t)) for an inner series with zero constant term, by Horner.
template <class S>
TruncatedSeries<S> series_compose(const TruncatedSeries<S>& outer, const TruncatedSeries<S>& inner);

// --- implementation ---

template <class S>
TruncatedSeries<S> TruncatedSeries<S>::from_derivatives(const std::vector<S>& derivs) {
  std::vector<S> c;
  c.reserve(derivs.size());
  Integer fact = 1;
  for (size_t k = 0; k < derivs.size(); ++k) {
    if (k > 0) fact *= static_cast<unsigned long>(k);
    c.push_back(derivs[k] * Rational(Integer(1), fact));
  }
  return TruncatedSeries(std::move(c));
}

template <class S>
S TruncatedSeries<S>::derivative_at(size_t k) const {
  return coeffs_.at(k) * Rational(factorial(static_cast<long>(k)));
}

template <class S>
bool TruncatedSeries<S>::is_constant() const {
  for (size_t k = 1; k < coeffs_.size(); ++k)
    if (!hjet::is_zero(coeffs_[k])) return false;
  return true;
}

template <class S>
TruncatedSeries<S> TruncatedSeries<S>::derivative() const {
  if (order() == 0) throw std::invalid_argument("derivative of an order-0 series");
  std::vector<S> c;
  c.reserve(order());
  for (size_t k = 1; k < coeffs_.size(); ++k) c.push_back(coeffs_[k] * Rational(static_cast<long>(k)));
  return TruncatedSeries(std::move(c));
}

template <class S>
TruncatedSeries<S> TruncatedSeries<S>::truncated(size_t new_order) const {
  if (new_order > order()) throw std::invalid_argument("cannot raise truncation order");
  return TruncatedSeries(std::vector<S>(coeffs_.begin(), coeffs_.begin() + new_order + 1));
}

template <class S>
TruncatedSeries<S>& TruncatedSeries<S>::operator+=(const TruncatedSeries& o) {
  check_order(o);
  for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

template <class S>
TruncatedSeries<S>& TruncatedSeries<S>::operator-=(const TruncatedSeries& o) {
  check_order(o);
  for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

template <class S>
TruncatedSeries<S> TruncatedSeries<S>::multiply(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_order(b);
  if (a.is_constant()) return b * a.coeffs_[0];
  if (b.is_constant()) return a * b.coeffs_[0];
  const size_t d = a.order();
  TruncatedSeries r(d);
  for (size_t i = 0; i <= d; ++i) {
    if (hjet::is_zero(a.coeffs_[i])) continue;
    for (size_t j = 0; i + j <= d; ++j) {
      if (hjet::is_zero(b.coeffs_[j])) continue;
      r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return r;
}

template <class S>
TruncatedSeries<S> series_compose(const MultiPoly& f, std::span<const TruncatedSeries<S>> u) {
  if (u.empty()) {
    if (f.nvars() != 0 && !f.is_constant()) throw std::invalid_argument("series_compose: no arguments");
    return TruncatedSeries<S>(0, S(f.constant_term()));
  }
  if (f.nvars() != u.size()) throw std::invalid_argument("series_compose: variable count mismatch");
  const size_t d = u[0].order();
  for (const auto& s : u)
    if (s.order() != d) throw std::invalid_argument("series_compose: truncation orders differ");
  const TruncatedSeries<S> one(d, S(Rational(1)));
  if (f.is_constant()) return one * f.constant_term();
  return f.evaluate_in<TruncatedSeries<S>>(u, one);
}

template <class S>
TruncatedSeries<S> series_compose(const TruncatedSeries<S>& outer, const TruncatedSeries<S>& inner) {
  if (!hjet::is_zero(inner[0])) throw std::invalid_argument("inner series must have zero constant term");
  const size_t d = inner.order();
  TruncatedSeries<S> acc(d);
  for (size_t k = outer.order() + 1; k-- > 0;) {
    acc = acc * inner;
    acc[0] += outer[k];
  }
  return acc;
}

}  // namespace hjet

#endif  // HJET_SERIES_HPP_
