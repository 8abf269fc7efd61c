#include "hjet/ratfunc.hpp"

#include <sstream>
#include <stdexcept>

namespace hjet {

UniPoly::UniPoly(const Rational& c) {
  if (!hjet::is_zero(c)) c_.push_back(c);
}

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::monomial(size_t degree, const Rational& c) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && hjet::is_zero(c_.back())) c_.pop_back();
}

Rational UniPoly::evaluate(const Rational& t) const {
  Rational acc(0);
  for (size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::shifted(const Rational& shift) const {
  // Horner in (t + shift).
  UniPoly acc;
  const UniPoly lin(std::vector<Rational>{shift, Rational(1)});
  for (size_t k = c_.size(); k-- > 0;) acc = acc * lin + UniPoly(c_[k]);
  return acc;
}

UniPoly UniPoly::monic() const {
  if (c_.empty()) return *this;
  return *this * Rational(1 / c_.back());
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (hjet::is_zero(a.c_[i])) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return UniPoly(std::move(r));
}

UniPoly operator*(const UniPoly& a, const Rational& c) {
  if (hjet::is_zero(c)) return UniPoly();
  UniPoly r = a;
  for (auto& v : r.c_) v *= c;
  return r;
}

void UniPoly::divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  r = a;
  std::vector<Rational> qc(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0, Rational(0));
  const Rational lead = b.leading();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const size_t shift = static_cast<size_t>(r.degree() - b.degree());
    const Rational f = r.leading() / lead;
    qc[shift] += f;
    r -= b * UniPoly::monomial(shift, f);
  }
  q = UniPoly(std::move(qc));
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = r.is_zero() ? std::move(r) : r.monic();
  }
  return a.monic();
}

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t k = c_.size(); k-- > 0;) {
    if (hjet::is_zero(c_[k])) continue;
    const Rational mag = abs(c_[k]);
    if (first) {
      if (sgn(c_[k]) < 0) out << "-";
    } else {
      out << (sgn(c_[k]) < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) out << hjet::to_string(mag) << (k ? "*" : "");
    if (k >= 1) out << var;
    if (k >= 2) out << "^" << k;
  }
  return out.str();
}

namespace {

// (x / g, y / g) with g = gcd(x, y).
std::pair<UniPoly, UniPoly> cofactors(const UniPoly& x, const UniPoly& y) {
  if (x.degree() == 0 || y.degree() == 0) return {x, y};
  const UniPoly g = UniPoly::gcd(x, y);
  if (g.degree() == 0) return {x, y};
  UniPoly a, b, r;
  UniPoly::divmod(x, g, a, r);
  UniPoly::divmod(y, g, b, r);
  return {a, b};
}

}  // namespace

RatFunc::RatFunc(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = UniPoly(Rational(1));
    return;
  }
  if (den_.degree() > 0) {
    const UniPoly g = UniPoly::gcd(num_, den_);
    if (g.degree() > 0) {
      UniPoly q, r;
      UniPoly::divmod(num_, g, q, r);
      num_ = q;
      UniPoly::divmod(den_, g, q, r);
      den_ = q;
    }
  }
  const Rational lead = den_.leading();
  if (lead != 1) {
    num_ = num_ * Rational(1 / lead);
    den_ = den_ * Rational(1 / lead);
  }
}

Rational RatFunc::evaluate(const Rational& t) const {
  const Rational d = den_.evaluate(t);
  if (hjet::is_zero(d)) throw std::domain_error("rational function has a pole at t = " + hjet::to_string(t));
  return num_.evaluate(t) / d;
}

RatFunc RatFunc::derivative() const {
  if (is_polynomial()) return RatFunc(num_.derivative() * Rational(1 / den_.leading()));
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (den_ == o.den_) {
    *this = RatFunc(num_ + o.num_, den_);
  } else {
    const auto [a, b] = cofactors(den_, o.den_);
    *this = RatFunc(num_ * b + o.num_ * a, den_ * b);
  }
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) {
  if (den_ == o.den_) {
    *this = RatFunc(num_ - o.num_, den_);
  } else {
    const auto [a, b] = cofactors(den_, o.den_);
    *this = RatFunc(num_ * b - o.num_ * a, den_ * b);
  }
  return *this;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("division by zero rational function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RatFunc::to_string(const std::string& var) const {
  if (is_polynomial()) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

}  // namespace hjet
