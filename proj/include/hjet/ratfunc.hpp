#ifndef HJET_RATFUNC_HPP_
#define HJET_RATFUNC_HPP_

#include <string>
#include <vector>

#include "hjet/rational.hpp"

namespace hjet {

// Dense univariate polynomial over Q in t, coefficients ascending, no
// trailing zeros (the zero polynomial has no coefficients).
class UniPoly {
 public:
  UniPoly() = default;
  UniPoly(const Rational& c);  // NOLINT: constants embed implicitly
  explicit UniPoly(std::vector<Rational> coeffs);
  static UniPoly monomial(size_t degree, const Rational& c = Rational(1));

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  Rational operator[](size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational evaluate(const Rational& t) const;
  UniPoly derivative() const;
  // p(t + shift)
  UniPoly shifted(const Rational& shift) const;
  UniPoly monic() const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly operator-() const;
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const Rational& c);
  friend bool operator==(const UniPoly&, const UniPoly&) = default;

  // Euclidean division: a = q b + r, deg r < deg b.
  static void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r);
  // Monic gcd; gcd(0, 0) = 0.
  static UniPoly gcd(UniPoly a, UniPoly b);

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

inline bool is_zero(const UniPoly& p) { return p.is_zero(); }

// Element of Q(t): numerator / denominator with coprime parts and a monic
// denominator.
class RatFunc {
 public:
  RatFunc() : den_(Rational(1)) {}
  RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  RatFunc(const UniPoly& p) : num_(p), den_(Rational(1)) {}   // NOLINT
  RatFunc(UniPoly num, UniPoly den);

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  // Throws std::domain_error where the denominator vanishes.
  Rational evaluate(const Rational& t) const;
  RatFunc derivative() const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc operator-() const;
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  std::string to_string(const std::string& var = "t") const;

 private:
  void normalize();
  UniPoly num_;
  UniPoly den_;
};

inline bool is_zero(const RatFunc& f) { return f.is_zero(); }

}  // namespace hjet

#endif  // HJET_RATFUNC_HPP_
