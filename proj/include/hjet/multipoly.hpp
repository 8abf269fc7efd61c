#ifndef HJET_MULTIPOLY_HPP_
#define HJET_MULTIPOLY_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hjet/rational.hpp"

namespace hjet {

// Sparse power product: (variable index, exponent) pairs sorted by index,
// exponents strictly positive.
class Monomial {
 public:
  using Factor = std::pair<uint32_t, uint32_t>;

  Monomial() = default;
  static Monomial variable(uint32_t var, uint32_t exponent = 1);
  static Monomial from_exponents(std::span<const uint32_t> exponents);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  uint32_t degree() const;
  uint32_t exponent(uint32_t var) const;
  // One past the largest variable index present (0 for the unit monomial).
  uint32_t arity() const { return factors_.empty() ? 0 : factors_.back().first + 1; }

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  // Requires divides(other) to hold for `divisor`.
  Monomial divided_by(const Monomial& divisor) const;
  // Same monomial with `var` removed.
  Monomial without(uint32_t var) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

// Graded lexicographic order with x0 > x1 > ...; compatible with products.
struct DegLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using VarNames = std::vector<std::string>;

// Names prefix1 .. prefixN.
VarNames indexed_names(const std::string& prefix, uint32_t count);

// Multivariate polynomial over Q in a prefix-ordered variable set
// x_0 .. x_{nvars-1}. Operands of different arity are combined in the
// larger variable set.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, Rational, DegLexLess>;

  MultiPoly() = default;
  static MultiPoly zero(uint32_t nvars) { return MultiPoly(Rational(0), nvars); }
  MultiPoly(const Rational& constant, uint32_t nvars = 0);  // NOLINT: implicit by intent
  static MultiPoly constant(const Rational& c, uint32_t nvars = 0) { return MultiPoly(c, nvars); }
  static MultiPoly variable(uint32_t nvars, uint32_t var);
  static MultiPoly term(uint32_t nvars, const Monomial& m, const Rational& c);

  uint32_t nvars() const { return nvars_; }
  // Enlarges the declared variable set; never shrinks it.
  MultiPoly& extend_nvars(uint32_t nvars);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant term (zero if absent).
  Rational constant_term() const;
  const TermMap& terms() const { return terms_; }
  size_t num_terms() const { return terms_.size(); }
  Rational coefficient(const Monomial& m) const;
  uint32_t total_degree() const;
  uint32_t degree_in(uint32_t var) const;
  // Sorted indices of variables that occur with nonzero coefficient.
  std::vector<uint32_t> variables() const;
  bool involves(uint32_t var) const;
  // Coefficient of var^deg, as a polynomial free of var.
  MultiPoly coefficient_of(uint32_t var, uint32_t deg) const;
  // Largest monomial in DegLex order; requires !is_zero().
  const std::pair<const Monomial, Rational>& leading_term() const { return *terms_.rbegin(); }

  MultiPoly derivative(uint32_t var) const;

  // Substitutes the given rational values; unlisted variables stay symbolic.
  MultiPoly specialize(const std::map<uint32_t, Rational>& values) const;
  // Full evaluation; requires values.size() >= arity of every term.
  Rational evaluate(std::span<const Rational> values) const;

  // Evaluation over any commutative Q-algebra R providing R + R, R * R and
  // R * Rational. `one` fixes the shape of the result (e.g. series order).
  template <class R>
  R evaluate_in(std::span<const R> args, const R& one) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }

  // Equality of polynomials, independent of declared arity.
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  std::string to_string(const VarNames& names) const;
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  uint32_t nvars_ = 0;
  TermMap terms_;
};

inline bool is_zero(const MultiPoly& p) { return p.is_zero(); }

// Quotient a / b; throws std::domain_error unless b divides a exactly.
MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b);

template <class R>
R MultiPoly::evaluate_in(std::span<const R> args, const R& one) const {
  R result = one * Rational(0);
  std::vector<std::vector<R>> powers(args.size());
  auto power = [&](uint32_t var, uint32_t e) -> const R& {
    auto& cache = powers.at(var);
    if (cache.empty()) cache.push_back(one);
    while (cache.size() <= e) cache.push_back(cache.back() * args[var]);
    return cache[e];
  };
  for (const auto& [mono, coeff] : terms_) {
    R acc = one * coeff;
    for (const auto& [var, e] : mono.factors()) acc = acc * power(var, e);
    result = result + acc;
  }
  return result;
}

}  // namespace hjet

#endif  // HJET_MULTIPOLY_HPP_
