#include "hjet/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hjet {

Monomial Monomial::variable(uint32_t var, uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.push_back({var, exponent});
  return m;
}

Monomial Monomial::from_exponents(std::span<const uint32_t> exponents) {
  Monomial m;
  for (uint32_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > 0) m.factors_.push_back({i, exponents[i]});
  }
  return m;
}

uint32_t Monomial::degree() const {
  uint32_t d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

uint32_t Monomial::exponent(uint32_t var) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{var, 0});
  return (it != factors_.end() && it->first == var) ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.push_back({a->first, a->second + b->second});
      ++a;
      ++b;
    }
  }
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  for (const auto& [var, e] : factors_) {
    if (other.exponent(var) < e) return false;
  }
  return true;
}

Monomial Monomial::divided_by(const Monomial& divisor) const {
  Monomial r;
  for (const auto& [var, e] : factors_) {
    const uint32_t d = divisor.exponent(var);
    if (d > e) throw std::domain_error("monomial does not divide");
    if (e > d) r.factors_.push_back({var, e - d});
  }
  for (const auto& [var, e] : divisor.factors_) {
    if (exponent(var) == 0) throw std::domain_error("monomial does not divide");
  }
  return r;
}

Monomial Monomial::without(uint32_t var) const {
  Monomial r;
  for (const auto& f : factors_) {
    if (f.first != var) r.factors_.push_back(f);
  }
  return r;
}

bool DegLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const uint32_t da = a.degree();
  const uint32_t db = b.degree();
  if (da != db) return da < db;
  // Lex with x0 > x1 > ...: the first differing variable decides.
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  size_t i = 0;
  while (i < fa.size() && i < fb.size()) {
    if (fa[i] != fb[i]) {
      if (fa[i].first != fb[i].first) return fa[i].first > fb[i].first;
      return fa[i].second < fb[i].second;
    }
    ++i;
  }
  return fa.size() < fb.size();
}

VarNames indexed_names(const std::string& prefix, uint32_t count) {
  VarNames names;
  names.reserve(count);
  for (uint32_t i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i + 1));
  return names;
}

MultiPoly::MultiPoly(const Rational& constant, uint32_t nvars) : nvars_(nvars) {
  if (!hjet::is_zero(constant)) terms_.emplace(Monomial(), constant);
}

MultiPoly MultiPoly::variable(uint32_t nvars, uint32_t var) {
  if (var >= nvars) throw std::out_of_range("variable index exceeds arity");
  MultiPoly p = MultiPoly::zero(nvars);
  p.terms_.emplace(Monomial::variable(var), Rational(1));
  return p;
}

MultiPoly MultiPoly::term(uint32_t nvars, const Monomial& m, const Rational& c) {
  if (m.arity() > nvars) throw std::out_of_range("monomial exceeds arity");
  MultiPoly p = MultiPoly::zero(nvars);
  p.add_term(m, c);
  return p;
}

MultiPoly& MultiPoly::extend_nvars(uint32_t nvars) {
  nvars_ = std::max(nvars_, nvars);
  return *this;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational MultiPoly::constant_term() const { return coefficient(Monomial()); }

Rational MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

uint32_t MultiPoly::total_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

uint32_t MultiPoly::degree_in(uint32_t var) const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
  return d;
}

std::vector<uint32_t> MultiPoly::variables() const {
  std::vector<uint32_t> vars;
  for (const auto& [m, c] : terms_) {
    for (const auto& f : m.factors()) vars.push_back(f.first);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool MultiPoly::involves(uint32_t var) const {
  for (const auto& [m, c] : terms_) {
    if (m.exponent(var) > 0) return true;
  }
  return false;
}

MultiPoly MultiPoly::coefficient_of(uint32_t var, uint32_t deg) const {
  MultiPoly r = MultiPoly::zero(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.exponent(var) == deg) r.add_term(m.without(var), c);
  }
  return r;
}

MultiPoly MultiPoly::derivative(uint32_t var) const {
  MultiPoly r = MultiPoly::zero(nvars_);
  for (const auto& [m, c] : terms_) {
    const uint32_t e = m.exponent(var);
    if (e == 0) continue;
    Monomial reduced = m.without(var) * Monomial::variable(var, e - 1);
    r.add_term(reduced, c * e);
  }
  return r;
}

MultiPoly MultiPoly::specialize(const std::map<uint32_t, Rational>& values) const {
  MultiPoly r = MultiPoly::zero(nvars_);
  for (const auto& [m, c] : terms_) {
    Rational coeff = c;
    Monomial rest;
    for (const auto& [var, e] : m.factors()) {
      auto it = values.find(var);
      if (it == values.end()) {
        rest = rest * Monomial::variable(var, e);
      } else {
        Rational p;
        mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
        mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
        coeff *= p;
      }
    }
    r.add_term(rest, coeff);
  }
  return r;
}

Rational MultiPoly::evaluate(std::span<const Rational> values) const {
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [var, e] : m.factors()) {
      if (var >= values.size()) throw std::out_of_range("too few evaluation values");
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), values[var].get_num_mpz_t(), e);
      mpz_pow_ui(p.get_den_mpz_t(), values[var].get_den_mpz_t(), e);
      t *= p;
    }
    sum += t;
  }
  return sum;
}

void MultiPoly::add_term(const Monomial& m, const Rational& c) {
  if (hjet::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (hjet::is_zero(it->second)) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  nvars_ = std::max(nvars_, other.nvars_);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  nvars_ = std::max(nvars_, other.nvars_);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (hjet::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r = MultiPoly::zero(std::max(a.nvars_, b.nvars_));
  if (a.is_zero() || b.is_zero()) return r;
  if (a.is_constant()) return MultiPoly(b).extend_nvars(r.nvars_) *= a.terms_.begin()->second;
  if (b.is_constant()) return MultiPoly(a).extend_nvars(r.nvars_) *= b.terms_.begin()->second;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

std::string MultiPoly::to_string(const VarNames& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (!unit || m.is_one()) out << hjet::to_string(mag);
    bool need_star = !unit;
    for (const auto& [var, e] : m.factors()) {
      if (need_star) out << "*";
      need_star = true;
      out << (var < names.size() ? names[var] : "x" + std::to_string(var + 1));
      if (e > 1) out << "^" << e;
    }
  }
  return out.str();
}

std::string MultiPoly::to_string() const { return to_string(indexed_names("x", nvars_)); }

MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  const uint32_t nvars = std::max(a.nvars(), b.nvars());
  if (b.is_constant()) return MultiPoly(a).extend_nvars(nvars) *= Rational(1 / b.constant_term());
  MultiPoly quotient = MultiPoly::zero(nvars);
  MultiPoly rest = a;
  const auto& [lead_m, lead_c] = b.leading_term();
  while (!rest.is_zero()) {
    const auto& [rm, rc] = rest.leading_term();
    if (!lead_m.divides(rm)) throw std::domain_error("polynomial division is not exact");
    MultiPoly t = MultiPoly::term(nvars, rm.divided_by(lead_m), rc / lead_c);
    quotient += t;
    rest -= t * b;
  }
  return quotient;
}

}  // namespace hjet
