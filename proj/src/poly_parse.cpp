#include "hjet/poly_parse.hpp"

#include <cctype>

namespace hjet {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const VarNames& names) : text_(text), names_(names) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw PolyParseError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    while (accept('*')) acc = acc * unary();
    return acc;
  }

  MultiPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  MultiPoly power() {
    MultiPoly base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
    MultiPoly r(Rational(1), base.nvars());
    for (unsigned long i = 0; i < e; ++i) r = r * base;
    return r;
  }

  Integer digits() {
    const size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  MultiPoly atom() {
    skip_ws();
    const auto nvars = static_cast<uint32_t>(names_.size());
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num = digits();
      Integer den = 1;
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        den = digits();
        if (den == 0) fail("zero denominator");
      }
      Rational value(num, den);
      value.canonicalize();
      return MultiPoly(value, nvars);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      for (uint32_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return MultiPoly::variable(nvars, i);
      }
      pos_ = start;
      fail("unknown variable '" + std::string(name) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const VarNames& names_;
  size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, const VarNames& names) {
  MultiPoly p = Parser(text, names).parse();
  p.extend_nvars(static_cast<uint32_t>(names.size()));
  return p;
}

}  // namespace hjet
