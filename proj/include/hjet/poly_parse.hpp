#ifndef HJET_POLY_PARSE_HPP_
#define HJET_POLY_PARSE_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "hjet/multipoly.hpp"

namespace hjet {

class PolyParseError : public std::runtime_error {
 public:
  PolyParseError(const std::string& what, size_t column) : std::runtime_error(what), column_(column) {}
  // 1-based column within the parsed string.
  size_t column() const { return column_; }

 private:
  size_t column_;
};

// Parses expressions built from rational literals ("3", "-2/5"), the given
// variable names, +, -, *, non-negative integer powers "^k" and parentheses.
MultiPoly parse_poly(std::string_view text, const VarNames& names);

}  // namespace hjet

#endif  // HJET_POLY_PARSE_HPP_
