#ifndef HJET_RATIONAL_HPP_
#define HJET_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hjet {

// GMP keeps mpq_class canonical: positive denominator, reduced fraction.
using Integer = mpz_class;
using Rational = mpq_class;

// Parses "a", "-a" or "a/b" with decimal integers a, b (b != 0).
// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

// Binomial coefficient, zero outside 0 <= k <= n.
Integer binomial(long n, long k);

Integer factorial(long n);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }
inline bool is_zero(const Integer& value) { return sgn(value) == 0; }

}  // namespace hjet

#endif  // HJET_RATIONAL_HPP_
