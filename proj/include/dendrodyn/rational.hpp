#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dendro {

// Exact rational scalar used for every length, offset and distance.
using Rational = mpq_class;

// Accepts "p/q", "p" and plain decimals such as "0.25" or "-1e-6".
// Throws ParseError on anything else or on a zero denominator.
Rational parse_rational(std::string_view text);

// Always "p/q" (denominator included even when it is 1) so that files
// written by this library round-trip byte for byte.
std::string format_rational(const Rational& value);

// num / den in canonical form; den must be non-zero.
inline Rational frac(long num, long den) {
    Rational r{mpz_class(num), mpz_class(den)};
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational abs_diff(const Rational& a, const Rational& b) {
    return a >= b ? Rational(a - b) : Rational(b - a);
}

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

// 10^-exponent as an exact rational.
Rational pow10_inverse(unsigned exponent);

// 2^-exponent as an exact rational.
Rational pow2_inverse(unsigned exponent);

// base^exponent.
Rational power(const Rational& base, unsigned long exponent);

}  // namespace dendro
