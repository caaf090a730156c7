#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ghzlab {

/// Exact rational number; always kept in canonical form (gcd 1, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p", "p/q" or "-p/q". Throws ParseError on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion of a finite double.
Rational from_double(double v);

inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace ghzlab
