#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlab {

/// Exact rational number. mpq_class keeps values canonical (lowest terms,
/// positive denominator) as long as every constructor path calls canonicalize().
using Rational = mpq_class;
using BigInt = mpz_class;

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses "p/q", "-p", "0.125", "-3.5e-2". Decimals are converted exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers render without a denominator.
std::string to_string(const Rational& q);

/// Decimal rendering with `digits` significant digits.
std::string to_decimal(const Rational& q, int digits = 17);

double to_double(const Rational& q);

/// Exact binary value of a finite double.
Rational from_double(double x);

/// Best rational approximation with denominator <= max_den
/// (continued fractions with the semiconvergent check).
Rational limit_denominator(const Rational& x, const BigInt& max_den);

Rational make_rational(long num, long den);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace dlab
