#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace isopoly {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms; den must be nonzero.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "num/den", "num" or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; the denominator is always printed.
std::string format_rational(const Rational& q);

Rational rational_pow(const Rational& base, unsigned long exponent);
Integer integer_pow(const Integer& base, unsigned long exponent);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

/// Smallest-denominator rational in the closed interval [lo, hi], lo <= hi, lo >= 0.
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

/// Closed interval [lower, upper] enclosing a real quantity.
struct ScalarBound {
  Rational lower;
  Rational upper;

  static ScalarBound exact(const Rational& value) { return {value, value}; }

  bool is_exact() const { return lower == upper; }
  Rational width() const { return upper - lower; }
  bool contains(const Rational& q) const { return lower <= q && q <= upper; }
};

ScalarBound operator+(const ScalarBound& a, const ScalarBound& b);
/// Product of two enclosures of non-negative quantities.
ScalarBound multiply_nonnegative(const ScalarBound& a, const ScalarBound& b);
ScalarBound scale(const ScalarBound& a, const Rational& nonnegative_factor);

/// Enclosure of q^{1/degree} for q >= 0 of width <= width (exact when q is a perfect power).
ScalarBound root_enclosure(const Rational& q, unsigned long degree, const Rational& width);

/// Enclosure of q^{1/degree} tight enough that the lower and upper ends
/// each sit within `width` of the true value; lower rounds down, upper rounds up.
Rational root_lower(const Rational& q, unsigned long degree, const Rational& width);
Rational root_upper(const Rational& q, unsigned long degree, const Rational& width);

/// The real number radicand^{1/index}, radicand >= 0, index >= 1.
struct Surd {
  Rational radicand;
  unsigned long index = 1;

  static Surd of(const Rational& q) { return {q, 1}; }
  ScalarBound enclose(const Rational& width) const { return root_enclosure(radicand, index, width); }
};

/// Exact three-way comparison of two surds (-1, 0, 1).
int compare(const Surd& a, const Surd& b);
Surd operator*(const Surd& a, const Surd& b);
Surd surd_pow(const Surd& a, unsigned long exponent);

/// 10^{-digits} as a rational, the usual way precisions are spelled.
Rational decimal_precision(unsigned digits);

}  // namespace isopoly
