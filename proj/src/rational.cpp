#include "isopoly/rational.hpp"

#include <cctype>
#include <string>

#include "isopoly/errors.hpp"

namespace isopoly {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (!all_digits(digits)) throw ParseError("not an integer: '" + std::string(s) + "'");
  std::string owned(s.front() == '+' ? s.substr(1) : s);
  return Integer(owned, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw ParseError("not a decimal: '" + std::string(text) + "'");
    Integer scale = integer_pow(Integer(10), frac.size());
    Integer value = (whole.empty() ? Integer(0) : Integer(std::string(whole), 10)) * scale +
                    Integer(std::string(frac), 10);
    Rational q(negative ? Integer(-value) : value, scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer integer_pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational rational_pow(const Rational& base, unsigned long exponent) {
  Rational out(integer_pow(base.get_num(), exponent), integer_pow(base.get_den(), exponent));
  out.canonicalize();
  return out;
}

Integer floor_of(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil_of(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (lo < 0 || hi < lo) throw InvalidArgument("simplest_rational_between needs 0 <= lo <= hi");
  Integer fl = floor_of(lo);
  if (Rational(fl) == lo) return lo;
  Rational next(fl + 1);
  if (next <= hi) return next;
  // lo and hi share the integer part: recurse on the reciprocals of the fractional parts.
  Rational inner = simplest_rational_between(1 / (hi - fl), 1 / (lo - fl));
  return Rational(fl) + 1 / inner;
}

ScalarBound operator+(const ScalarBound& a, const ScalarBound& b) {
  return {a.lower + b.lower, a.upper + b.upper};
}

ScalarBound multiply_nonnegative(const ScalarBound& a, const ScalarBound& b) {
  return {a.lower * b.lower, a.upper * b.upper};
}

ScalarBound scale(const ScalarBound& a, const Rational& nonnegative_factor) {
  return {a.lower * nonnegative_factor, a.upper * nonnegative_factor};
}

namespace {

// floor((n * 2^{k*degree})^{1/degree}) together with an exactness flag.
Integer scaled_floor_root(const Integer& n, unsigned long degree, unsigned long k, bool& exact) {
  Integer scaled = n;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), k * degree);
  Integer root;
  exact = mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), degree) != 0;
  return root;
}

}  // namespace

ScalarBound root_enclosure(const Rational& q, unsigned long degree, const Rational& width) {
  if (q < 0) throw InvalidArgument("root of a negative rational");
  if (degree == 0) throw InvalidArgument("root of degree 0");
  if (degree == 1 || q == 0) return ScalarBound::exact(q);
  // q^{1/d} = (num * den^{d-1})^{1/d} / den
  const Integer& den = q.get_den();
  Integer n = q.get_num() * integer_pow(den, degree - 1);
  bool exact = false;
  Integer root = scaled_floor_root(n, degree, 0, exact);
  if (exact) {
    Rational value(root, den);
    value.canonicalize();
    return ScalarBound::exact(value);
  }
  unsigned long k = 0;
  while (Rational(1, den) / Rational(Integer(1) << k) > width) ++k;
  root = scaled_floor_root(n, degree, k, exact);
  Integer scale_den = den << k;
  Rational lower(root, scale_den);
  Rational upper(root + 1, scale_den);
  lower.canonicalize();
  upper.canonicalize();
  return {lower, upper};
}

Rational root_lower(const Rational& q, unsigned long degree, const Rational& width) {
  return root_enclosure(q, degree, width).lower;
}

Rational root_upper(const Rational& q, unsigned long degree, const Rational& width) {
  return root_enclosure(q, degree, width).upper;
}

int compare(const Surd& a, const Surd& b) {
  // a^{1/m} vs b^{1/n}  <=>  a^n vs b^m
  Rational lhs = rational_pow(a.radicand, b.index);
  Rational rhs = rational_pow(b.radicand, a.index);
  return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

Surd operator*(const Surd& a, const Surd& b) {
  if (a.index == b.index) return {a.radicand * b.radicand, a.index};
  return {rational_pow(a.radicand, b.index) * rational_pow(b.radicand, a.index), a.index * b.index};
}

Surd surd_pow(const Surd& a, unsigned long exponent) {
  return {rational_pow(a.radicand, exponent), a.index};
}

Rational decimal_precision(unsigned digits) {
  return Rational(Integer(1), integer_pow(Integer(10), digits));
}

}  // namespace isopoly
