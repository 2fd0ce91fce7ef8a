#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "kmu/errors.hpp"

namespace kmu {

// Arbitrary-precision rational. GMP keeps values canonical (lowest terms,
// positive denominator) as long as raw num/den constructions are canonicalized.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline int sign_of(const Rational& r) { return sgn(r); }

inline std::string rat_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline void skip_ws(std::string_view s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

inline Integer parse_integer(std::string_view s, size_t& pos, const char* what) {
  skip_ws(s, pos);
  size_t start = pos;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  size_t digits = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == digits)
    fail(ErrorKind::ParseError, std::string("expected ") + what + " at position " +
                                    std::to_string(start) + " in \"" + std::string(s) + "\"");
  return Integer(std::string(s.substr(start, pos - start)), 10);
}

// "p" or "p/q", optional sign on p.
inline Rational parse_rational_body(std::string_view s, size_t& pos) {
  Integer num = parse_integer(s, pos, "integer");
  skip_ws(s, pos);
  Integer den = 1;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    den = parse_integer(s, pos, "denominator");
    if (den == 0) fail(ErrorKind::ParseError, "zero denominator in \"" + std::string(s) + "\"");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace detail

inline Rational rat_from_string(std::string_view s) {
  size_t pos = 0;
  Rational r = detail::parse_rational_body(s, pos);
  detail::skip_ws(s, pos);
  if (pos != s.size())
    fail(ErrorKind::ParseError, "trailing characters in rational \"" + std::string(s) + "\"");
  return r;
}

}  // namespace kmu
