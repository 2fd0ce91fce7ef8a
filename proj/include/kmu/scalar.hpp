#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "kmu/rational.hpp"

namespace kmu {

namespace detail {

// n = s^2 * f with f squarefree, n >= 0. Trial division up to 2^16, then a
// perfect-square test on the cofactor (whose prime factors all exceed the
// bound, so a residual square factor would need a prime > 2^16 squared).
inline void extract_square(const Integer& n, Integer& s, Integer& f) {
  s = 1;
  f = 1;
  if (n == 0) {
    f = 0;
    return;
  }
  Integer m = n;
  auto strip = [&](unsigned long p) {
    unsigned long e = mpz_remove(m.get_mpz_t(), m.get_mpz_t(), Integer(p).get_mpz_t());
    if (e > 0) {
      Integer pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, e / 2);
      s *= pk;
      if (e % 2) f *= p;
    }
  };
  strip(2);
  for (unsigned long p = 3; p <= 65536; p += 2) {
    if (Integer(p) * p > m) break;
    strip(p);
  }
  if (m > 1) {
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      Integer r;
      mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
      s *= r;
    } else {
      f *= m;
    }
  }
}

}  // namespace detail

// Element of Q(sqrt(d)): rat + rad*sqrt(d) with d a squarefree non-negative
// integer. A single discriminant is shared per computation; mixing two
// different radicals raises IncompatibleDiscriminants and a sqrt that would
// leave the field raises NestedRadical (callers may then switch backends).
class ExactScalar {
 public:
  ExactScalar() : rat_(0), rad_(0), disc_(0) {}
  ExactScalar(long v) : rat_(v, 1), rad_(0), disc_(0) {}  // NOLINT(google-explicit-constructor)
  explicit ExactScalar(const Rational& r) : rat_(r), rad_(0), disc_(0) {}
  ExactScalar(const Rational& rat, const Rational& rad, const Integer& disc)
      : rat_(rat), rad_(rad), disc_(disc) {
    canonicalize();
  }

  static ExactScalar from_rational(long num, long den) { return ExactScalar(make_rational(num, den)); }

  const Rational& rational_part() const { return rat_; }
  const Rational& radical_part() const { return rad_; }
  const Integer& discriminant() const { return disc_; }
  bool is_rational() const { return sgn(rad_) == 0; }
  bool is_zero() const { return sgn(rat_) == 0 && sgn(rad_) == 0; }

  // Exact sign via rationalization: sign(a + b*sqrt(d)) with d squarefree > 1
  // reduces to comparing a^2 and b^2 d when a and b have opposite signs.
  int sign() const {
    int sa = sgn(rat_), sb = sgn(rad_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rational lhs = rat_ * rat_;
    Rational rhs = rad_ * rad_ * Rational(disc_);
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;  // unreachable for squarefree d > 1, kept for safety
    return c > 0 ? sa : sb;
  }

  ExactScalar operator-() const {
    ExactScalar r(*this);
    r.rat_ = -r.rat_;
    r.rad_ = -r.rad_;
    return r;
  }

  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
    Integer d = merged_disc(x, y);
    return ExactScalar(x.rat_ + y.rat_, x.rad_ + y.rad_, d);
  }
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) { return x + (-y); }

  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
    Integer d = merged_disc(x, y);
    Rational rat = x.rat_ * y.rat_ + x.rad_ * y.rad_ * Rational(d);
    Rational rad = x.rat_ * y.rad_ + x.rad_ * y.rat_;
    return ExactScalar(rat, rad, d);
  }

  friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) { return x * y.inverse(); }

  ExactScalar inverse() const {
    if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero");
    if (is_rational()) return ExactScalar(Rational(1) / rat_);
    // conjugate trick: 1/(a+b√d) = (a-b√d)/(a²-b²d); the norm is nonzero
    // because √d is irrational.
    Rational norm = rat_ * rat_ - rad_ * rad_ * Rational(disc_);
    if (sgn(norm) == 0) fail(ErrorKind::DivisionByZero, "zero norm");
    return ExactScalar(rat_ / norm, -rad_ / norm, disc_);
  }

  ExactScalar& operator+=(const ExactScalar& y) { return *this = *this + y; }
  ExactScalar& operator-=(const ExactScalar& y) { return *this = *this - y; }
  ExactScalar& operator*=(const ExactScalar& y) { return *this = *this * y; }
  ExactScalar& operator/=(const ExactScalar& y) { return *this = *this / y; }

  friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
    return x.rat_ == y.rat_ && x.rad_ == y.rad_ && (sgn(x.rad_) == 0 || x.disc_ == y.disc_);
  }
  friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }
  friend bool operator<(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() < 0; }
  friend bool operator>(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() > 0; }
  friend bool operator<=(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() <= 0; }
  friend bool operator>=(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() >= 0; }

  // Exact square root of a non-negative purely rational value; the result
  // either stays rational or adopts a squarefree discriminant.
  ExactScalar sqrt() const {
    if (!is_rational()) fail(ErrorKind::NestedRadical, "sqrt of " + str() + " leaves the field");
    if (sgn(rat_) < 0) fail(ErrorKind::NegativeRadicand, "sqrt of " + str());
    if (sgn(rat_) == 0) return ExactScalar();
    // sqrt(p/q) = sqrt(p*q)/q
    Integer p = rat_.get_num(), q = rat_.get_den();
    Integer s, f;
    detail::extract_square(p * q, s, f);
    Rational coeff(s, q);
    coeff.canonicalize();
    if (f == 1) return ExactScalar(coeff);
    return ExactScalar(Rational(0), coeff, f);
  }

  double to_double() const {
    double v = rat_.get_d();
    if (sgn(rad_) != 0) v += rad_.get_d() * std::sqrt(disc_.get_d());
    return v;
  }

  // Canonical: "p/q", "p/q+r/s*sqrt(d)", "p/q-r/s*sqrt(d)", "r/s*sqrt(d)";
  // "/1" is omitted.
  std::string str() const {
    if (is_rational()) return rat_to_string(rat_);
    std::string out;
    if (sgn(rat_) != 0) {
      out = rat_to_string(rat_);
      if (sgn(rad_) > 0) out += "+";
    }
    if (sgn(rad_) < 0) out += "-";
    out += rat_to_string(abs(rad_)) + "*sqrt(" + disc_.get_str() + ")";
    return out;
  }

  static ExactScalar parse(std::string_view s) {
    size_t pos = 0;
    ExactScalar acc = parse_term(s, pos, /*negate=*/false);
    detail::skip_ws(s, pos);
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      bool neg = s[pos] == '-';
      ++pos;
      acc = acc + parse_term(s, pos, neg);
      detail::skip_ws(s, pos);
    }
    if (pos != s.size())
      fail(ErrorKind::ParseError, "trailing characters in scalar \"" + std::string(s) + "\"");
    return acc;
  }

 private:
  static Integer merged_disc(const ExactScalar& x, const ExactScalar& y) {
    bool xr = sgn(x.rad_) == 0, yr = sgn(y.rad_) == 0;
    if (xr) return yr ? Integer(0) : y.disc_;
    if (yr) return x.disc_;
    if (x.disc_ != y.disc_)
      fail(ErrorKind::IncompatibleDiscriminants,
           "sqrt(" + x.disc_.get_str() + ") vs sqrt(" + y.disc_.get_str() + ")");
    return x.disc_;
  }

  // Folds d in {0,1} into the rational part and normalizes d to its
  // squarefree core so equality is componentwise.
  void canonicalize() {
    if (sgn(rad_) == 0) {
      disc_ = 0;
      return;
    }
    if (disc_ < 0) fail(ErrorKind::NegativeRadicand, "negative discriminant");
    if (disc_ == 0) {
      rad_ = 0;
      return;
    }
    Integer s, f;
    detail::extract_square(disc_, s, f);
    if (s != 1) {
      rad_ *= Rational(s);
      disc_ = f;
    }
    if (disc_ == 1) {
      rat_ += rad_;
      rad_ = 0;
      disc_ = 0;
    }
  }

  // term := rational [ '*' 'sqrt(' uint ')' ] | 'sqrt(' uint ')'
  static ExactScalar parse_term(std::string_view s, size_t& pos, bool negate) {
    detail::skip_ws(s, pos);
    Rational coeff(1);
    bool have_coeff = false;
    if (pos < s.size() && s.substr(pos, 4) != "sqrt") {
      coeff = detail::parse_rational_body(s, pos);
      have_coeff = true;
      detail::skip_ws(s, pos);
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        detail::skip_ws(s, pos);
      } else {
        if (negate) coeff = -coeff;
        return ExactScalar(coeff);
      }
    }
    if (s.substr(pos, 5) != "sqrt(")
      fail(ErrorKind::ParseError, "expected sqrt( in \"" + std::string(s) + "\"");
    pos += 5;
    Integer d = detail::parse_integer(s, pos, "discriminant");
    detail::skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != ')')
      fail(ErrorKind::ParseError, "missing ) in \"" + std::string(s) + "\"");
    ++pos;
    if (d < 0) fail(ErrorKind::ParseError, "negative discriminant in \"" + std::string(s) + "\"");
    if (negate) coeff = -coeff;
    (void)have_coeff;
    return ExactScalar(Rational(0), coeff, d);
  }

  Rational rat_;
  Rational rad_;
  Integer disc_;
};

// Floating-point backend with the same surface as ExactScalar. Comparisons
// use a process-wide tolerance (set once at startup, before any concurrent
// use): sign() tests |v| <= tol, equality is relative at scale max(1,|x|,|y|).
class FloatScalar {
 public:
  FloatScalar() : v_(0.0) {}
  FloatScalar(int v) : v_(static_cast<double>(v)) {}   // NOLINT(google-explicit-constructor)
  FloatScalar(long v) : v_(static_cast<double>(v)) {}  // NOLINT(google-explicit-constructor)
  explicit FloatScalar(double v) : v_(v) {}

  static FloatScalar from_rational(long num, long den) {
    return FloatScalar(static_cast<double>(num) / static_cast<double>(den));
  }

  static double tolerance;

  double value() const { return v_; }
  bool is_zero() const { return std::fabs(v_) <= tolerance; }
  bool is_rational() const { return true; }
  int sign() const { return v_ > tolerance ? 1 : (v_ < -tolerance ? -1 : 0); }

  FloatScalar operator-() const { return FloatScalar(-v_); }
  friend FloatScalar operator+(FloatScalar x, FloatScalar y) { return FloatScalar(x.v_ + y.v_); }
  friend FloatScalar operator-(FloatScalar x, FloatScalar y) { return FloatScalar(x.v_ - y.v_); }
  friend FloatScalar operator*(FloatScalar x, FloatScalar y) { return FloatScalar(x.v_ * y.v_); }
  friend FloatScalar operator/(FloatScalar x, FloatScalar y) {
    if (y.is_zero()) fail(ErrorKind::DivisionByZero, "division by (numerically) zero");
    return FloatScalar(x.v_ / y.v_);
  }

  FloatScalar inverse() const { return FloatScalar(1.0) / *this; }

  FloatScalar& operator+=(FloatScalar y) { v_ += y.v_; return *this; }
  FloatScalar& operator-=(FloatScalar y) { v_ -= y.v_; return *this; }
  FloatScalar& operator*=(FloatScalar y) { v_ *= y.v_; return *this; }
  FloatScalar& operator/=(FloatScalar y) { *this = *this / y; return *this; }

  friend bool operator==(FloatScalar x, FloatScalar y) {
    double scale = std::max({1.0, std::fabs(x.v_), std::fabs(y.v_)});
    return std::fabs(x.v_ - y.v_) <= tolerance * scale;
  }
  friend bool operator!=(FloatScalar x, FloatScalar y) { return !(x == y); }
  friend bool operator<(FloatScalar x, FloatScalar y) { return !(x == y) && x.v_ < y.v_; }
  friend bool operator>(FloatScalar x, FloatScalar y) { return !(x == y) && x.v_ > y.v_; }
  friend bool operator<=(FloatScalar x, FloatScalar y) { return x == y || x.v_ < y.v_; }
  friend bool operator>=(FloatScalar x, FloatScalar y) { return x == y || x.v_ > y.v_; }

  FloatScalar sqrt() const {
    if (sign() < 0) fail(ErrorKind::NegativeRadicand, "sqrt of " + str());
    return FloatScalar(v_ <= 0.0 ? 0.0 : std::sqrt(v_));
  }

  double to_double() const { return v_; }

  std::string str() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v_);
    return buf;
  }

  static FloatScalar parse(std::string_view s) {
    return FloatScalar(ExactScalar::parse(s).to_double());
  }

 private:
  double v_;
};

inline double FloatScalar::tolerance = 1e-9;

template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<ExactScalar> {
  static constexpr bool exact = true;
  static constexpr const char* backend_name = "exact";
};

template <>
struct scalar_traits<FloatScalar> {
  static constexpr bool exact = false;
  static constexpr const char* backend_name = "float";
};

inline ExactScalar exactify(const ExactScalar& s) { return s; }

// Doubles embed exactly as dyadic rationals, so float-backend results can be
// written in the exact file format and round-trip.
inline ExactScalar exactify(const FloatScalar& s) {
  Rational r(s.value());
  r.canonicalize();
  return ExactScalar(r);
}

enum class ArithOp { add, sub, mul, div };

// Uniform entry point mirroring the four field operations.
template <typename S>
S scalar_arith(const S& x, const S& y, ArithOp op) {
  switch (op) {
    case ArithOp::add: return x + y;
    case ArithOp::sub: return x - y;
    case ArithOp::mul: return x * y;
    case ArithOp::div: return x / y;
  }
  fail(ErrorKind::ParseError, "bad op");
}

template <typename S>
S sqrt_exact(const S& x) {
  return x.sqrt();
}

}  // namespace kmu
