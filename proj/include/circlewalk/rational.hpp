#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace circlewalk {

/// Exact rational number backed by GMP. Always reduced with a positive
/// denominator; every operation is exact.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class value);

  /// Parses "num/den" or "num" (decimal). Throws std::invalid_argument on
  /// malformed text and std::domain_error on a zero denominator.
  static Rational parse(std::string_view text);

  /// 2^e for any integer exponent.
  static Rational pow2(long e);

  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  /// Denominator is a power of two.
  bool is_dyadic() const;
  /// Value is 2^e for some integer e (so it is positive).
  bool is_power_of_two() const;
  /// Exponent e when the value is 2^e.
  long log2_exact() const;

  Rational abs() const { return Rational(mpq_class(::abs(v_)), Reduced{}); }
  Rational reciprocal() const;
  /// Largest integer <= value.
  Rational floor() const;

  const mpq_class& raw() const { return v_; }
  std::size_t hash() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_), Reduced{}); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_), Reduced{}); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_), Reduced{}); }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_), Reduced{}); }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  struct Reduced {};
  // GMP arithmetic already returns canonical values.
  Rational(mpq_class value, Reduced) : v_(std::move(value)) {}

  mpq_class v_;
};

/// A point of the circle R/Z, stored as its representative in [0,1).
/// Normalization happens at construction.
class CirclePoint {
 public:
  CirclePoint() = default;
  CirclePoint(const Rational& value);  // NOLINT(google-explicit-constructor)
  CirclePoint(long num, long den) : CirclePoint(Rational(num, den)) {}

  static CirclePoint parse(std::string_view text) { return CirclePoint(Rational::parse(text)); }

  const Rational& value() const { return value_; }
  std::string str() const { return value_.str(); }
  double to_double() const { return value_.to_double(); }

  /// Counterclockwise offset from `from` to this point, in [0,1).
  Rational offset_from(const CirclePoint& from) const;

  friend CirclePoint operator+(const CirclePoint& p, const Rational& shift) { return CirclePoint(p.value_ + shift); }
  friend CirclePoint operator-(const CirclePoint& p, const Rational& shift) { return CirclePoint(p.value_ - shift); }
  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
  friend auto operator<=>(const CirclePoint&, const CirclePoint&) = default;

 private:
  Rational value_;
};

/// Arc-length distance on R/Z: min(|x-y|, 1-|x-y|).
Rational circle_dist(const CirclePoint& x, const CirclePoint& y);

/// Reduce a rational into [0,1).
Rational mod1(const Rational& x);

inline bool is_dyadic(const Rational& x) { return x.is_dyadic(); }

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

}  // namespace circlewalk
