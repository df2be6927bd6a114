#include "circlewalk/rational.hpp"

#include <stdexcept>

namespace circlewalk {

namespace {

bool is_pow2(const mpz_class& z) { return sgn(z) > 0 && mpz_popcount(z.get_mpz_t()) == 1; }

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(mpq_class value) : v_(std::move(value)) {
  if (v_.get_den() == 0) throw std::domain_error("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::domain_error("rational with zero denominator: '" + std::string(text) + "'");
  return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(mpq_class(p));
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(mpq_class(mpz_class(1), p));
}

bool Rational::is_dyadic() const { return is_pow2(v_.get_den()); }

bool Rational::is_power_of_two() const {
  const mpz_class& n = v_.get_num();
  const mpz_class& d = v_.get_den();
  return (n == 1 && is_pow2(d)) || (d == 1 && is_pow2(n));
}

long Rational::log2_exact() const {
  if (!is_power_of_two()) throw std::domain_error("log2_exact of " + str() + ", which is not a power of two");
  const mpz_class& n = v_.get_num();
  const mpz_class& d = v_.get_den();
  if (d == 1) return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
  return -static_cast<long>(mpz_scan1(d.get_mpz_t(), 0));
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  mpq_class r;
  mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
  return Rational(std::move(r), Reduced{});
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return Rational(mpq_class(q));
}

std::size_t Rational::hash() const {
  auto limbs = [](const mpz_class& z) {
    std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t())) * 0x9e3779b97f4a7c15ULL;
    const std::size_t n = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h ^ static_cast<std::size_t>(sgn(z) + 1);
  };
  const std::size_t a = limbs(v_.get_num());
  const std::size_t b = limbs(v_.get_den());
  return a ^ (b + 0x517cc1b727220a95ULL + (a << 6) + (a >> 2));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return Rational(mpq_class(a.v_ / b.v_), Rational::Reduced{});
}

Rational mod1(const Rational& x) {
  const int s = x.sign();
  if (s >= 0 && mpq_cmp_ui(x.raw().get_mpq_t(), 1, 1) < 0) return x;
  if (s < 0 && mpq_cmp_si(x.raw().get_mpq_t(), -1, 1) >= 0) return x + Rational(1);
  return x - x.floor();
}

CirclePoint::CirclePoint(const Rational& value) : value_(mod1(value)) {}

Rational CirclePoint::offset_from(const CirclePoint& from) const {
  Rational d = value_ - from.value_;
  if (d.sign() < 0) d += Rational(1);
  return d;
}

Rational circle_dist(const CirclePoint& x, const CirclePoint& y) {
  Rational d = (x.value() - y.value()).abs();
  Rational other = Rational(1) - d;
  return other < d ? other : d;
}

}  // namespace circlewalk
