#include <doctest.h>

#include "support.hpp"

using namespace circlewalk;

TEST_CASE("rationals are stored reduced") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational::parse("10/4").str() == "5/2");
  CHECK(Rational::parse("7").str() == "7");
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 3) + Rational(2, 3) == Rational(1));
  CHECK(Rational(1, 2) * Rational(3, 5) == Rational(3, 10));
  CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational::parse("3/0"), std::domain_error);
  CHECK_THROWS_AS(Rational(0).reciprocal(), std::domain_error);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
}

TEST_CASE("dyadic and powers of two") {
  CHECK(Rational(3, 8).is_dyadic());
  CHECK_FALSE(Rational(1, 3).is_dyadic());
  CHECK(Rational(0).is_dyadic());
  CHECK(is_dyadic(Rational(-5, 16)));
  CHECK(Rational(1, 8).is_power_of_two());
  CHECK(Rational(1, 8).log2_exact() == -3);
  CHECK(Rational(16).log2_exact() == 4);
  CHECK_FALSE(Rational(3, 8).is_power_of_two());
  CHECK(Rational::pow2(-5) == Rational(1, 32));
}

TEST_CASE("circle points wrap into [0,1)") {
  CHECK(CirclePoint(Rational(5, 4)) == CirclePoint(1, 4));
  CHECK(CirclePoint(Rational(-1, 4)) == CirclePoint(3, 4));
  CHECK(CirclePoint(Rational(1)) == CirclePoint(0, 1));
  CHECK(CirclePoint(3, 4) + Rational(1, 2) == CirclePoint(1, 4));
  CHECK(CirclePoint(1, 8).offset_from(CirclePoint(7, 8)) == Rational(1, 4));
}

TEST_CASE("circle distance") {
  CHECK(circle_dist(CirclePoint(0, 1), CirclePoint(3, 4)) == Rational(1, 4));
  CHECK(circle_dist(CirclePoint(1, 3), CirclePoint(1, 3)) == Rational(0));
  CHECK(circle_dist(CirclePoint(1, 8), CirclePoint(7, 8)) == Rational(1, 4));
  CHECK(circle_dist(CirclePoint(0, 1), CirclePoint(1, 2)) == Rational(1, 2));
}

TEST_CASE("rational field laws on random values") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Rational a = testing::random_rational(rng), b = testing::random_rational(rng), c = testing::random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * a.reciprocal() == Rational(1));
    CHECK(Rational::parse(a.str()) == a);
  }
}

TEST_CASE("circle distance is a metric on random triples") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const CirclePoint x(testing::random_rational(rng)), y(testing::random_rational(rng)), z(testing::random_rational(rng));
    const Rational dxy = circle_dist(x, y);
    CHECK(dxy == circle_dist(y, x));
    CHECK(dxy <= Rational(1, 2));
    CHECK(dxy.sign() >= 0);
    CHECK(circle_dist(x, z) <= dxy + circle_dist(y, z));
  }
}
