#include <doctest.h>

#include <cmath>

#include "circlewalk/entropy.hpp"
#include "support.hpp"

using namespace circlewalk;

TEST_CASE("shannon entropy") {
  CHECK(shannon_entropy(StepDistribution::delta(testing::gens().at("A").map)) == 0.0);
  std::vector<CircleMap> four;
  for (const char* n : {"A", "B", "C", "a"}) four.push_back(testing::gens().at(n).map);
  CHECK(shannon_entropy(StepDistribution::uniform(four)) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(shannon_entropy(std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 4)}) ==
        doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("bernoulli entropy") {
  CHECK(bernoulli_entropy(Rational(1, 3), Rational(1, 3)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(bernoulli_entropy(Rational(1, 4), Rational(1, 2)) == doctest::Approx(0.636514168294813).epsilon(1e-12));
  CHECK(bernoulli_entropy(Rational(1, 1000), Rational(1, 2)) < bernoulli_entropy(Rational(1, 100), Rational(1, 2)));
  CHECK(bernoulli_entropy(Rational(1, 1000), Rational(1, 2)) < 0.02);
  CHECK(bernoulli_entropy(Rational(1, 8), Rational(3, 8)) == bernoulli_entropy(Rational(3, 8), Rational(1, 8)));
}

TEST_CASE("entropy curve of a point mass") {
  const auto c = entropy_curve(StepDistribution::delta(testing::gens().at("A").map), 5);
  REQUIRE(c.points.size() == 5);
  for (const auto& p : c.points) {
    CHECK(p.entropy == 0.0);
    CHECK(p.support_size == 1);
  }
}

TEST_CASE("entropy curve of the uniform measure") {
  const auto c = entropy_curve(*testing::uniform_mu(), 3);
  REQUIRE(c.points.size() == 3);
  CHECK(c.points[0].entropy == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(c.points[1].entropy == doctest::Approx(3.20787600686).epsilon(1e-10));
  CHECK(c.points[2].entropy == doctest::Approx(4.35094407415).epsilon(1e-10));
  CHECK(c.points[0].support_size == 6);
  CHECK(c.points[1].support_size == 29);
  CHECK(c.points[2].support_size == 118);
  CHECK(c.points[1].entropy <= 2 * c.points[0].entropy);
  CHECK(c.points[2].entropy <= c.points[0].entropy + c.points[1].entropy);
  for (double d : c.increments()) CHECK(d > 0.0);
}

TEST_CASE("entropy curve matches convolution powers and is worker independent") {
  const auto& l = *testing::lazy_mu();
  const auto c1 = entropy_curve(l, 3, kDefaultSupportCap, 1);
  const auto c4 = entropy_curve(l, 3, kDefaultSupportCap, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c1.points[i].entropy == c4.points[i].entropy);
    CHECK(c1.points[i].entropy == doctest::Approx(shannon_entropy(power(l, static_cast<int>(i) + 1))).epsilon(1e-13));
  }
  for (std::size_t i = 1; i < 3; ++i) CHECK(c1.points[i].support_size >= c1.points[i - 1].support_size);
}

TEST_CASE("support cap truncates") {
  const auto c = entropy_curve(*testing::uniform_mu(), 4, 100);
  CHECK(c.truncated);
  CHECK(c.truncated_at == 3);
  CHECK(c.points.size() == 2);
}

TEST_CASE("conditional entropy proxy") {
  const auto d = conditional_entropy_proxy(testing::delta_mu(testing::gens().at("A").map), 3, 4, 30, {100, 1, 1}, 20);
  CHECK(d.proxy == 0.0);

  const auto r = conditional_entropy_proxy(testing::lazy_mu(), 1, 8, 60, {400, 1, 1}, 50);
  CHECK(r.proxy <= shannon_entropy(*testing::lazy_mu()) + 0.1);
  CHECK(r.ci_low <= r.proxy);
  CHECK(r.proxy <= r.ci_high);
  CHECK(r.bootstrap == 50);
}
