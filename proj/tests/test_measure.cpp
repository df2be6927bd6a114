#include <doctest.h>

#include <map>

#include "circlewalk/entropy.hpp"
#include "support.hpp"

using namespace circlewalk;

namespace {

Rational total_weight(const StepDistribution& mu) {
  Rational t(0);
  for (const auto& a : mu.atoms()) t += a.weight;
  return t;
}

}  // namespace

TEST_CASE("shipped measures") {
  const auto& u = *testing::uniform_mu();
  const auto& l = *testing::lazy_mu();
  CHECK(u.size() == 6);
  CHECK(l.size() == 9);
  CHECK(l.mass(CircleMap()) == Rational(1, 2));
  CHECK(l.mass(testing::gens().at("a").map) == Rational(1, 16));
  CHECK(l.mass(testing::gens().at("A").map) == Rational(1, 16));
  CHECK(u.mass(testing::gens().at("a").map) == Rational(0));
  CHECK(u.mass(testing::gens().at("C").map) == Rational(1, 6));
  CHECK(reflect(u) == u);
  CHECK(reflect(l) == l);
  CHECK(u.breakpoint_moment() == Rational(10, 3));
}

TEST_CASE("constructor validates weights and merges duplicates") {
  const CircleMap a = testing::gens().at("A").map;
  CHECK_THROWS_AS(StepDistribution({{a, Rational(1, 2), "A"}}), std::invalid_argument);
  CHECK_THROWS_AS(StepDistribution({{a, Rational(3, 2), "A"}, {CircleMap(), Rational(-1, 2), "e"}}), std::invalid_argument);
  CHECK_THROWS_AS(StepDistribution(std::vector<Atom>{}), std::invalid_argument);
  const StepDistribution merged({{a, Rational(1, 4), "A"}, {a, Rational(3, 4), "A"}});
  CHECK(merged.size() == 1);
  CHECK(merged == StepDistribution::delta(a));
}

TEST_CASE("transformations") {
  const CircleMap a = testing::gens().at("A").map, b = testing::gens().at("B").map;
  const auto de = StepDistribution::delta(CircleMap(), "e");
  CHECK(lazify(de) == de);
  CHECK(convolve(StepDistribution::delta(a), StepDistribution::delta(b)) == StepDistribution::delta(a.compose(b)));
  CHECK(power(*testing::uniform_mu(), 1) == *testing::uniform_mu());
  CHECK(reflect(StepDistribution::delta(a)) == StepDistribution::delta(a.inverse()));
  CHECK(reflect(reflect(*testing::lazy_mu())) == *testing::lazy_mu());
  CHECK_THROWS_AS(power(de, 0), std::invalid_argument);

  const auto p2 = power(*testing::uniform_mu(), 2);
  CHECK(total_weight(p2) == Rational(1));
  CHECK(p2.size() == 29);
  CHECK(p2.mass(CircleMap()) == Rational(1, 6));
  CHECK(p2.mass(a.compose(testing::gens().at("C").map)) == Rational(1, 18));
}

TEST_CASE("file format") {
  const auto& u = *testing::uniform_mu();
  CHECK(StepDistribution::from_json(u.to_json(), testing::gens()) == u);
  CHECK_THROWS_AS(StepDistribution::from_json(nlohmann::json::parse(R"([{"word":["Q"],"weight":"1"}])"), testing::gens()),
                  std::invalid_argument);
  CHECK_THROWS_AS(StepDistribution::load("/nonexistent.json", testing::gens()), std::invalid_argument);
}

TEST_CASE("sampling") {
  const CircleMap a = testing::gens().at("A").map;
  const auto d = StepDistribution::delta(a);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) CHECK(d.sample(rng) == a);

  const auto& l = *testing::lazy_mu();
  Rng r1(77), r2(77);
  for (int i = 0; i < 50; ++i) CHECK(l.sample_index(r1) == l.sample_index(r2));

  Rng r3(78);
  std::map<std::size_t, int> counts;
  const int draws = 64000;
  for (int i = 0; i < draws; ++i) ++counts[l.sample_index(r3)];
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double p = l.weight(i).to_double();
    CHECK(std::abs(counts[i] - draws * p) < 5.0 * std::sqrt(draws * p * (1 - p)));
  }
  CHECK(l.index_for_draw(0) == 0);
  CHECK(l.index_for_draw(~std::uint64_t{0}) == l.size() - 1);
}

TEST_CASE("entropy of convolution powers is subadditive") {
  const auto& u = *testing::uniform_mu();
  const double h1 = shannon_entropy(u), h2 = shannon_entropy(power(u, 2)), h3 = shannon_entropy(power(u, 3));
  CHECK(h2 <= 2 * h1 + 1e-12);
  CHECK(h3 <= h1 + h2 + 1e-12);
}
