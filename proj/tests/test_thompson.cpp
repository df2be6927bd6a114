#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace circlewalk;

TEST_CASE("shipped generators") {
  const auto& g = testing::gens();
  CHECK(g.generators().size() == 8);
  for (const auto& gen : g.generators()) {
    CHECK(gen.map.is_in_thompson_t());
    CHECK(gen.map.compose(g.at(gen.inverse_name).map).is_identity());
  }
  CHECK(g.at("a").map == remark_element(CirclePoint(1, 4), 3));
  CHECK_THROWS_AS(g.at("Z"), std::invalid_argument);
}

TEST_CASE("relations") {
  const auto& g = testing::gens();
  CHECK(verify_relation(g, {}));
  CHECK(verify_relation(g, {"A", "A^-1"}));
  CHECK_FALSE(verify_relation(g, {"A"}));
  CHECK_THROWS_AS(verify_relation(g, {"Q"}), std::invalid_argument);
  const auto rels = default_relations();
  CHECK(rels.size() >= 3);
  for (const auto& r : rels) CHECK(verify_relation(g, r));
}

TEST_CASE("C has order three") {
  const CircleMap c = testing::gens().at("C").map;
  CHECK_FALSE(c.is_identity());
  CHECK(c.compose(c).compose(c).is_identity());
}

TEST_CASE("remark element validates its input") {
  CHECK_THROWS_AS(remark_element(CirclePoint(1, 3), 2), std::invalid_argument);
  CHECK_THROWS_AS(remark_element(CirclePoint(1, 2), 0), std::invalid_argument);
}

TEST_CASE("generator set rejects bad files") {
  CHECK_THROWS_AS(GeneratorSet::from_json(nlohmann::json::object()), std::invalid_argument);
  const auto a = testing::gens().at("A").map.to_json();
  CHECK_THROWS_AS(GeneratorSet::from_json(nlohmann::json::array({{{"name", "A"}, {"inverse_name", "A"}, {"map", a}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSet::load("/nonexistent/generators.json"), std::invalid_argument);
}

TEST_CASE("orbit of 0 is dense at scale 2^-7") {
  Rng rng(31);
  const auto& all = testing::gens().generators();
  std::set<long> cells;
  for (int i = 0; i < 10000; ++i) {
    const int len = static_cast<int>(rng() % 31);
    CircleMap g;
    for (int k = 0; k < len; ++k) {
      g = g.compose(all[rng() % all.size()].map);
      cells.insert(static_cast<long>(g(CirclePoint(0, 1)).to_double() * 128));
    }
  }
  CHECK(cells.size() == 128);
}
