#include <doctest.h>

#include "support.hpp"

using namespace circlewalk;

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("trajectories") {
  const CircleMap a = testing::gens().at("A").map;
  const auto t0 = sample_trajectory(testing::uniform_mu(), 0, 1);
  CHECK(t0.horizon() == 0);
  CHECK(t0.position(0).is_identity());

  const auto ta = sample_trajectory(testing::delta_mu(a), 3, 1);
  CHECK(ta.position(1) == a);
  CHECK(ta.position(2) == a.compose(a));
  CHECK(ta.position(3) == a.compose(a).compose(a));

  const auto t1 = sample_trajectory(testing::uniform_mu(), 50, 9), t2 = sample_trajectory(testing::uniform_mu(), 50, 9);
  CHECK(t1.steps() == t2.steps());
  CHECK_THROWS(sample_trajectory(testing::uniform_mu(), -1, 1));
}

TEST_CASE("positions agree with incremental products") {
  const auto t = sample_trajectory(testing::lazy_mu(), 70, 3, 8);
  CircleMap w;
  for (int k = 1; k <= 70; ++k) {
    w = w.compose(t.increment(k));
    CHECK(t.position(k) == w);
  }
  const CirclePoint x(1, 3);
  const auto fwd = t.forward_orbit(70, x);
  const auto back = t.backward_orbit(70, x);
  for (int k = 0; k <= 70; k += 7) {
    CHECK(fwd[static_cast<std::size_t>(k)] == t.position(k)(x));
    CHECK(back[static_cast<std::size_t>(k)] == t.inverse_position(k)(x));
  }
}

TEST_CASE("shift consistency") {
  const auto t = sample_trajectory(testing::uniform_mu(), 30, 4);
  const auto s = t.shifted();
  CHECK(s.horizon() == 29);
  for (int k = 1; k <= 29; ++k) CHECK(s.position(k) == t.increment(1).inverse().compose(t.position(k + 1)));
}

TEST_CASE("batch") {
  const auto none = batch(testing::uniform_mu(), 5, 0, 1, [](const Trajectory&) { return 1; });
  CHECK(none.empty());
  const auto constant = batch(testing::uniform_mu(), 5, 10, 1, [](const Trajectory&) { return 7; });
  for (const auto& o : constant) CHECK(*o.value == 7);

  auto stat = [](const Trajectory& t) { return t.position(t.horizon()).hash(); };
  const auto w1 = batch(testing::uniform_mu(), 40, 64, 5, stat, 1);
  const auto w8 = batch(testing::uniform_mu(), 40, 64, 5, stat, 8);
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(*w1[i].value == *w8[i].value);

  const auto failing = batch(testing::uniform_mu(), 2, 3, 1, [](const Trajectory&) -> int { throw std::runtime_error("boom"); });
  for (const auto& o : failing) {
    CHECK_FALSE(o.value.has_value());
    CHECK(o.error == "boom");
  }
}
