#include <doctest.h>

#include "circlewalk/cocycle.hpp"
#include "support.hpp"

using namespace circlewalk;

TEST_CASE("cocycles of simple elements") {
  CHECK(cocycle(CircleMap()).empty());
  CHECK(cocycle(CircleMap::rotation(Rational(1, 4))).empty());

  const auto c = cocycle(remark_element(CirclePoint(1, 2), 4));
  CHECK(c.size() == 3);
  CHECK(c.exponent(CirclePoint(1, 2)) == -4);
  CHECK(c.exponent(CirclePoint(9, 16)) == 8);
  CHECK(c.exponent(CirclePoint(145, 256)) == -4);
  CHECK(c.exponent(CirclePoint(1, 3)) == 0);
  CHECK(c.exact());
  for (int n = 1; n <= 6; ++n) CHECK(cocycle(remark_element(CirclePoint(1, 4), n)).exponent(CirclePoint(1, 4)) == -n);
}

TEST_CASE("configuration arithmetic") {
  BreakpointConfiguration c;
  c.add(CirclePoint(1, 2), Rational(4));
  c.add(CirclePoint(1, 2), Rational(1, 4));
  CHECK(c.empty());
  c.add(CirclePoint(1, 4), Rational(8));
  CHECK(c.log2_value(CirclePoint(1, 4)) == 3.0);
  CHECK((c + (-c)).empty());
  CHECK(c.str() == "{1/4: 3}");
}

TEST_CASE("shift and act") {
  const CircleMap a = testing::gens().at("A").map;
  const auto c = cocycle(testing::gens().at("B").map);
  CHECK(shift_config(CircleMap(), c) == c);
  CHECK(act(a, BreakpointConfiguration()) == cocycle(a));
  CHECK(verify_chain_rule(a, CircleMap()));
  CHECK(act(a.inverse(), cocycle(a)).empty());
}

TEST_CASE("chain rule, inverse rule and left action on random pairs") {
  Rng rng(51);
  for (int i = 0; i < 300; ++i) {
    const CircleMap g = testing::random_element(rng), h = testing::random_element(rng), k = testing::random_element(rng);
    CHECK(verify_chain_rule(g, h));
    CHECK(cocycle(g.inverse()) == -shift_config(g.inverse(), cocycle(g)));
    CHECK(act(g, act(h, cocycle(k))) == act(g.compose(h), cocycle(k)));
    CHECK(cocycle(g).exact());
  }
}

TEST_CASE("measure breakpoints") {
  const auto pts = measure_breakpoints(*testing::uniform_mu());
  CHECK(pts.size() == 6);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("configuration tracking") {
  const auto rot = testing::delta_mu(CircleMap::rotation(Rational(1, 2)));
  const auto t = sample_trajectory(rot, 20, 1);
  for (const auto& p : track_configuration(t, {CirclePoint(0, 1), CirclePoint(1, 2)}, 20)) {
    CHECK(p.changes.empty());
    CHECK(p.final_ratio == Rational(1));
  }

  const auto mu = testing::uniform_mu();
  const auto watched = measure_breakpoints(*mu);
  for (int s = 0; s < 20; ++s) {
    const auto u = sample_trajectory(mu, 60, derive_seed(6, static_cast<std::uint64_t>(s)));
    const auto tracks = track_configuration(u, watched, 60);
    const auto full = cocycle(u.position(60));
    for (const auto& p : tracks) {
      CHECK(full.ratio(p.x) == p.final_ratio);
      if (p.last_change > 0) CHECK(cocycle(u.position(p.last_change)).ratio(p.x) == p.final_ratio);
      for (const auto& [n, r] : p.changes) CHECK(cocycle(u.position(n)).ratio(p.x) == r);
    }
  }
}

TEST_CASE("return statistics") {
  const CircleMap A = testing::gens().at("A").map;
  const auto fixed = orbit_return_stats(testing::delta_mu(A), CirclePoint(0, 1), 10, {5, 1, 1});
  CHECK(fixed.degenerate);
  for (int r : fixed.returns) CHECK(r == 10);

  const auto free = orbit_return_stats(testing::delta_mu(A), CirclePoint(1, 4), 10, {5, 1, 1});
  for (int r : free.returns) CHECK(r == 0);
  CHECK_FALSE(free.degenerate);
}

TEST_CASE("harmonic estimates") {
  const auto rot = testing::delta_mu(CircleMap::rotation(Rational(1, 2)));
  const auto h = estimate_harmonic(rot, CircleMap(), CirclePoint(1, 2), 0, 20, {50, 1, 1});
  CHECK(h.value.mean == 1.0);

  const auto far = estimate_harmonic(testing::uniform_mu(), CircleMap(), CirclePoint(1, 2), 40, 30, {100, 1, 1});
  CHECK(far.value.mean == 0.0);

  const auto cal = calibrate_harmonic_target(testing::uniform_mu(), CirclePoint(1, 2), 100, {300, 2, 1});
  int total = 0;
  for (const auto& [k, c] : cal.histogram) total += c;
  CHECK(total == 300);
  CHECK(cal.frequency > 0.0);
}
