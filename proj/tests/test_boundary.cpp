#include <doctest.h>

#include "circlewalk/boundary.hpp"
#include "support.hpp"

using namespace circlewalk;

TEST_CASE("identity walk never concentrates") {
  const auto t = sample_trajectory(testing::delta_mu(CircleMap()), 20, 1);
  const auto est = estimate_xi(t, 20);
  CHECK_FALSE(est.concentrated);
  CHECK(est.concentration_radius >= Rational(2, 5));
  CHECK(est.covered >= 58);
}

TEST_CASE("boundary estimate covers the required share of the grid") {
  const auto mu = testing::uniform_mu();
  for (int s = 0; s < 20; ++s) {
    const auto t = sample_trajectory(mu, 120, derive_seed(4, static_cast<std::uint64_t>(s)));
    const auto est = estimate_xi(t, 120);
    int inside = 0;
    for (int i = 0; i < 64; ++i)
      inside += circle_dist(t.position(120)(CirclePoint(i, 64)), est.xi_hat) <= est.concentration_radius ? 1 : 0;
    CHECK(inside >= 58);
    CHECK(est.covered >= 58);
  }
}

TEST_CASE("empirical measure") {
  EmpiricalMeasure h(4);
  h.add(CirclePoint(0, 1));
  h.add(CirclePoint(1, 4));
  h.add(CirclePoint(7, 8));
  CHECK(h.counts == std::vector<long>{1, 1, 0, 1});
  CHECK(h.total == 3);
  CHECK(h.bin_of(CirclePoint(1, 2)) == 2);
  CHECK(max_bin_zscore(h, h) == 0.0);
}

TEST_CASE("contraction curve for the trivial walk") {
  const auto r = contraction_curve(testing::delta_mu(CircleMap()), CirclePoint(0, 1), CirclePoint(1, 2), 20, {50, 1, 1});
  CHECK(r.points.size() == 20);
  for (const auto& p : r.points) CHECK(p.mean_exact == Rational(1, 2));
  CHECK(r.lambda_hat == 0.0);
}

TEST_CASE("contraction curve is exact and reproducible") {
  const MonteCarlo mc{100, 3, 1};
  const auto r1 = contraction_curve(testing::lazy_mu(), CirclePoint(0, 1), CirclePoint(1, 2), 30, mc);
  const auto r2 = contraction_curve(testing::lazy_mu(), CirclePoint(0, 1), CirclePoint(1, 2), 30, {100, 3, 4});
  REQUIRE(r1.points.size() == r2.points.size());
  for (std::size_t i = 0; i < r1.points.size(); ++i) {
    CHECK(r1.points[i].mean_exact == r2.points[i].mean_exact);
    CHECK(r1.points[i].mean_exact >= Rational(0));
    CHECK(r1.points[i].mean_exact <= Rational(1, 2));
  }
}

TEST_CASE("boundary convergence of the trivial walk is degenerate") {
  const auto r = boundary_convergence_curve(testing::delta_mu(CircleMap()), CirclePoint(0, 1), 10, 50, {20, 1, 1});
  CHECK(r.degenerate);
  CHECK(r.excluded_trials == 20);
}

TEST_CASE("stationary histogram counts every trial") {
  const auto r = stationary_histogram(testing::uniform_mu(), 80, 8, {200, 2, 1});
  CHECK(r.histogram.total == 200);
  CHECK(r.pushed.total == 200);
  long sum = 0;
  for (long c : r.histogram.counts) sum += c;
  CHECK(sum == r.histogram.total);
}

TEST_CASE("visit fraction edge cases") {
  const Arc point{CirclePoint(1, 3), CirclePoint(1, 3)};
  const auto r = xi_visit_fraction(testing::uniform_mu(), point, 10, 60, {100, 1, 1});
  CHECK(r.fraction.mean == 0.0);
  const Arc J{CirclePoint(0, 1), CirclePoint(1, 4)};
  const auto d = xi_visit_fraction(testing::delta_mu(CircleMap()), J, 10, 60, {20, 1, 1});
  CHECK(d.degenerate);
}

TEST_CASE("conditional increment frequency of a point mass") {
  const CircleMap a = testing::gens().at("a").map;
  const Arc J = a.smallest_interval_containing_support();
  const auto r = conditional_increment_frequency(testing::delta_mu(a), a, J, 10, 60, {20, 1, 1});
  CHECK(r.expected == Rational(1));
  if (r.steps_counted > 0) CHECK(r.frequency.mean == 1.0);
}

TEST_CASE("contracting an interval into another") {
  const Arc I{CirclePoint(1, 8), CirclePoint(1, 4)}, J{CirclePoint(0, 1), CirclePoint(1, 2)};
  const auto same = contract_interval_into(testing::uniform_mu(), I, J, 100, {1, 1, 1});
  REQUIRE(same.map.has_value());
  CHECK(same.map->is_identity());

  const Arc small_J{CirclePoint(5, 8), CirclePoint(21, 32)};
  const auto r = contract_interval_into(testing::uniform_mu(), I, small_J, 1000, {10, 7, 1});
  REQUIRE(r.map.has_value());
  CHECK(small_J.contains(I.image(*r.map)));
}
