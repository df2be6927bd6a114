#include <doctest.h>

#include <set>

#include "circlewalk/boundary.hpp"
#include "circlewalk/domination.hpp"
#include "support.hpp"

using namespace circlewalk;

namespace {

Arc arc(long a, long b, long q) { return {CirclePoint(a, q), CirclePoint(b, q)}; }

const CircleMap& elem_a() { return testing::gens().at("a").map; }

Arc support_J() { return elem_a().smallest_interval_containing_support(); }

}  // namespace

TEST_CASE("domination relation") {
  CHECK(dominates(arc(0, 1, 8), arc(1, 2, 4)));
  CHECK_FALSE(dominates(arc(0, 1, 4), arc(0, 1, 4)));
  CHECK(dominates(arc(0, 4, 8), arc(1, 2, 8)));
  CHECK_FALSE(dominates(arc(0, 4, 8), arc(0, 2, 8)));
  CHECK_FALSE(dominates(arc(0, 4, 8), arc(3, 5, 8)));
  CHECK(dominates(arc(7, 3, 8), arc(0, 1, 8)));
}

TEST_CASE("domination is irreflexive and equivariant") {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const long a = static_cast<long>(rng() % 32), b = static_cast<long>(rng() % 32);
    const long c = static_cast<long>(rng() % 32), d = static_cast<long>(rng() % 32);
    if (a == b || c == d) continue;
    const Arc i1 = arc(a, b, 32), i2 = arc(c, d, 32);
    CHECK_FALSE(dominates(i1, i1));
    const CircleMap g = testing::random_element(rng);
    CHECK(dominates(i1, i2) == dominates(i1.image(g), i2.image(g)));
  }
}

TEST_CASE("Z counter") {
  const auto t = sample_trajectory(testing::delta_mu(CircleMap()), 20, 1);
  CHECK(count_Z(t, support_J(), 1, 20) == 0);
  const auto u = sample_trajectory(testing::lazy_mu(), 60, 2);
  const int z = count_Z(u, support_J(), 1, 60);
  CHECK(z >= 0);
  CHECK(z <= 60);
  CHECK_THROWS(count_Z(u, support_J(), 7, 60));
}

TEST_CASE("collections of the trivial walk") {
  const auto mu = testing::lazy_mu();
  const Trajectory t(mu, 0, std::vector<std::uint32_t>(21, static_cast<std::uint32_t>(*mu->index_of(CircleMap()))));
  // only time 1, where the domination condition is vacuous, can be distinguished
  const auto q = extract_good_collection(t, CirclePoint(1, 2), elem_a(), support_J(), 20);
  CHECK(q.times == std::vector<int>{1});
  CHECK(q.fixed.size() == 19);
  CHECK(enumerate_variants(q, elem_a()).size() == 2);
  CHECK(is_satisfactory(q, elem_a()));
  const auto inside = extract_good_collection(t, CirclePoint(5, 16), elem_a(), support_J(), 20);
  CHECK(inside.k() == 0);
  CHECK(inside.fixed.size() == 20);
  CHECK(enumerate_variants(inside, elem_a()).size() == 1);
  CHECK(is_satisfactory(inside, elem_a()));
  CHECK(count_W(t, CirclePoint(1, 2), elem_a(), support_J(), 20) == 0);
}

TEST_CASE("extracted collections are well formed and unique") {
  const auto mu = testing::lazy_mu();
  for (int s = 0; s < 40; ++s) {
    const auto t = sample_trajectory(mu, 150, derive_seed(9, static_cast<std::uint64_t>(s)));
    const auto xi = estimate_xi(t, 150);
    const auto q = extract_good_collection(t, xi.xi_hat, elem_a(), support_J(), 30);
    CHECK(q == extract_good_collection(t, xi.xi_hat, elem_a(), support_J(), 30));
    CHECK(q.fixed.size() + q.times.size() == 30);
    for (std::size_t i = 1; i < q.times.size(); ++i) CHECK(q.times[i - 1] < q.times[i]);
    for (auto f : q.fixed) CHECK(f < mu->size());

    // W_n equals the distinguished times in [2, n+1] of the collection at n+1
    const auto longer = extract_good_collection(t, xi.xi_hat, elem_a(), support_J(), 31);
    int shifted = 0;
    for (int i : longer.times) shifted += i >= 2 ? 1 : 0;
    CHECK(count_W(t, xi.xi_hat, elem_a(), support_J(), 30) == shifted);

    const auto small = truncate_collection(q, t, 6);
    CHECK(small.k() == std::min(q.k(), 6));
    const auto variants = enumerate_variants(small, elem_a());
    CHECK(variants.size() == (std::size_t{1} << small.k()));
    CHECK(is_satisfactory(small, elem_a()));
    if (small.k() == 0) CHECK(variants.front() == t.position(30));
  }
}

TEST_CASE("variants with one distinguished time differ by one insertion") {
  const auto mu = testing::lazy_mu();
  Collection q{mu, 3, {2}, {static_cast<std::uint32_t>(*mu->index_of(testing::gens().at("A").map)),
                            static_cast<std::uint32_t>(*mu->index_of(testing::gens().at("B").map))}};
  const auto v = enumerate_variants(q, elem_a());
  REQUIRE(v.size() == 2);
  const CircleMap& A = testing::gens().at("A").map;
  const CircleMap& B = testing::gens().at("B").map;
  CHECK(v[0] == A.compose(B));
  CHECK(v[1] == A.compose(elem_a()).compose(B));
}

TEST_CASE("variants share the arcs before each distinguished time") {
  const auto mu = testing::lazy_mu();
  int checked = 0;
  for (int s = 0; s < 60 && checked < 10; ++s) {
    const auto t = sample_trajectory(mu, 150, derive_seed(10, static_cast<std::uint64_t>(s)));
    const auto xi = estimate_xi(t, 150);
    const auto q = truncate_collection(extract_good_collection(t, xi.xi_hat, elem_a(), support_J(), 30), t, 4);
    if (q.k() < 2) continue;
    ++checked;
    for (std::uint32_t bits = 0; bits < (1U << q.k()); ++bits) {
      CircleMap y;
      std::size_t f = 0;
      int r = 0;
      for (int i = 1; i <= q.n; ++i) {
        if (r < q.k() && q.times[static_cast<std::size_t>(r)] == i) {
          CHECK(support_J().image(y) == support_J().image(t.position(i - 1)));
          if ((bits >> r) & 1U) y = y.compose(elem_a());
          ++r;
        } else {
          y = y.compose(mu->element(q.fixed[f++]));
        }
        if (r == 0) CHECK(y == t.position(i));
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("dominating probability") {
  const auto p = dominating_probability(testing::lazy_mu(), support_J(), 1, 5, {200, 1, 1});
  CHECK(p.mean >= 0.0);
  CHECK(p.mean <= 1.0);
  CHECK(p.n == 200);
}
