#include "circlewalk/domination.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace circlewalk {

namespace {

bool proper(const Arc& a) { return !a.is_point(); }

// Arcs w_k(J) for k = 0..n, built from the running product.
std::vector<Arc> image_arcs(const Trajectory& t, const Arc& J, int n) {
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(n) + 1);
  CircleMap w = CircleMap::identity();
  arcs.push_back(J);
  for (int k = 1; k <= n; ++k) {
    w = w.compose(t.increment(k));
    arcs.push_back(J.image(w));
  }
  return arcs;
}

// record[k]: w_k(J) dominates w_j(J) for all j < k.
std::vector<bool> record_times(const std::vector<Arc>& arcs) {
  std::vector<bool> rec(arcs.size(), false);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) ok = dominates(arcs[k], arcs[j]);
    rec[k] = ok;
  }
  return rec;
}

struct Marked {
  std::optional<std::size_t> a;
  std::optional<std::size_t> e;
  bool matches(std::uint32_t idx) const { return (a && *a == idx) || (e && *e == idx); }
};

Marked mark(const StepDistribution& mu, const CircleMap& a) {
  Marked m{mu.index_of(a), mu.index_of(CircleMap::identity())};
  if (!m.a) throw std::invalid_argument("a is not in the support of the measure");
  return m;
}

void check_J(const Arc& J) {
  if (!proper(J)) throw std::invalid_argument("J must be a proper arc with nonempty interior");
}

}  // namespace

bool dominates(const Arc& i1, const Arc& i2) {
  if (!i1.intersects(i2)) return true;
  const Rational off = i2.left.offset_from(i1.left);
  return off.sign() > 0 && off + i2.length() < i1.length();
}

int count_Z(const Trajectory& t, const Arc& J, int s, int n) {
  check_J(J);
  if (s < 1 || n < 1) throw std::invalid_argument("count_Z: need s >= 1 and n >= 1");
  const int kmax = (n + s - 1) / s;
  if (kmax * s > t.horizon()) throw std::invalid_argument("count_Z: trajectory shorter than s*ceil(n/s)");
  std::vector<Arc> sampled;
  CircleMap w = CircleMap::identity();
  sampled.push_back(J);
  for (int k = 1; k <= kmax; ++k) {
    for (int step = (k - 1) * s + 1; step <= k * s; ++step) w = w.compose(t.increment(step));
    sampled.push_back(J.image(w));
  }
  const auto rec = record_times(sampled);
  int z = 0;
  for (int k = 1; k <= kmax; ++k) z += rec[static_cast<std::size_t>(k)] ? 1 : 0;
  return z;
}

MeanEstimate dominating_probability(const MeasurePtr& mu, const Arc& J, int s, int j_max, const MonteCarlo& mc) {
  check_J(J);
  if (s < 1 || j_max < 1) throw std::invalid_argument("dominating_probability: need s >= 1 and j_max >= 1");
  auto outcomes = batch(
      mu, s * j_max, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        CircleMap w = CircleMap::identity();
        for (int j = 1; j <= j_max; ++j) {
          for (int step = (j - 1) * s + 1; step <= j * s; ++step) w = w.compose(t.increment(step));
          if (!dominates(J.image(w), J)) return 0.0;
        }
        return 1.0;
      },
      mc.workers);
  std::vector<double> xs;
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("dominating_probability trial failed: " + o.error);
    xs.push_back(*o.value);
  }
  return mean_estimate(xs);
}

Collection extract_good_collection(const Trajectory& t, const CirclePoint& xi, const CircleMap& a, const Arc& J, int n) {
  check_J(J);
  if (n < 0 || n > t.horizon()) throw std::invalid_argument("extract_good_collection: n outside trajectory");
  const Marked m = mark(t.measure(), a);
  const auto arcs = image_arcs(t, J, n > 0 ? n - 1 : 0);
  const auto rec = record_times(arcs);
  const auto pulled = t.backward_orbit(n, xi);
  Collection q{t.measure_ptr(), n, {}, {}};
  for (int i = 1; i <= n; ++i) {
    const bool good = rec[static_cast<std::size_t>(i - 1)] && m.matches(t.step(i)) &&
                      !J.contains(pulled[static_cast<std::size_t>(i)]);
    if (good)
      q.times.push_back(i);
    else
      q.fixed.push_back(t.step(i));
  }
  return q;
}

Collection truncate_collection(const Collection& q, const Trajectory& t, int k_max) {
  if (k_max < 0) throw std::invalid_argument("truncate_collection: k_max must be >= 0");
  if (q.k() <= k_max) return q;
  Collection out{q.mu, q.n, {}, {}};
  out.times.assign(q.times.begin(), q.times.begin() + k_max);
  for (int i = 1; i <= q.n; ++i)
    if (!std::binary_search(out.times.begin(), out.times.end(), i)) out.fixed.push_back(t.step(i));
  return out;
}

std::vector<CircleMap> enumerate_variants(const Collection& q, const CircleMap& a, int cap) {
  if (q.k() > cap) throw std::invalid_argument("enumerate_variants: " + std::to_string(q.k()) + " distinguished times exceed cap " + std::to_string(cap));
  if (static_cast<int>(q.fixed.size()) + q.k() != q.n) throw std::invalid_argument("enumerate_variants: malformed collection");
  // blocks[r] is the product of fixed increments between i_r and i_{r+1}.
  std::vector<CircleMap> blocks;
  std::size_t f = 0;
  int prev = 0;
  auto block_until = [&](int end) {
    std::vector<const CircleMap*> maps;
    for (int i = prev + 1; i < end; ++i) maps.push_back(&q.mu->element(q.fixed[f++]));
    blocks.push_back(product(maps, 0, maps.size()));
  };
  for (int i : q.times) {
    block_until(i);
    prev = i;
  }
  block_until(q.n + 1);

  const int k = q.k();
  std::vector<CircleMap> out(std::size_t{1} << k);
  // Depth-first over the choices; acc = b_1 g_{i_1} ... b_r g_{i_r}.
  auto rec = [&](auto& self, int r, const CircleMap& acc, std::size_t index) -> void {
    const CircleMap with_block = acc.compose(blocks[static_cast<std::size_t>(r)]);
    if (r == k) {
      out[index] = with_block;
      return;
    }
    self(self, r + 1, with_block, index);
    self(self, r + 1, with_block.compose(a), index | (std::size_t{1} << r));
  };
  rec(rec, 0, CircleMap::identity(), 0);
  return out;
}

bool is_satisfactory(const Collection& q, const CircleMap& a, int cap) {
  const auto ends = enumerate_variants(q, a, cap);
  struct Hash {
    std::size_t operator()(const CircleMap& g) const { return g.hash(); }
  };
  std::unordered_set<CircleMap, Hash> seen;
  for (const auto& g : ends)
    if (!seen.insert(g).second) return false;
  return true;
}

int count_W(const Trajectory& t, const CirclePoint& xi, const CircleMap& a, const Arc& J, int n) {
  check_J(J);
  if (n < 1 || n + 1 > t.horizon()) throw std::invalid_argument("count_W: need 1 <= n and n+1 <= horizon");
  const Marked m = mark(t.measure(), a);
  const auto rec = record_times(image_arcs(t, J, n));
  const auto pulled = t.backward_orbit(n, xi);
  int w = 0;
  for (int k = 1; k <= n; ++k)
    if (rec[static_cast<std::size_t>(k)] && !J.contains(pulled[static_cast<std::size_t>(k)]) && m.matches(t.step(k + 1))) ++w;
  return w;
}

}  // namespace circlewalk
