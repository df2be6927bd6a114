#include "circlewalk/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace circlewalk {

namespace {

struct MapHash {
  std::size_t operator()(const CircleMap& g) const { return g.hash(); }
};

double plogp(const Rational& p) {
  if (p.is_zero()) return 0.0;
  // log of the exact ratio, computed from numerator and denominator separately
  // so tiny weights keep their precision.
  long exp_num = 0, exp_den = 0;
  const double dn = mpz_get_d_2exp(&exp_num, p.raw().get_num_mpz_t());
  const double dd = mpz_get_d_2exp(&exp_den, p.raw().get_den_mpz_t());
  const double lg = std::log(dn) - std::log(dd) + static_cast<double>(exp_num - exp_den) * std::log(2.0);
  return p.to_double() * lg;
}

}  // namespace

double shannon_entropy(const std::vector<Rational>& weights) {
  long double h = 0.0L;
  for (const auto& w : weights) {
    if (w.sign() < 0) throw std::invalid_argument("negative weight");
    h -= plogp(w);
  }
  return static_cast<double>(h);
}

double shannon_entropy(const StepDistribution& mu) {
  std::vector<Rational> w;
  for (const auto& atom : mu.atoms()) w.push_back(atom.weight);
  return shannon_entropy(w);
}

double bernoulli_entropy(const Rational& p_a, const Rational& p_e) {
  if (p_a.sign() <= 0 || p_e.sign() <= 0) throw std::invalid_argument("bernoulli_entropy: weights must be positive");
  const Rational total = p_a + p_e;
  return shannon_entropy({p_a / total, p_e / total});
}

std::vector<double> EntropyCurve::increments() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < points.size(); ++i) d.push_back(points[i].entropy - points[i - 1].entropy);
  return d;
}

EntropyCurve entropy_curve(const StepDistribution& mu, int n_max, std::size_t support_cap, int workers) {
  if (n_max < 1) throw std::invalid_argument("entropy_curve: n_max must be >= 1");
  EntropyCurve curve;
  std::vector<CircleMap> elems;
  std::vector<Rational> weights;
  for (const auto& atom : mu.atoms()) {
    elems.push_back(atom.element);
    weights.push_back(atom.weight);
  }
  curve.points.push_back({1, shannon_entropy(weights), elems.size()});
  const std::size_t m = mu.size();
  for (int n = 2; n <= n_max; ++n) {
    // Products are computed in parallel; merging walks them in a fixed order.
    std::vector<CircleMap> prods(elems.size() * m);
    parallel_for(static_cast<int>(elems.size()), workers, [&](int i) {
      for (std::size_t j = 0; j < m; ++j)
        prods[static_cast<std::size_t>(i) * m + j] = elems[static_cast<std::size_t>(i)].compose(mu.element(j));
    });
    std::unordered_map<CircleMap, std::size_t, MapHash> index;
    std::vector<CircleMap> next;
    std::vector<Rational> next_w;
    bool over = false;
    for (std::size_t i = 0; i < elems.size() && !over; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        auto& g = prods[i * m + j];
        const Rational w = weights[i] * mu.weight(j);
        auto it = index.find(g);
        if (it != index.end()) {
          next_w[it->second] += w;
          continue;
        }
        if (next.size() >= support_cap) {
          over = true;
          break;
        }
        index.emplace(g, next.size());
        next.push_back(std::move(g));
        next_w.push_back(w);
      }
    }
    if (over) {
      curve.truncated = true;
      curve.truncated_at = n;
      break;
    }
    elems = std::move(next);
    weights = std::move(next_w);
    curve.points.push_back({n, shannon_entropy(weights), elems.size()});
  }
  return curve;
}

namespace {

// Miller–Madow corrected plug-in entropy of w_n within each bin, averaged
// with the bin frequencies. `weight[s]` is the multiplicity of sample s.
struct ProxyValue {
  double value = 0.0;
  int undersampled = 0;
};

ProxyValue proxy_value(const std::vector<int>& bin, const std::vector<int>& id, const std::vector<int>& weight, int bins) {
  std::vector<std::unordered_map<int, int>> counts(static_cast<std::size_t>(bins));
  std::vector<long> per_bin(static_cast<std::size_t>(bins), 0);
  long total = 0;
  for (std::size_t s = 0; s < bin.size(); ++s) {
    if (weight[s] == 0) continue;
    counts[static_cast<std::size_t>(bin[s])][id[s]] += weight[s];
    per_bin[static_cast<std::size_t>(bin[s])] += weight[s];
    total += weight[s];
  }
  ProxyValue out;
  if (total == 0) return out;
  for (int b = 0; b < bins; ++b) {
    const long nb = per_bin[static_cast<std::size_t>(b)];
    if (nb == 0) continue;
    double h = 0.0;
    int singletons = 0;
    for (const auto& [key, c] : counts[static_cast<std::size_t>(b)]) {
      const double p = static_cast<double>(c) / static_cast<double>(nb);
      h -= p * std::log(p);
      singletons += c == 1 ? 1 : 0;
    }
    const double kb = static_cast<double>(counts[static_cast<std::size_t>(b)].size());
    h += (kb - 1.0) / (2.0 * static_cast<double>(nb));
    if (2 * singletons > nb) ++out.undersampled;
    out.value += static_cast<double>(nb) / static_cast<double>(total) * h;
  }
  return out;
}

}  // namespace

CondEntropyReport conditional_entropy_proxy(const MeasurePtr& mu, int n, int arc_bins, int xi_horizon,
                                            const MonteCarlo& mc, int bootstrap, const GridOptions& grid) {
  if (n < 1) throw std::invalid_argument("conditional_entropy_proxy: n must be >= 1");
  if (arc_bins < 1) throw std::invalid_argument("conditional_entropy_proxy: arc_bins must be >= 1");
  if (xi_horizon < n) throw std::invalid_argument("conditional_entropy_proxy: xi_horizon must be >= n");
  if (bootstrap < 0) throw std::invalid_argument("conditional_entropy_proxy: bootstrap must be >= 0");
  struct Sample {
    CircleMap w;
    CirclePoint xi;
    bool concentrated;
  };
  auto outcomes = batch(
      mu, xi_horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        const BoundaryEstimate e = estimate_xi(t, xi_horizon, grid);
        return Sample{t.position(n), e.xi_hat, e.concentrated};
      },
      mc.workers);
  CondEntropyReport r;
  r.n = n;
  r.bins = arc_bins;
  r.trials = mc.trials;
  r.bootstrap = bootstrap;
  std::unordered_map<CircleMap, int, MapHash> ids;
  std::vector<int> bin, id;
  const EmpiricalMeasure binner(std::max(arc_bins, 2));
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("conditional entropy trial failed: " + o.error);
    const int b = arc_bins == 1 ? 0 : binner.bin_of(o.value->xi);
    auto [it, fresh] = ids.emplace(o.value->w, static_cast<int>(ids.size()));
    bin.push_back(b);
    id.push_back(it->second);
    if (!o.value->concentrated) ++r.not_concentrated;
  }
  const std::vector<int> ones(bin.size(), 1);
  const ProxyValue point = proxy_value(bin, id, ones, arc_bins);
  r.proxy = point.value;
  r.undersampled_bins = point.undersampled;
  r.ci_low = r.ci_high = r.proxy;
  if (bootstrap > 0 && !bin.empty()) {
    Rng rng(derive_seed(mc.seed, 0xb007));
    std::uniform_int_distribution<std::size_t> pick(0, bin.size() - 1);
    std::vector<double> reps;
    std::vector<int> w(bin.size());
    for (int b = 0; b < bootstrap; ++b) {
      std::fill(w.begin(), w.end(), 0);
      for (std::size_t s = 0; s < bin.size(); ++s) ++w[pick(rng)];
      reps.push_back(proxy_value(bin, id, w, arc_bins).value);
    }
    const MeanEstimate spread = mean_estimate(reps);
    const double sd = spread.se * std::sqrt(static_cast<double>(reps.size()));
    r.ci_low = r.proxy - 1.96 * sd;
    r.ci_high = r.proxy + 1.96 * sd;
  }
  return r;
}

}  // namespace circlewalk
