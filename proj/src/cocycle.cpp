#include "circlewalk/cocycle.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "circlewalk/thompson.hpp"

namespace circlewalk {

Rational BreakpointConfiguration::ratio(const CirclePoint& x) const {
  auto it = ratios_.find(x);
  return it == ratios_.end() ? Rational(1) : it->second;
}

long BreakpointConfiguration::exponent(const CirclePoint& x) const { return ratio(x).log2_exact(); }

double BreakpointConfiguration::log2_value(const CirclePoint& x) const {
  const Rational r = ratio(x);
  if (r.is_power_of_two()) return static_cast<double>(r.log2_exact());
  return std::log2(r.to_double());
}

bool BreakpointConfiguration::exact() const {
  for (const auto& [x, r] : ratios_)
    if (!r.is_power_of_two()) return false;
  return true;
}

void BreakpointConfiguration::add(const CirclePoint& x, const Rational& r) {
  if (r.sign() <= 0) throw std::invalid_argument("configuration ratios must be positive");
  if (r == Rational(1)) return;
  auto [it, fresh] = ratios_.emplace(x, r);
  if (fresh) return;
  it->second *= r;
  if (it->second == Rational(1)) ratios_.erase(it);
}

BreakpointConfiguration operator+(const BreakpointConfiguration& a, const BreakpointConfiguration& b) {
  BreakpointConfiguration out = a;
  for (const auto& [x, r] : b.ratios_) out.add(x, r);
  return out;
}

BreakpointConfiguration operator-(const BreakpointConfiguration& a) {
  BreakpointConfiguration out;
  for (const auto& [x, r] : a.ratios_) out.ratios_.emplace(x, r.reciprocal());
  return out;
}

std::string BreakpointConfiguration::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  const bool ex = exact();
  for (const auto& [x, r] : ratios_) {
    os << (first ? "" : ", ") << x.str() << ": ";
    if (ex)
      os << r.log2_exact();
    else
      os << "log2(" << r.str() << ")";
    first = false;
  }
  os << '}';
  return os.str();
}

BreakpointConfiguration cocycle(const CircleMap& g) {
  BreakpointConfiguration c;
  const CircleMap inv = g.inverse();
  for (const auto& x : inv.breakpoints()) c.add(x, inv.derivative_jump_ratio(x));
  return c;
}

BreakpointConfiguration shift_config(const CircleMap& g, const BreakpointConfiguration& c) {
  BreakpointConfiguration out;
  for (const auto& [x, r] : c.entries()) out.add(g(x), r);
  return out;
}

BreakpointConfiguration act(const CircleMap& g, const BreakpointConfiguration& c) { return cocycle(g) + shift_config(g, c); }

bool verify_chain_rule(const CircleMap& g, const CircleMap& h) { return cocycle(g.compose(h)) == act(g, cocycle(h)); }

std::vector<BreakpointConfiguration> atom_cocycles(const StepDistribution& mu) {
  std::vector<BreakpointConfiguration> out;
  out.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out.push_back(cocycle(mu.element(i)));
  return out;
}

namespace {

// Ratio C_{w_horizon}(x) and the last time it changed.
struct Followed {
  Rational ratio{1};
  int last_change = 0;
};

template <class OnChange>
Followed follow(const Trajectory& t, const std::vector<BreakpointConfiguration>& cocycles, const CirclePoint& x, int horizon,
                OnChange&& on_change) {
  Followed f;
  CirclePoint p = x;
  for (int n = 0; n < horizon; ++n) {
    const std::uint32_t idx = t.step(n + 1);
    const auto& entries = cocycles[idx].entries();
    if (auto it = entries.find(p); it != entries.end()) {
      f.ratio *= it->second;
      f.last_change = n + 1;
      on_change(n + 1, f.ratio);
    }
    p = t.inverse_increment(n + 1)(p);
  }
  return f;
}

}  // namespace

std::vector<PointTrack> track_configuration(const Trajectory& t, const std::vector<CirclePoint>& watched, int horizon) {
  if (horizon < 0 || horizon > t.horizon()) throw std::invalid_argument("track_configuration: horizon beyond trajectory");
  const auto cocycles = atom_cocycles(t.measure());
  std::vector<PointTrack> out;
  for (const auto& x : watched) {
    PointTrack track;
    track.x = x;
    const Followed f = follow(t, cocycles, x, horizon, [&](int n, const Rational& r) { track.changes.emplace_back(n, r); });
    track.last_change = f.last_change;
    track.final_ratio = f.ratio;
    out.push_back(std::move(track));
  }
  return out;
}

std::vector<CirclePoint> measure_breakpoints(const StepDistribution& mu) {
  std::set<CirclePoint> pts;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (const auto& x : mu.element(i).breakpoints()) pts.insert(x);
    for (const auto& x : mu.inverse_element(i).breakpoints()) pts.insert(x);
  }
  return {pts.begin(), pts.end()};
}

ReturnStats orbit_return_stats(const MeasurePtr& mu, const CirclePoint& x, int horizon, const MonteCarlo& mc) {
  if (horizon < 1) throw std::invalid_argument("orbit_return_stats: horizon must be >= 1");
  auto outcomes = batch(
      mu, horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        std::pair<int, int> rl{0, 0};
        CirclePoint p = x;
        for (int n = 1; n <= horizon; ++n) {
          p = t.inverse_increment(n)(p);
          if (p == x) {
            ++rl.first;
            rl.second = n;
          }
        }
        return rl;
      },
      mc.workers);
  ReturnStats s;
  std::vector<double> r;
  int below = 0;
  bool all_steps = !outcomes.empty();
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("orbit_return_stats trial failed: " + o.error);
    s.returns.push_back(o.value->first);
    s.last_return.push_back(o.value->second);
    r.push_back(o.value->first);
    if (2 * o.value->second < horizon) ++below;
    if (o.value->first != horizon) all_steps = false;
  }
  s.mean_returns = mean_estimate(r);
  s.fraction_last_below_half = outcomes.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(outcomes.size());
  s.degenerate = all_steps;
  return s;
}

namespace {

struct Limit {
  Rational ratio;
  bool unstabilized;
};

std::vector<TrialOutcome<Limit>> limits_at(const MeasurePtr& mu, const CirclePoint& z, int horizon, const MonteCarlo& mc) {
  const auto cocycles = atom_cocycles(*mu);
  return batch(
      mu, horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        const Followed f = follow(t, cocycles, z, horizon, [](int, const Rational&) {});
        return Limit{f.ratio, 2 * f.last_change > horizon};
      },
      mc.workers);
}

}  // namespace

HarmonicEstimate estimate_harmonic(const MeasurePtr& mu, const CircleMap& g, const CirclePoint& y, long k, int horizon,
                                   const MonteCarlo& mc) {
  if (horizon < 1) throw std::invalid_argument("estimate_harmonic: horizon must be >= 1");
  const Rational target = Rational::pow2(k);
  const Rational base = cocycle(g).ratio(y);
  HarmonicEstimate h;
  h.trials = mc.trials;
  std::vector<double> hits;
  for (auto& o : limits_at(mu, g.evaluate_inverse(y), horizon, mc)) {
    if (!o.value) throw std::runtime_error("estimate_harmonic trial failed: " + o.error);
    hits.push_back(base * o.value->ratio == target ? 1.0 : 0.0);
    if (o.value->unstabilized) ++h.unstabilized;
  }
  h.value = mean_estimate(hits);
  return h;
}

MeanValueCheck harmonic_mean_value_check(const MeasurePtr& mu, const CircleMap& g, const CirclePoint& y, long k,
                                         int horizon, const MonteCarlo& mc) {
  auto with_seed = [&](std::uint64_t index) {
    MonteCarlo m = mc;
    m.seed = derive_seed(mc.seed, index);
    return m;
  };
  MeanValueCheck c;
  c.f_g = estimate_harmonic(mu, g, y, k, horizon, with_seed(0));
  double var = c.f_g.value.se * c.f_g.value.se;
  for (std::size_t i = 0; i < mu->size(); ++i) {
    c.f_gh.push_back(estimate_harmonic(mu, g.compose(mu->element(i)), y, k, horizon, with_seed(i + 1)));
    const double w = mu->weight(i).to_double();
    c.mean_value += w * c.f_gh.back().value.mean;
    var += w * w * c.f_gh.back().value.se * c.f_gh.back().value.se;
  }
  c.diff = c.f_g.value.mean - c.mean_value;
  c.sigma = std::sqrt(var);
  return c;
}

HarmonicTarget calibrate_harmonic_target(const MeasurePtr& mu, const CirclePoint& y, int horizon, const MonteCarlo& mc) {
  HarmonicTarget t;
  int total = 0;
  for (auto& o : limits_at(mu, y, horizon, mc)) {
    if (!o.value) throw std::runtime_error("calibration trial failed: " + o.error);
    if (!o.value->ratio.is_power_of_two()) throw std::invalid_argument("calibration needs base-2 jumps");
    ++t.histogram[o.value->ratio.log2_exact()];
    ++total;
    if (o.value->unstabilized) ++t.unstabilized;
  }
  int best = -1;
  for (const auto& [k, c] : t.histogram)
    if (c > best) {
      best = c;
      t.k = k;
    }
  t.frequency = total ? static_cast<double>(best) / total : 0.0;
  return t;
}

TheoremBReport theorem_b_witness(const MeasurePtr& mu, const CirclePoint& y, long k, const std::vector<int>& n_list,
                                 const MonteCarlo& mc, const TheoremBOptions& opts) {
  TheoremBReport rep;
  rep.k = k;
  auto with_seed = [&](std::uint64_t index) {
    MonteCarlo m = mc;
    m.seed = derive_seed(mc.seed, index);
    return m;
  };
  const HarmonicEstimate f_e = estimate_harmonic(mu, CircleMap::identity(), y, k, opts.horizon, with_seed(0));
  if (f_e.value.mean == 0.0) throw std::runtime_error("theorem_b_witness: calibration failure, f(e) estimated as 0");
  for (int n : n_list) {
    TheoremBRow row;
    row.n = n;
    row.f_e = f_e;
    const CircleMap a_n = remark_element(y, n);
    row.I_n = a_n.smallest_interval_containing_support();
    row.f_an = estimate_harmonic(mu, a_n, y, k, opts.horizon, with_seed(2 * static_cast<std::uint64_t>(n) + 1));
    row.nu_In = arc_mass(mu, row.I_n, opts.xi_horizon, with_seed(2 * static_cast<std::uint64_t>(n) + 2), opts.grid);
    row.margin = std::abs(row.f_an.value.mean - row.f_e.value.mean) - 2.0 * row.nu_In.mean;
    row.sigma = std::sqrt(row.f_e.value.se * row.f_e.value.se + row.f_an.value.se * row.f_an.value.se +
                          4.0 * row.nu_In.se * row.nu_In.se);
    row.verdict = row.margin > 3.0 * row.sigma;
    rep.verdict = rep.verdict || row.verdict;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace circlewalk
