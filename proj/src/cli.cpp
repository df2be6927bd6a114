#include "circlewalk/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "circlewalk/cocycle.hpp"
#include "circlewalk/domination.hpp"
#include "circlewalk/entropy.hpp"
#include "circlewalk/thompson.hpp"

#ifndef CIRCLEWALK_VERSION
#define CIRCLEWALK_VERSION "0.0.0"
#endif

namespace circlewalk::cli {

namespace {

using json = nlohmann::json;
using Row = std::vector<std::string>;

struct Table {
  std::string name;  // file stem
  Row header;
  std::vector<Row> rows;
};

struct Output {
  std::vector<Table> tables;
  json summary = json::object();
};

std::string fmt(double v) { return format_real(v); }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

// ---------------------------------------------------------------------------
// Parameter access with validation

[[noreturn]] void bad(const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); }

long get_int(const json& cfg, const std::string& key, long lo, long hi) {
  const json& v = cfg.at(key);
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double get_real(const json& cfg, const std::string& key, double lo, double hi) {
  const json& v = cfg.at(key);
  if (!v.is_number()) bad(key, "expected a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) bad(key, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
  return x;
}

std::string get_string(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

Rational to_rational(const json& v, const std::string& key) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    bad(key, e.what());
  }
  bad(key, "expected a rational such as \"3/8\"");
}

CirclePoint get_point(const json& cfg, const std::string& key) { return CirclePoint(to_rational(cfg.at(key), key)); }

std::optional<Arc> get_arc(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_array() || v.size() != 2) bad(key, "expected [left, right]");
  Arc a{CirclePoint(to_rational(v[0], key)), CirclePoint(to_rational(v[1], key))};
  if (a.is_point()) bad(key, "arc must have nonempty interior");
  return a;
}

std::vector<int> get_int_list(const json& cfg, const std::string& key, int lo, int hi) {
  const json& v = cfg.at(key);
  if (!v.is_array() || v.empty()) bad(key, "expected a nonempty list of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad(key, "expected a nonempty list of integers");
    const int x = e.get<int>();
    if (x < lo || x > hi) bad(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out.push_back(x);
  }
  return out;
}

std::string arc_str(const Arc& a) { return "[" + a.left.str() + ", " + a.right.str() + "]"; }

// ---------------------------------------------------------------------------
// Shared run state

struct Context {
  json cfg;
  GeneratorSet gens;
  MeasurePtr mu;
  MonteCarlo mc;
  GridOptions grid;
  int horizon = 0;

  MonteCarlo derived(std::uint64_t index) const {
    MonteCarlo m = mc;
    m.seed = derive_seed(mc.seed, index);
    return m;
  }

  const CircleMap& element(const std::string& key) const {
    const std::string name = get_string(cfg, key);
    if (!gens.contains(name)) bad(key, "no generator named '" + name + "'");
    return gens.at(name).map;
  }

  int xi_horizon(int n) const {
    const long v = get_int(cfg, "xi_horizon", 0, 100000);
    return v == 0 ? 5 * n : static_cast<int>(v);
  }
};

Arc support_arc(const CircleMap& a, const std::string& key) {
  try {
    return a.smallest_interval_containing_support();
  } catch (const std::exception& e) {
    bad(key, e.what());
  }
}

void require_in_support(const Context& c, const CircleMap& a, const std::string& key) {
  if (!c.mu->index_of(a)) bad(key, "element is not in the support of the measure");
}

const Row kCurveHeader{"n", "mean_distance", "ci_low", "ci_high"};
const Row kHistogramHeader{"bin_left", "bin_right", "count"};
const Row kDominationHeader{"trial", "n", "Z", "W", "k_extracted", "satisfactory_flag"};

json fit_summary(const ContractionReport& r) {
  return {{"lambda_hat", r.lambda_hat},
          {"slope", r.fit.slope},
          {"slope_ci_low", r.fit.slope_ci_low},
          {"slope_ci_high", r.fit.slope_ci_high},
          {"r2", r.fit.r2},
          {"fit_lo", r.fit_lo},
          {"fit_hi", r.fit_hi},
          {"zero_mean_points", r.zero_mean_points},
          {"excluded_trials", r.excluded_trials},
          {"failed_trials", r.failed_trials},
          {"degenerate", r.degenerate}};
}

Table curve_table(const std::string& name, const ContractionReport& r) {
  Table t{name, kCurveHeader, {}};
  for (const auto& p : r.points)
    t.rows.push_back({fmt(p.n), fmt(p.mean_exact.to_double()), fmt(p.estimate.ci_low()), fmt(p.estimate.ci_high())});
  return t;
}

Table histogram_table(const std::string& name, const EmpiricalMeasure& h) {
  Table t{name, kHistogramHeader, {}};
  for (int b = 0; b < h.bins; ++b)
    t.rows.push_back({Rational(b, h.bins).str(), Rational(b + 1, h.bins).str(), fmt(h.counts[static_cast<std::size_t>(b)])});
  return t;
}

FitWindow window_of(const json& cfg) {
  return FitWindow{static_cast<int>(get_int(cfg, "fit_lo", 1, 1000000)), static_cast<int>(get_int(cfg, "fit_hi", 0, 1000000))};
}

// ---------------------------------------------------------------------------
// Subcommands

Output contract_curve_cmd(const Context& c) {
  const auto x = get_point(c.cfg, "x"), y = get_point(c.cfg, "y");
  if (x == y) bad("y", "must differ from x");
  const auto r = contraction_curve(c.mu, x, y, c.horizon, c.mc, window_of(c.cfg));
  return {{curve_table("contract-curve", r)}, fit_summary(r)};
}

Output boundary_curve_cmd(const Context& c) {
  const int xh = c.xi_horizon(c.horizon);
  if (xh <= c.horizon) bad("xi_horizon", "must exceed horizon");
  const auto r = boundary_convergence_curve(c.mu, get_point(c.cfg, "x"), c.horizon, xh, c.mc, window_of(c.cfg), c.grid);
  json s = fit_summary(r);
  s["xi_horizon"] = xh;
  return {{curve_table("boundary-curve", r)}, s};
}

Output stationary_cmd(const Context& c) {
  const int bins = static_cast<int>(get_int(c.cfg, "bins", 2, 1 << 20));
  const auto r = stationary_histogram(c.mu, c.horizon, bins, c.mc, c.grid);
  long min_count = r.histogram.counts.empty() ? 0 : *std::min_element(r.histogram.counts.begin(), r.histogram.counts.end());
  return {{histogram_table("stationary", r.histogram), histogram_table("stationary-pushed", r.pushed)},
          {{"max_zscore", r.max_zscore}, {"not_concentrated", r.not_concentrated}, {"min_count", min_count}}};
}

Output visit_fraction_cmd(const Context& c) {
  const Arc J = get_arc(c.cfg, "J").value_or(support_arc(remark_element(CirclePoint(1, 2), 4), "J"));
  const int xh = c.xi_horizon(c.horizon);
  const auto r = xi_visit_fraction(c.mu, J, c.horizon, xh, c.mc, c.grid);
  const double bound = 2.0 * r.nu_bar.mean;
  const bool holds = r.fraction.mean <= bound + 3.0 * std::sqrt(r.fraction.se * r.fraction.se + 4.0 * r.nu_bar.se * r.nu_bar.se);
  Table t{"visit-fraction", {"n", "fraction", "se", "nu_bar", "nu_bar_se", "bound", "holds"}, {}};
  t.rows.push_back({fmt(c.horizon), fmt(r.fraction.mean), fmt(r.fraction.se), fmt(r.nu_bar.mean), fmt(r.nu_bar.se), fmt(bound), fmt(holds)});
  return {{t}, {{"J", arc_str(J)}, {"xi_horizon", xh}, {"not_concentrated", r.not_concentrated}, {"degenerate", r.degenerate}}};
}

Output rn_check_cmd(const Context& c) {
  const CircleMap& a = c.element("a");
  require_in_support(c, a, "a");
  const Arc J = get_arc(c.cfg, "J").value_or(support_arc(a, "a"));
  const int xh = c.xi_horizon(c.horizon);
  const auto r = conditional_increment_frequency(c.mu, a, J, c.horizon, xh, c.mc, c.grid);
  Table t{"rn-check", {"a", "mu_a", "frequency", "se", "zscore", "steps_counted", "steps_excluded"}, {}};
  t.rows.push_back({get_string(c.cfg, "a"), r.expected.str(), fmt(r.frequency.mean), fmt(r.frequency.se), fmt(r.zscore),
                    fmt(r.steps_counted), fmt(r.steps_excluded)});
  return {{t}, {{"J", arc_str(J)}, {"xi_horizon", xh}, {"within_3sigma", std::abs(r.zscore) <= 3.0}}};
}

Output contract_interval_cmd(const Context& c) {
  const int attempts = static_cast<int>(get_int(c.cfg, "attempts", 0, 1000000));
  const auto I_fixed = get_arc(c.cfg, "I");
  const auto J_fixed = get_arc(c.cfg, "J");
  struct Attempt {
    Arc I, J;
    IntervalContraction result;
  };
  std::vector<Attempt> out(static_cast<std::size_t>(attempts));
  parallel_for(attempts, c.mc.workers, [&](int i) {
    Rng rng(derive_seed(c.mc.seed, 0x1000000ULL + static_cast<std::uint64_t>(i)));
    const auto u = static_cast<long>(rng() % 64), v = static_cast<long>(rng() % 64);
    Attempt at{I_fixed.value_or(Arc{CirclePoint(u, 64), CirclePoint(u + 8, 64)}),
               J_fixed.value_or(Arc{CirclePoint(v, 64), CirclePoint(v + 2, 64)}),
               {}};
    MonteCarlo m = c.mc;
    m.seed = derive_seed(c.mc.seed, static_cast<std::uint64_t>(i));
    at.result = contract_interval_into(c.mu, at.I, at.J, c.horizon, m);
    out[static_cast<std::size_t>(i)] = std::move(at);
  });
  Table t{"contract-interval", {"attempt", "I_left", "I_right", "J_left", "J_right", "found", "trial", "steps", "total_steps"}, {}};
  int found = 0;
  for (int i = 0; i < attempts; ++i) {
    const auto& at = out[static_cast<std::size_t>(i)];
    const bool ok = at.result.map.has_value();
    found += ok ? 1 : 0;
    t.rows.push_back({fmt(i), at.I.left.str(), at.I.right.str(), at.J.left.str(), at.J.right.str(), fmt(ok),
                      fmt(at.result.trial), fmt(at.result.steps), fmt(at.result.total_steps)});
  }
  return {{t}, {{"found", found}, {"attempts", attempts}, {"found_fraction", attempts ? double(found) / attempts : 0.0}}};
}

Output domination_z_cmd(const Context& c) {
  const CircleMap& a = c.element("a");
  const Arc J = get_arc(c.cfg, "J").value_or(support_arc(a, "a"));
  const int s = static_cast<int>(get_int(c.cfg, "s", 1, 100000));
  const int n = c.horizon;
  const int steps = s * ((n + s - 1) / s);
  auto z = batch(c.mu, steps, c.mc.trials, c.mc.seed, [&](const Trajectory& t) { return count_Z(t, J, s, n); }, c.mc.workers);
  Table t{"domination-z", kDominationHeader, {}};
  std::vector<double> zn;
  for (int i = 0; i < c.mc.trials; ++i) {
    const auto& o = z[static_cast<std::size_t>(i)];
    if (!o.value) throw std::runtime_error("trial " + std::to_string(i) + ": " + o.error);
    t.rows.push_back({fmt(i), fmt(n), fmt(*o.value), "", "", ""});
    zn.push_back(static_cast<double>(*o.value) / n);
  }
  const auto m = mean_estimate(zn);
  json summary{{"J", arc_str(J)}, {"s", s}, {"mean_Z_over_n", m.mean}, {"se", m.se}};

  const int s_max = static_cast<int>(get_int(c.cfg, "scan_s_max", 0, 64));
  const int j_max = static_cast<int>(get_int(c.cfg, "j_max", 1, 100000));
  Table scan{"domination-z-sparsity", {"s", "j_max", "probability", "se"}, {}};
  for (int sp = 1; sp <= s_max; ++sp) {
    const auto p = dominating_probability(c.mu, J, sp, j_max, c.derived(0x5ca0 + static_cast<std::uint64_t>(sp)));
    scan.rows.push_back({fmt(sp), fmt(j_max), fmt(p.mean), fmt(p.se)});
  }
  std::vector<Table> tables{t};
  if (s_max > 0) tables.push_back(scan);
  return {tables, summary};
}

struct GoodSample {
  int W = 0;
  int k_shifted = 0;  // distinguished times in [2, n+1] at length n+1
  int k = 0;          // distinguished times at length n
  std::optional<bool> satisfactory;
  bool concentrated = false;
};

Output domination_w_like(const Context& c, bool check_satisfactory) {
  const CircleMap& a = c.element("a");
  require_in_support(c, a, "a");
  const Arc J = get_arc(c.cfg, "J").value_or(support_arc(a, "a"));
  const int n = c.horizon;
  const int xh = c.xi_horizon(n);
  if (xh < n + 1) bad("xi_horizon", "must be at least horizon + 1");
  const int k_max = check_satisfactory ? static_cast<int>(get_int(c.cfg, "k_max", 0, kVariantCap)) : 0;
  auto res = batch(
      c.mu, xh, c.mc.trials, c.mc.seed,
      [&](const Trajectory& t) {
        GoodSample g;
        const auto xi = estimate_xi(t, xh, c.grid);
        g.concentrated = xi.concentrated;
        g.W = count_W(t, xi.xi_hat, a, J, n);
        const Collection longer = extract_good_collection(t, xi.xi_hat, a, J, n + 1);
        for (int i : longer.times) g.k_shifted += i >= 2 ? 1 : 0;
        const Collection q = extract_good_collection(t, xi.xi_hat, a, J, n);
        g.k = q.k();
        if (check_satisfactory) g.satisfactory = is_satisfactory(truncate_collection(q, t, k_max), a);
        return g;
      },
      c.mc.workers);
  Table t{check_satisfactory ? "good-collections" : "domination-w", kDominationHeader, {}};
  std::vector<double> wn;
  int mismatches = 0, violations = 0, not_concentrated = 0;
  for (int i = 0; i < c.mc.trials; ++i) {
    const auto& o = res[static_cast<std::size_t>(i)];
    if (!o.value) throw std::runtime_error("trial " + std::to_string(i) + ": " + o.error);
    const GoodSample& g = *o.value;
    mismatches += g.W != g.k_shifted ? 1 : 0;
    not_concentrated += g.concentrated ? 0 : 1;
    wn.push_back(static_cast<double>(g.W) / n);
    if (check_satisfactory) {
      violations += *g.satisfactory ? 0 : 1;
      t.rows.push_back({fmt(i), fmt(n), "", fmt(g.W), fmt(g.k), fmt(*g.satisfactory)});
    } else {
      t.rows.push_back({fmt(i), fmt(n), "", fmt(g.W), fmt(g.k_shifted), ""});
    }
  }
  const auto m = mean_estimate(wn);
  json s{{"J", arc_str(J)},           {"xi_horizon", xh},          {"mean_W_over_n", m.mean},
         {"se", m.se},                {"count_mismatches", mismatches}, {"not_concentrated", not_concentrated}};
  if (check_satisfactory) {
    s["k_max"] = k_max;
    s["violations"] = violations;
  }
  return {{t}, s};
}

Output domination_w_cmd(const Context& c) { return domination_w_like(c, false); }
Output good_collections_cmd(const Context& c) { return domination_w_like(c, true); }

Output entropy_curve_cmd(const Context& c) {
  const auto cap = static_cast<std::size_t>(get_int(c.cfg, "support_cap", 1, 1L << 40));
  const auto curve = entropy_curve(*c.mu, c.horizon, cap, c.mc.workers);
  Table t{"entropy-curve", {"n", "H", "support_size", "truncated_flag"}, {}};
  for (const auto& p : curve.points) t.rows.push_back({fmt(p.n), fmt(p.entropy), std::to_string(p.support_size), "0"});
  if (curve.truncated) t.rows.push_back({fmt(curve.truncated_at), "", "", "1"});
  json inc = json::array();
  for (double d : curve.increments()) inc.push_back(d);
  return {{t}, {{"increments", inc}, {"truncated", curve.truncated}}};
}

Output cond_entropy_cmd(const Context& c) {
  const auto ns = get_int_list(c.cfg, "n_list", 1, 64);
  const int bins = static_cast<int>(get_int(c.cfg, "arc_bins", 1, 4096));
  const int boot = static_cast<int>(get_int(c.cfg, "bootstrap", 0, 100000));
  Table t{"cond-entropy", {"n", "cond_proxy", "ci_low", "ci_high", "bins"}, {}};
  json per = json::array();
  for (int n : ns) {
    if (n > c.horizon) bad("n_list", "entries must not exceed horizon");
    const auto r = conditional_entropy_proxy(c.mu, n, bins, c.horizon, c.mc, boot, c.grid);
    t.rows.push_back({fmt(n), fmt(r.proxy), fmt(r.ci_low), fmt(r.ci_high), fmt(bins)});
    per.push_back({{"n", n}, {"undersampled_bins", r.undersampled_bins}, {"not_concentrated", r.not_concentrated}});
  }
  return {{t}, {{"estimator", "plug-in, Miller-Madow corrected"}, {"bootstrap", boot}, {"per_n", per}}};
}

Output cocycle_check_cmd(const Context& c) {
  const int len = c.horizon;
  auto res = batch(
      c.mu, 2 * len, c.mc.trials, c.mc.seed,
      [&](const Trajectory& t) {
        const CircleMap g = t.position(len);
        std::vector<const CircleMap*> tail;
        for (int k = len + 1; k <= 2 * len; ++k) tail.push_back(&t.increment(k));
        const CircleMap h = product(tail, 0, tail.size());
        const CircleMap g_inv = g.inverse();
        const bool chain = verify_chain_rule(g, h);
        const bool inv = cocycle(g_inv) == -shift_config(g_inv, cocycle(g));
        const bool integer = cocycle(g.compose(h)).exact();
        return Row{fmt(static_cast<long>(g.breakpoint_count())), fmt(static_cast<long>(h.breakpoint_count())), fmt(chain),
                   fmt(inv), fmt(integer)};
      },
      c.mc.workers);
  Table t{"cocycle-check", {"trial", "g_breakpoints", "h_breakpoints", "chain_rule", "inverse_rule", "integer_valued"}, {}};
  int failures = 0;
  for (int i = 0; i < c.mc.trials; ++i) {
    const auto& o = res[static_cast<std::size_t>(i)];
    if (!o.value) throw std::runtime_error("trial " + std::to_string(i) + ": " + o.error);
    Row row{fmt(i)};
    row.insert(row.end(), o.value->begin(), o.value->end());
    failures += (row[3] == "1" && row[4] == "1" && row[5] == "1") ? 0 : 1;
    t.rows.push_back(std::move(row));
  }
  return {{t}, {{"failures", failures}}};
}

Output stabilization_cmd(const Context& c) {
  const int stable_by = static_cast<int>(get_int(c.cfg, "stable_by", 0, c.horizon));
  const auto watched = measure_breakpoints(*c.mu);
  struct Sample {
    std::vector<PointTrack> tracks;
    std::vector<bool> matches;
  };
  auto res = batch(
      c.mu, c.horizon, c.mc.trials, c.mc.seed,
      [&](const Trajectory& t) {
        Sample s{track_configuration(t, watched, c.horizon), {}};
        const auto full = cocycle(t.position(c.horizon));
        for (const auto& p : s.tracks) s.matches.push_back(full.ratio(p.x) == p.final_ratio);
        return s;
      },
      c.mc.workers);
  Table t{"stabilization", {"trial", "x", "last_change", "final_exponent", "stabilized", "matches_position"}, {}};
  int all_stable = 0, mismatches = 0;
  for (int i = 0; i < c.mc.trials; ++i) {
    const auto& o = res[static_cast<std::size_t>(i)];
    if (!o.value) throw std::runtime_error("trial " + std::to_string(i) + ": " + o.error);
    bool stable = true;
    for (std::size_t j = 0; j < o.value->tracks.size(); ++j) {
      const auto& p = o.value->tracks[j];
      const bool st = p.last_change <= stable_by;
      stable = stable && st;
      mismatches += o.value->matches[j] ? 0 : 1;
      const std::string value = p.final_ratio.is_power_of_two() ? fmt(p.final_ratio.log2_exact()) : fmt(std::log2(p.final_ratio.to_double()));
      t.rows.push_back({fmt(i), p.x.str(), fmt(p.last_change), value, fmt(st), fmt(static_cast<bool>(o.value->matches[j]))});
    }
    all_stable += stable ? 1 : 0;
  }
  json pts = json::array();
  for (const auto& x : watched) pts.push_back(x.str());
  return {{t},
          {{"watched", pts},
           {"stable_by", stable_by},
           {"fraction_all_stabilized", c.mc.trials ? double(all_stable) / c.mc.trials : 0.0},
           {"mismatches", mismatches}}};
}

Output transience_cmd(const Context& c) {
  const CirclePoint x = get_point(c.cfg, "x");
  const int bins = static_cast<int>(get_int(c.cfg, "bins", 1, 100000));
  const auto r = orbit_return_stats(c.mu, x, c.horizon, c.mc);
  Table t{"transience", {"x", "returns", "last_return"}, {}};
  std::vector<long> hist(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < r.returns.size(); ++i) {
    t.rows.push_back({x.str(), fmt(r.returns[i]), fmt(r.last_return[i])});
    const auto b = std::min<std::size_t>(static_cast<std::size_t>(r.last_return[i]) * static_cast<std::size_t>(bins) /
                                             static_cast<std::size_t>(c.horizon + 1),
                                         static_cast<std::size_t>(bins - 1));
    ++hist[b];
  }
  Table h{"transience-last-return", kHistogramHeader, {}};
  for (int b = 0; b < bins; ++b)
    h.rows.push_back({Rational(static_cast<long>(b) * (c.horizon + 1), bins).str(),
                      Rational(static_cast<long>(b + 1) * (c.horizon + 1), bins).str(), fmt(hist[static_cast<std::size_t>(b)])});
  return {{t, h},
          {{"mean_returns", r.mean_returns.mean},
           {"mean_returns_se", r.mean_returns.se},
           {"fraction_last_below_half", r.fraction_last_below_half},
           {"degenerate", r.degenerate}}};
}

long target_k(const Context& c, const CirclePoint& y, json& summary) {
  if (!c.cfg.at("k").is_null()) return get_int(c.cfg, "k", -1000000, 1000000);
  const auto cal = calibrate_harmonic_target(c.mu, y, c.horizon, c.derived(0xca11));
  summary["k_calibration"] = {{"k", cal.k}, {"frequency", cal.frequency}, {"unstabilized", cal.unstabilized}};
  return cal.k;
}

Output harmonic_cmd(const Context& c) {
  const CirclePoint y = get_point(c.cfg, "y");
  const int count = static_cast<int>(get_int(c.cfg, "g_count", 0, 10000));
  const int len = static_cast<int>(get_int(c.cfg, "g_length", 0, 1000));
  json summary = json::object();
  const long k = target_k(c, y, summary);
  Table t{"harmonic", {"g_index", "g_word", "f_g", "se_g", "mean_value", "diff", "sigma", "within_3sigma"}, {}};
  int outside = 0;
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(c.mc.seed, 0x9000 + static_cast<std::uint64_t>(i)));
    CircleMap g = CircleMap::identity();
    std::string word;
    for (int j = 0; j < len; ++j) {
      const std::size_t idx = c.mu->sample_index(rng);
      g = g.compose(c.mu->element(idx));
      word += (j ? " " : "") + c.mu->atoms()[idx].label;
    }
    const auto chk = harmonic_mean_value_check(c.mu, g, y, k, c.horizon, c.derived(static_cast<std::uint64_t>(i)));
    const bool within = std::abs(chk.diff) <= 3.0 * chk.sigma;
    outside += within ? 0 : 1;
    t.rows.push_back({fmt(i), word, fmt(chk.f_g.value.mean), fmt(chk.f_g.value.se), fmt(chk.mean_value), fmt(chk.diff),
                      fmt(chk.sigma), fmt(within)});
  }
  summary["k"] = k;
  summary["outside_3sigma"] = outside;
  return {{t}, summary};
}

Output theorem_b_cmd(const Context& c) {
  const CirclePoint y = get_point(c.cfg, "y");
  if (!y.value().is_dyadic()) bad("y", "must be dyadic");
  const auto ns = get_int_list(c.cfg, "n_list", 1, 60);
  json summary = json::object();
  const long k = target_k(c, y, summary);
  TheoremBOptions opts{c.horizon, static_cast<int>(get_int(c.cfg, "xi_horizon", 1, 100000)), c.grid};
  const auto r = theorem_b_witness(c.mu, y, k, ns, c.mc, opts);
  Table t{"theorem-b", {"n", "f_e", "f_an", "nu_In", "margin", "verdict"}, {}};
  json rows = json::array();
  for (const auto& row : r.rows) {
    t.rows.push_back({fmt(row.n), fmt(row.f_e.value.mean), fmt(row.f_an.value.mean), fmt(row.nu_In.mean), fmt(row.margin),
                      fmt(row.verdict)});
    rows.push_back({{"n", row.n},
                    {"sigma", row.sigma},
                    {"I_n", arc_str(row.I_n)},
                    {"unstabilized_e", row.f_e.unstabilized},
                    {"unstabilized_an", row.f_an.unstabilized}});
  }
  summary["k"] = k;
  summary["verdict"] = r.verdict;
  summary["rows"] = rows;
  return {{t}, summary};
}

Output verify_relations_cmd(const Context& c) {
  const std::string path = get_string(c.cfg, "relations");
  std::vector<Word> rels;
  try {
    rels = path.empty() ? default_relations() : load_relations(path);
  } catch (const std::exception& e) {
    bad("relations", e.what());
  }
  Table t{"verify-relations", {"index", "word", "identity"}, {}};
  int failures = 0;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    std::string word;
    for (const auto& l : rels[i]) word += (word.empty() ? "" : " ") + l;
    bool ok = false;
    try {
      ok = verify_relation(c.gens, rels[i]);
    } catch (const std::exception& e) {
      bad("relations", e.what());
    }
    failures += ok ? 0 : 1;
    t.rows.push_back({std::to_string(i), word, fmt(ok)});
  }
  return {{t}, {{"failures", failures}}};
}

// ---------------------------------------------------------------------------
// Registry

struct Command {
  std::string name;
  std::string measure;  // built-in measure used when none is configured
  bool trial_based;
  json params;          // subcommand-specific defaults
  std::vector<std::pair<std::string, Row>> tables;  // emitted when trials = 0
  std::function<Output(const Context&)> fn;
};

const std::vector<Command>& registry() {
  static const std::vector<Command> cmds = [] {
    const json null = nullptr;
    std::vector<Command> v;
    v.push_back({"contract-curve", "lazy", true, {{"horizon", 60}, {"x", "0"}, {"y", "1/2"}, {"fit_lo", 10}, {"fit_hi", 0}},
                 {{"contract-curve", kCurveHeader}}, contract_curve_cmd});
    v.push_back({"boundary-curve", "default", true,
                 {{"horizon", 40}, {"xi_horizon", 0}, {"x", "0"}, {"fit_lo", 10}, {"fit_hi", 0}},
                 {{"boundary-curve", kCurveHeader}}, boundary_curve_cmd});
    v.push_back({"stationary", "default", true, {{"horizon", 240}, {"bins", 32}},
                 {{"stationary", kHistogramHeader}, {"stationary-pushed", kHistogramHeader}}, stationary_cmd});
    v.push_back({"visit-fraction", "default", true, {{"horizon", 60}, {"xi_horizon", 0}, {"J", null}},
                 {{"visit-fraction", {"n", "fraction", "se", "nu_bar", "nu_bar_se", "bound", "holds"}}}, visit_fraction_cmd});
    v.push_back({"rn-check", "lazy", true, {{"horizon", 60}, {"xi_horizon", 0}, {"a", "a"}, {"J", null}},
                 {{"rn-check", {"a", "mu_a", "frequency", "se", "zscore", "steps_counted", "steps_excluded"}}}, rn_check_cmd});
    v.push_back({"contract-interval", "default", true,
                 {{"horizon", 1000}, {"trials", 10}, {"attempts", 100}, {"I", null}, {"J", null}},
                 {{"contract-interval", {"attempt", "I_left", "I_right", "J_left", "J_right", "found", "trial", "steps", "total_steps"}}},
                 contract_interval_cmd});
    v.push_back({"domination-z", "lazy", true,
                 {{"horizon", 60}, {"s", 1}, {"a", "a"}, {"J", null}, {"scan_s_max", 8}, {"j_max", 20}},
                 {{"domination-z", kDominationHeader}}, domination_z_cmd});
    v.push_back({"domination-w", "lazy", true, {{"horizon", 60}, {"xi_horizon", 0}, {"a", "a"}, {"J", null}},
                 {{"domination-w", kDominationHeader}}, domination_w_cmd});
    v.push_back({"good-collections", "lazy", true,
                 {{"horizon", 60}, {"xi_horizon", 0}, {"a", "a"}, {"J", null}, {"k_max", 10}, {"trials", 200}},
                 {{"good-collections", kDominationHeader}}, good_collections_cmd});
    v.push_back({"entropy-curve", "default", false, {{"horizon", 6}, {"support_cap", 2000000}},
                 {{"entropy-curve", {"n", "H", "support_size", "truncated_flag"}}}, entropy_curve_cmd});
    v.push_back({"cond-entropy", "lazy", true,
                 {{"horizon", 240}, {"n_list", {3, 6}}, {"arc_bins", 8}, {"bootstrap", 200}, {"trials", 4000}},
                 {{"cond-entropy", {"n", "cond_proxy", "ci_low", "ci_high", "bins"}}}, cond_entropy_cmd});
    v.push_back({"cocycle-check", "default", true, {{"horizon", 12}},
                 {{"cocycle-check", {"trial", "g_breakpoints", "h_breakpoints", "chain_rule", "inverse_rule", "integer_valued"}}},
                 cocycle_check_cmd});
    v.push_back({"stabilization", "default", true, {{"horizon", 300}, {"stable_by", 200}},
                 {{"stabilization", {"trial", "x", "last_change", "final_exponent", "stabilized", "matches_position"}}},
                 stabilization_cmd});
    v.push_back({"transience", "default", true, {{"horizon", 400}, {"x", "1/2"}, {"bins", 10}},
                 {{"transience", {"x", "returns", "last_return"}}, {"transience-last-return", kHistogramHeader}}, transience_cmd});
    v.push_back({"harmonic", "default", true, {{"horizon", 300}, {"y", "1/2"}, {"k", null}, {"g_count", 5}, {"g_length", 4}},
                 {{"harmonic", {"g_index", "g_word", "f_g", "se_g", "mean_value", "diff", "sigma", "within_3sigma"}}},
                 harmonic_cmd});
    v.push_back({"theorem-b", "default", true,
                 {{"horizon", 300}, {"xi_horizon", 240}, {"y", "1/2"}, {"k", null}, {"n_list", {4, 6, 8}}, {"trials", 2000}},
                 {{"theorem-b", {"n", "f_e", "f_an", "nu_In", "margin", "verdict"}}}, theorem_b_cmd});
    v.push_back({"verify-relations", "default", false, {{"relations", ""}},
                 {{"verify-relations", {"index", "word", "identity"}}}, verify_relations_cmd});
    return v;
  }();
  return cmds;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : registry())
    if (c.name == name) return &c;
  return nullptr;
}

void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("out: cannot write " + path.string());
  auto line = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

std::string usage() {
  std::ostringstream os;
  os << "usage: circlewalk <subcommand> [--config FILE] [--generators FILE] [--measure FILE|default|lazy]\n"
        "                  [--seed N] [--trials N] [--horizon N] [--workers N] [--out DIR] [--set KEY=VALUE]...\n"
        "subcommands:";
  for (const auto& c : registry()) os << ' ' << c.name;
  os << '\n';
  return os.str();
}

}  // namespace

std::string version() { return CIRCLEWALK_VERSION; }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : registry()) v.push_back(c.name);
    return v;
  }();
  return names;
}

json defaults(const std::string& subcommand) {
  const Command* cmd = find_command(subcommand);
  if (!cmd) throw ConfigError("subcommand: unknown subcommand '" + subcommand + "'");
  json cfg{{"generators", ""}, {"measure", cmd->measure}, {"seed", 1},    {"trials", 1000},
           {"workers", 1},     {"out", "."},            {"grid", 64},   {"delta", 0.1}};
  for (const auto& [k, v] : cmd->params.items()) cfg[k] = v;
  return cfg;
}

RunResult run(const std::string& subcommand, const json& config) {
  const auto start = std::chrono::steady_clock::now();
  const Command* cmd = find_command(subcommand);
  if (!cmd) throw ConfigError("subcommand: unknown subcommand '" + subcommand + "'");
  json cfg = defaults(subcommand);
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [k, v] : config.items()) {
    if (!cfg.contains(k)) throw ConfigError(k + ": unknown parameter for " + subcommand);
    cfg[k] = v;
  }

  Context c;
  c.cfg = cfg;
  const std::string gen_path = get_string(cfg, "generators");
  try {
    c.gens = gen_path.empty() ? default_generators() : GeneratorSet::load(gen_path);
  } catch (const std::exception& e) {
    bad("generators", e.what());
  }
  const std::string mpath = get_string(cfg, "measure");
  try {
    if (mpath == "default")
      c.mu = std::make_shared<const StepDistribution>(default_measure(c.gens));
    else if (mpath == "lazy")
      c.mu = std::make_shared<const StepDistribution>(default_lazy_measure(c.gens));
    else
      c.mu = std::make_shared<const StepDistribution>(StepDistribution::load(mpath, c.gens));
  } catch (const std::exception& e) {
    bad("measure", e.what());
  }
  if (!cfg.at("seed").is_number_unsigned() && !(cfg.at("seed").is_number_integer() && cfg.at("seed").get<long>() >= 0))
    bad("seed", "expected a nonnegative integer");
  c.mc.seed = cfg.at("seed").get<std::uint64_t>();
  c.mc.trials = static_cast<int>(get_int(cfg, "trials", 0, 100000000));
  c.mc.workers = static_cast<int>(get_int(cfg, "workers", 1, 1024));
  if (cfg.contains("horizon")) c.horizon = static_cast<int>(get_int(cfg, "horizon", 1, 10000000));
  c.grid.grid = static_cast<int>(get_int(cfg, "grid", 8, 1 << 20));
  c.grid.delta = get_real(cfg, "delta", 0.0, 0.999999);
  const std::filesystem::path out_dir = get_string(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) bad("out", ec.message());

  Output out;
  if (cmd->trial_based && c.mc.trials == 0) {
    for (const auto& [name, header] : cmd->tables) out.tables.push_back({name, header, {}});
    out.summary = {{"trials", 0}};
  } else {
    try {
      out = cmd->fn(c);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("parameters: ") + e.what());
    }
  }

  RunResult result;
  for (const auto& t : out.tables) {
    const auto path = out_dir / (t.name + ".csv");
    write_csv(path, t);
    result.files.push_back(path.string());
  }
  result.summary = out.summary;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"subcommand", subcommand}, {"version", version()}, {"seed", c.mc.seed}, {"config", cfg},
                {"files", result.files},    {"summary", out.summary}, {"wall_time_seconds", wall}};
  std::ofstream(out_dir / (subcommand + ".manifest.json")) << manifest.dump(2) << '\n';
  return result;
}

int main(int argc, char** argv) {
  CLI::App app{"Random walks on Thompson's group T acting on the circle"};
  app.set_help_flag("-h,--help");
  std::string sub, config_path, generators, measure, out;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials, horizon, workers;
  std::vector<std::string> sets;
  bool show_version = false;
  app.add_option("subcommand", sub, "one of the subcommands listed below");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--generators", generators, "generator set JSON");
  app.add_option("--measure", measure, "measure JSON, or 'default' / 'lazy'");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--trials", trials, "Monte Carlo trials");
  app.add_option("--horizon", horizon, "walk length (meaning depends on the subcommand)");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--out", out, "output directory");
  app.add_option("--set", sets, "override any parameter, KEY=VALUE (VALUE parsed as JSON when possible)");
  app.add_flag("--version", show_version, "print the version");
  for (auto* opt : app.get_options())
    if (opt->get_name() != "--set") opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer(usage());
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << usage() << "error: usage: " << e.what() << '\n';
    return 2;
  }
  if (show_version) {
    std::cout << version() << '\n';
    return 0;
  }
  if (sub.empty() || !find_command(sub)) {
    std::cerr << usage() << "error: usage: unknown subcommand '" << sub << "'\n";
    return 2;
  }
  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ConfigError("config: cannot open " + config_path);
      try {
        is >> cfg;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("set: expected KEY=VALUE, got '" + s + "'");
      const std::string key = s.substr(0, eq), value = s.substr(eq + 1);
      json parsed = json::parse(value, nullptr, false);
      cfg[key] = parsed.is_discarded() ? json(value) : parsed;
    }
    if (!generators.empty()) cfg["generators"] = generators;
    if (!measure.empty()) cfg["measure"] = measure;
    if (seed) cfg["seed"] = *seed;
    if (trials) cfg["trials"] = *trials;
    if (horizon) cfg["horizon"] = *horizon;
    if (workers) cfg["workers"] = *workers;
    if (!out.empty()) cfg["out"] = out;
    const RunResult r = run(sub, cfg);
    for (const auto& f : r.files) std::cout << f << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace circlewalk::cli
