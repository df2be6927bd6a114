#include "circlewalk/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlewalk {

namespace {

// Exact average of the per-trial series plus floating-point summaries.
std::vector<CurvePoint> average_series(const std::vector<std::vector<Rational>>& series, int n_max) {
  std::vector<CurvePoint> points;
  for (int n = 1; n <= n_max; ++n) {
    CurvePoint p;
    p.n = n;
    Rational sum(0);
    std::vector<double> xs;
    xs.reserve(series.size());
    for (const auto& s : series) {
      sum += s[static_cast<std::size_t>(n - 1)];
      xs.push_back(s[static_cast<std::size_t>(n - 1)].to_double());
    }
    p.mean_exact = series.empty() ? Rational(0) : sum / Rational(static_cast<long>(series.size()));
    p.estimate = mean_estimate(xs);
    p.estimate.mean = p.mean_exact.to_double();
    points.push_back(std::move(p));
  }
  return points;
}

void fit_report(ContractionReport& r, int n_max, FitWindow window) {
  r.fit_lo = std::max(1, window.lo);
  r.fit_hi = window.hi > 0 ? std::min(window.hi, n_max) : n_max;
  if (r.fit_lo > r.fit_hi) r.fit_lo = 1;
  std::vector<double> xs, ys;
  for (const auto& p : r.points) {
    if (p.mean_exact.is_zero()) {
      ++r.zero_mean_points;
      continue;
    }
    if (p.n < r.fit_lo || p.n > r.fit_hi) continue;
    xs.push_back(p.n);
    ys.push_back(std::log(p.mean_exact.to_double()));
  }
  if (xs.size() < 2) {
    r.degenerate = true;
    return;
  }
  r.fit = linear_fit(xs, ys);
  r.lambda_hat = std::max(0.0, -r.fit.slope);
}

void check_arc_proper(const Arc& a, const char* what) {
  if (a.is_point()) throw std::invalid_argument(std::string(what) + " must have nonempty interior");
}

}  // namespace

BoundaryEstimate estimate_xi(const Trajectory& t, int horizon, const GridOptions& opts) {
  if (horizon < 0 || horizon > t.horizon()) throw std::invalid_argument("estimate_xi: horizon beyond trajectory");
  if (opts.grid < 8) throw std::invalid_argument("estimate_xi: grid must be >= 8");
  if (!(opts.delta >= 0.0 && opts.delta < 1.0)) throw std::invalid_argument("estimate_xi: delta must be in [0,1)");
  const CircleMap w = t.position(horizon);
  const int m = opts.grid;
  std::vector<Rational> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pts.push_back(w(CirclePoint(i, m)).value());
  std::sort(pts.begin(), pts.end());

  const int q = std::clamp(static_cast<int>(std::ceil((1.0 - opts.delta) * m - 1e-9)), 1, m);
  std::size_t best = 0;
  Rational best_len(2);
  for (int i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>((i + q - 1) % m);
    Rational len = pts[j] - pts[static_cast<std::size_t>(i)];
    if (len.sign() < 0 || (len.is_zero() && q > 1)) len += Rational(1);
    if (len < best_len) {
      best_len = len;
      best = static_cast<std::size_t>(i);
    }
  }
  BoundaryEstimate e;
  const Rational half = best_len / Rational(2);
  e.xi_hat = CirclePoint(pts[best] + half);
  e.concentration_radius = half;
  e.horizon = horizon;
  e.grid = m;
  e.delta = opts.delta;
  e.covered = q;
  e.concentrated = best_len < Rational(1, m);
  return e;
}

EmpiricalMeasure::EmpiricalMeasure(int bins) : bins(bins), counts(static_cast<std::size_t>(std::max(bins, 0)), 0) {
  if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
}

int EmpiricalMeasure::bin_of(const CirclePoint& x) const {
  const Rational scaled = x.value() * Rational(bins);
  return static_cast<int>(scaled.floor().raw().get_num().get_si());
}

void EmpiricalMeasure::add(const CirclePoint& x) {
  ++counts[static_cast<std::size_t>(bin_of(x))];
  ++total;
}

double max_bin_zscore(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.bins != b.bins) throw std::invalid_argument("max_bin_zscore: bin counts differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    const double c1 = static_cast<double>(a.counts[i]);
    const double c2 = static_cast<double>(b.counts[i]);
    if (c1 + c2 == 0.0) continue;
    worst = std::max(worst, std::abs(c1 - c2) / std::sqrt(c1 + c2));
  }
  return worst;
}

ContractionReport contraction_curve(const MeasurePtr& mu, const CirclePoint& x, const CirclePoint& y, int n_max,
                                    const MonteCarlo& mc, FitWindow window) {
  if (x == y) throw std::invalid_argument("contraction_curve: x and y must differ");
  if (n_max < 1) throw std::invalid_argument("contraction_curve: n_max must be >= 1");
  auto outcomes = batch(
      mu, n_max, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        const auto xs = t.backward_orbit(n_max, x);
        const auto ys = t.backward_orbit(n_max, y);
        std::vector<Rational> d;
        d.reserve(static_cast<std::size_t>(n_max));
        for (int n = 1; n <= n_max; ++n) d.push_back(circle_dist(xs[static_cast<std::size_t>(n)], ys[static_cast<std::size_t>(n)]));
        return d;
      },
      mc.workers);
  ContractionReport r;
  std::vector<std::vector<Rational>> series;
  for (auto& o : outcomes) {
    if (o.value)
      series.push_back(std::move(*o.value));
    else
      ++r.failed_trials;
  }
  if (series.empty()) {
    r.degenerate = true;
    return r;
  }
  r.points = average_series(series, n_max);
  fit_report(r, n_max, window);
  return r;
}

ContractionReport boundary_convergence_curve(const MeasurePtr& mu, const CirclePoint& x, int n_max, int xi_horizon,
                                             const MonteCarlo& mc, FitWindow window, const GridOptions& grid) {
  if (n_max < 1) throw std::invalid_argument("boundary_convergence_curve: n_max must be >= 1");
  if (xi_horizon <= n_max) throw std::invalid_argument("boundary_convergence_curve: xi_horizon must exceed n_max");
  auto outcomes = batch(
      mu, xi_horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) -> std::optional<std::vector<Rational>> {
        const BoundaryEstimate xi = estimate_xi(t, xi_horizon, grid);
        if (!xi.concentrated) return std::nullopt;
        const auto orbit = t.forward_orbit(n_max, x);
        std::vector<Rational> d;
        for (int n = 1; n <= n_max; ++n) d.push_back(circle_dist(orbit[static_cast<std::size_t>(n)], xi.xi_hat));
        return d;
      },
      mc.workers);
  ContractionReport r;
  std::vector<std::vector<Rational>> series;
  for (auto& o : outcomes) {
    if (!o.value)
      ++r.failed_trials;
    else if (!*o.value)
      ++r.excluded_trials;
    else
      series.push_back(std::move(**o.value));
  }
  if (series.empty()) {
    r.degenerate = true;
    return r;
  }
  r.points = average_series(series, n_max);
  fit_report(r, n_max, window);
  return r;
}

std::vector<BoundaryEstimate> sample_boundary_points(const MeasurePtr& mu, int xi_horizon, const MonteCarlo& mc,
                                                     const GridOptions& grid) {
  auto outcomes = batch(
      mu, xi_horizon, mc.trials, mc.seed, [&](const Trajectory& t) { return estimate_xi(t, xi_horizon, grid); },
      mc.workers);
  std::vector<BoundaryEstimate> out;
  out.reserve(outcomes.size());
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("boundary estimate failed: " + o.error);
    out.push_back(std::move(*o.value));
  }
  return out;
}

StationaryReport stationary_histogram(const MeasurePtr& mu, int xi_horizon, int bins, const MonteCarlo& mc,
                                      const GridOptions& grid) {
  struct Sample {
    BoundaryEstimate xi;
    CirclePoint pushed;
  };
  auto outcomes = batch(
      mu, xi_horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        Sample s{estimate_xi(t, xi_horizon, grid), {}};
        Rng extra(derive_seed(t.seed(), 0x57a7));
        s.pushed = mu->sample(extra)(s.xi.xi_hat);
        return s;
      },
      mc.workers);
  StationaryReport r{EmpiricalMeasure(bins), EmpiricalMeasure(bins), 0, 0.0};
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("stationary sample failed: " + o.error);
    r.histogram.add(o.value->xi.xi_hat);
    r.pushed.add(o.value->pushed);
    if (!o.value->xi.concentrated) ++r.not_concentrated;
  }
  r.max_zscore = max_bin_zscore(r.histogram, r.pushed);
  return r;
}

MeanEstimate arc_mass(const MeasurePtr& mu, const Arc& arc, int xi_horizon, const MonteCarlo& mc, const GridOptions& grid) {
  std::vector<double> inside;
  for (const auto& e : sample_boundary_points(mu, xi_horizon, mc, grid)) inside.push_back(arc.contains(e.xi_hat) ? 1.0 : 0.0);
  return mean_estimate(inside);
}

VisitFractionReport xi_visit_fraction(const MeasurePtr& mu, const Arc& J, int n, int xi_horizon, const MonteCarlo& mc,
                                      const GridOptions& grid) {
  if (n < 1) throw std::invalid_argument("xi_visit_fraction: n must be >= 1");
  const int horizon = std::max(n, xi_horizon);
  struct Sample {
    double fraction;
    bool concentrated;
  };
  auto outcomes = batch(
      mu, horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        const BoundaryEstimate xi = estimate_xi(t, xi_horizon, grid);
        const auto pulled = t.backward_orbit(n, xi.xi_hat);
        int hits = 0;
        for (int k = 1; k <= n; ++k) hits += J.contains(pulled[static_cast<std::size_t>(k)]) ? 1 : 0;
        return Sample{static_cast<double>(hits) / n, xi.concentrated};
      },
      mc.workers);
  VisitFractionReport r;
  std::vector<double> fr;
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("visit-fraction trial failed: " + o.error);
    fr.push_back(o.value->fraction);
    if (!o.value->concentrated) ++r.not_concentrated;
  }
  r.fraction = mean_estimate(fr);
  r.degenerate = 2 * r.not_concentrated > mc.trials;
  const auto reflected = std::make_shared<const StepDistribution>(reflect(*mu));
  MonteCarlo reflected_mc = mc;
  reflected_mc.seed = derive_seed(mc.seed, 0x7ef1);
  r.nu_bar = arc_mass(reflected, J, xi_horizon, reflected_mc, grid);
  return r;
}

IncrementFrequencyReport conditional_increment_frequency(const MeasurePtr& mu, const CircleMap& a, const Arc& J, int n,
                                                         int xi_horizon, const MonteCarlo& mc, const GridOptions& grid) {
  const auto a_index = mu->index_of(a);
  if (!a_index) throw std::invalid_argument("conditional_increment_frequency: a is not in the support of the measure");
  const Support s = a.support();
  if (s.full) throw std::invalid_argument("conditional_increment_frequency: support of a is the whole circle");
  for (const auto& arc : s.arcs)
    if (!J.contains(arc)) throw std::invalid_argument("conditional_increment_frequency: support of a is not inside J");
  if (n < 1) throw std::invalid_argument("conditional_increment_frequency: n must be >= 1");
  const int horizon = std::max(n, xi_horizon);
  struct Counts {
    long hits = 0;
    long counted = 0;
  };
  auto outcomes = batch(
      mu, horizon, mc.trials, mc.seed,
      [&](const Trajectory& t) {
        const BoundaryEstimate xi = estimate_xi(t, xi_horizon, grid);
        const auto pulled = t.backward_orbit(n - 1, xi.xi_hat);
        Counts c;
        for (int k = 0; k < n; ++k) {
          if (J.contains(pulled[static_cast<std::size_t>(k)])) continue;
          ++c.counted;
          if (t.step(k + 1) == *a_index) ++c.hits;
        }
        return c;
      },
      mc.workers);
  IncrementFrequencyReport r;
  r.expected = mu->weight(*a_index);
  std::vector<double> num, den;
  for (auto& o : outcomes) {
    if (!o.value) throw std::runtime_error("increment-frequency trial failed: " + o.error);
    num.push_back(static_cast<double>(o.value->hits));
    den.push_back(static_cast<double>(o.value->counted));
    r.steps_counted += o.value->counted;
    r.steps_excluded += n - o.value->counted;
  }
  r.frequency = ratio_estimate(num, den);
  const double diff = r.frequency.mean - r.expected.to_double();
  r.zscore = r.frequency.se > 0.0 ? diff / r.frequency.se : (diff == 0.0 ? 0.0 : INFINITY);
  return r;
}

IntervalContraction contract_interval_into(const MeasurePtr& mu, const Arc& I, const Arc& J, int max_steps,
                                           const MonteCarlo& mc) {
  check_arc_proper(I, "I");
  check_arc_proper(J, "J");
  IntervalContraction r;
  if (J.contains(I)) {
    r.map = CircleMap::identity();
    r.trial = 0;
    return r;
  }
  for (int trial = 0; trial < mc.trials; ++trial) {
    Rng rng(derive_seed(mc.seed, static_cast<std::uint64_t>(trial)));
    std::vector<std::uint32_t> steps;
    CirclePoint l = I.left, rgt = I.right;
    for (int n = 1; n <= max_steps; ++n) {
      const auto idx = static_cast<std::uint32_t>(mu->sample_index(rng));
      steps.push_back(idx);
      ++r.total_steps;
      l = mu->inverse_element(idx)(l);
      rgt = mu->inverse_element(idx)(rgt);
      if (!J.contains(Arc{l, rgt})) continue;
      const Trajectory t(mu, derive_seed(mc.seed, static_cast<std::uint64_t>(trial)), std::move(steps));
      CircleMap w_inv = t.inverse_position(n);
      if (!J.contains(I.image(w_inv))) throw std::logic_error("contract_interval_into: certificate failed exact re-check");
      r.map = std::move(w_inv);
      r.trial = trial;
      r.steps = n;
      return r;
    }
  }
  return r;
}

}  // namespace circlewalk
