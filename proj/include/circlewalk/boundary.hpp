#pragma once

#include <optional>
#include <vector>

#include "circlewalk/stats.hpp"
#include "circlewalk/walk.hpp"

namespace circlewalk {

/// Grid parameters for boundary-point estimation.
struct GridOptions {
  int grid = 64;       // number of uniformly spaced points pushed through w_N
  double delta = 0.1;  // fraction of grid images allowed outside the arc
};

/// Estimate of the boundary point ξ(w), the limit of w_n(x).
///
/// The m-point uniform grid is pushed through w_N; xi_hat is the midpoint of
/// the shortest arc holding at least ⌈(1-δ)m⌉ images (leftmost on ties) and
/// the concentration radius is half that arc's length. The estimate counts
/// as concentrated when the arc is shorter than one grid cell, 1/m.
struct BoundaryEstimate {
  CirclePoint xi_hat;
  Rational concentration_radius;
  int horizon = 0;
  int grid = 0;
  double delta = 0.0;
  int covered = 0;  // grid images inside the arc
  bool concentrated = false;
};

BoundaryEstimate estimate_xi(const Trajectory& t, int horizon, const GridOptions& opts = {});

/// Histogram over the arcs [i/m, (i+1)/m).
struct EmpiricalMeasure {
  int bins = 0;
  std::vector<long> counts;
  long total = 0;

  explicit EmpiricalMeasure(int bins = 2);
  void add(const CirclePoint& x);
  int bin_of(const CirclePoint& x) const;
  double mass(int bin) const { return total ? static_cast<double>(counts[static_cast<std::size_t>(bin)]) / static_cast<double>(total) : 0.0; }
};

/// Per-bin two-sample comparison: passes when |c1 - c2| <= z * sqrt(c1 + c2)
/// for every bin. Returns the largest standardized difference seen.
double max_bin_zscore(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

struct CurvePoint {
  int n = 0;
  Rational mean_exact;  // exact average over the contributing trials
  MeanEstimate estimate;
};

/// Window of n values used for the log-linear fit.
struct FitWindow {
  int lo = 10;
  int hi = 0;  // 0 means n_max
};

struct ContractionReport {
  std::vector<CurvePoint> points;
  double lambda_hat = 0.0;  // max(0, -slope of log mean vs n)
  LinearFit fit;
  int fit_lo = 0;
  int fit_hi = 0;
  int zero_mean_points = 0;       // n with exact mean 0, left out of the fit
  int excluded_trials = 0;        // e.g. boundary estimate not concentrated
  int failed_trials = 0;
  bool degenerate = false;        // no usable trials / nothing to fit
};

/// Monte Carlo mean of d(w_n^{-1}(x), w_n^{-1}(y)) for n = 1..n_max, with a
/// least-squares fit of log(mean) against n on the window.
ContractionReport contraction_curve(const MeasurePtr& mu, const CirclePoint& x, const CirclePoint& y, int n_max,
                                    const MonteCarlo& mc, FitWindow window = {});

/// Mean of d(w_n(x), xi_hat) with xi_hat estimated on the same trajectory at
/// xi_horizon; trials whose estimate is not concentrated are excluded.
ContractionReport boundary_convergence_curve(const MeasurePtr& mu, const CirclePoint& x, int n_max, int xi_horizon,
                                             const MonteCarlo& mc, FitWindow window = {}, const GridOptions& grid = {});

/// Boundary estimates for `mc.trials` independent trajectories.
std::vector<BoundaryEstimate> sample_boundary_points(const MeasurePtr& mu, int xi_horizon, const MonteCarlo& mc,
                                                     const GridOptions& grid = {});

struct StationaryReport {
  EmpiricalMeasure histogram;  // xi_hat
  EmpiricalMeasure pushed;     // g·xi_hat with an independent g ~ μ per trial
  int not_concentrated = 0;
  double max_zscore = 0.0;     // two-sample statistic between the two
};

/// Estimates the stationary measure ν as the law of xi_hat, and checks
/// ν = μ∗ν through the pushed histogram.
StationaryReport stationary_histogram(const MeasurePtr& mu, int xi_horizon, int bins, const MonteCarlo& mc,
                                      const GridOptions& grid = {});

/// Fraction of boundary estimates inside `arc`, with its standard error.
MeanEstimate arc_mass(const MeasurePtr& mu, const Arc& arc, int xi_horizon, const MonteCarlo& mc,
                      const GridOptions& grid = {});

struct VisitFractionReport {
  MeanEstimate fraction;  // #{1 <= k <= n : xi_hat ∈ w_k(J)} / n
  MeanEstimate nu_bar;    // mass of J under the reflected walk's stationary measure
  int not_concentrated = 0;
  bool degenerate = false;  // most boundary estimates not concentrated
};

VisitFractionReport xi_visit_fraction(const MeasurePtr& mu, const Arc& J, int n, int xi_horizon, const MonteCarlo& mc,
                                      const GridOptions& grid = {});

struct IncrementFrequencyReport {
  MeanEstimate frequency;  // pooled frequency of g_{k+1} = a over steps with w_k^{-1}(xi_hat) ∉ J
  Rational expected;       // μ(a)
  long steps_counted = 0;
  long steps_excluded = 0;
  double zscore = 0.0;
};

/// Empirical check that, away from J, the next increment is a with
/// probability μ(a) even when conditioning on the boundary point.
IncrementFrequencyReport conditional_increment_frequency(const MeasurePtr& mu, const CircleMap& a, const Arc& J, int n,
                                                         int xi_horizon, const MonteCarlo& mc,
                                                         const GridOptions& grid = {});

struct IntervalContraction {
  std::optional<CircleMap> map;  // some w_n^{-1} with w_n^{-1}(I) ⊆ J, certified exactly
  int trial = -1;
  int steps = 0;                 // n for the returned map
  long total_steps = 0;          // steps spent over all attempts
};

/// Searches the walk for w_n^{-1}(I) ⊆ J, up to max_steps per attempt and
/// mc.trials attempts. Returns the identity when I ⊆ J already.
IntervalContraction contract_interval_into(const MeasurePtr& mu, const Arc& I, const Arc& J, int max_steps,
                                           const MonteCarlo& mc);

}  // namespace circlewalk
