#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "circlewalk/measure.hpp"

namespace circlewalk {

/// Counter-based seed for trial `index` of a batch; a pure function of its
/// arguments so that results never depend on how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

using Rng = std::mt19937_64;

/// Sample path w_0 = e, w_k = g_1 ⋯ g_k of the right random walk.
///
/// Increments are stored as atom indices into the shared measure; positions
/// are materialized on demand and cached every `checkpoint_interval` steps.
/// A Trajectory is not safe to share between threads (the cache is mutable).
class Trajectory {
 public:
  Trajectory(MeasurePtr mu, std::uint64_t seed, std::vector<std::uint32_t> steps, int checkpoint_interval = 16);

  std::uint64_t seed() const { return seed_; }
  int horizon() const { return static_cast<int>(steps_.size()); }
  const StepDistribution& measure() const { return *mu_; }
  const MeasurePtr& measure_ptr() const { return mu_; }
  const std::vector<std::uint32_t>& steps() const { return steps_; }

  /// Atom index of g_k, 1 <= k <= horizon.
  std::uint32_t step(int k) const { return steps_.at(static_cast<std::size_t>(k - 1)); }
  const CircleMap& increment(int k) const { return mu_->element(step(k)); }
  const CircleMap& inverse_increment(int k) const { return mu_->inverse_element(step(k)); }

  /// w_k as a map.
  CircleMap position(int k) const;
  /// w_k^{-1} as a map.
  CircleMap inverse_position(int k) const { return position(k).inverse(); }

  /// w_k(x) = g_1(g_2(⋯ g_k(x))).
  CirclePoint forward(int k, const CirclePoint& x) const;
  /// w_k(x) for every k = 0..n.
  std::vector<CirclePoint> forward_orbit(int n, const CirclePoint& x) const;
  /// w_k^{-1}(x) for every k = 0..n (x_k = g_k^{-1}(x_{k-1})).
  std::vector<CirclePoint> backward_orbit(int n, const CirclePoint& x) const;

  /// Trajectory of the shift σ(w): the increments g_2, g_3, ….
  Trajectory shifted() const;

 private:
  MeasurePtr mu_;
  std::uint64_t seed_;
  std::vector<std::uint32_t> steps_;
  int checkpoint_interval_;
  mutable std::vector<CircleMap> checkpoints_;  // checkpoints_[j] = w_{j*K}
};

/// Increments drawn i.i.d. from μ with an RNG seeded by `seed`.
Trajectory sample_trajectory(const MeasurePtr& mu, int horizon, std::uint64_t seed, int checkpoint_interval = 16);

/// Product of maps[lo..hi) by balanced splitting.
CircleMap product(const std::vector<const CircleMap*>& maps, std::size_t lo, std::size_t hi);

/// Monte Carlo trial budget and scheduling.
struct MonteCarlo {
  int trials = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Runs fn(i) for i in [0, n) on `workers` threads. Each index is visited
/// exactly once; the first exception is rethrown after all workers stop.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

template <class T>
struct TrialOutcome {
  std::optional<T> value;
  std::string error;
};

/// Samples `trials` trajectories (trial i uses derive_seed(base_seed, i)) and
/// evaluates `statistic` on each. The output order is the trial order and is
/// identical for every worker count. A throwing statistic only fails its own
/// trial.
template <class Statistic>
auto batch(const MeasurePtr& mu, int horizon, int trials, std::uint64_t base_seed, Statistic&& statistic, int workers = 1)
    -> std::vector<TrialOutcome<std::invoke_result_t<Statistic&, const Trajectory&>>> {
  using R = std::invoke_result_t<Statistic&, const Trajectory&>;
  std::vector<TrialOutcome<R>> out(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(trials, workers, [&](int i) {
    try {
      const Trajectory t = sample_trajectory(mu, horizon, derive_seed(base_seed, static_cast<std::uint64_t>(i)));
      out[static_cast<std::size_t>(i)].value.emplace(statistic(t));
    } catch (const std::exception& e) {
      out[static_cast<std::size_t>(i)].error = e.what();
    }
  });
  return out;
}

}  // namespace circlewalk
