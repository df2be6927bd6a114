#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circlewalk/boundary.hpp"

namespace circlewalk {

/// -Σ p log p in nats.
double shannon_entropy(const StepDistribution& mu);
double shannon_entropy(const std::vector<Rational>& weights);

/// Entropy of the two-point law (p_a, p_e) / (p_a + p_e).
double bernoulli_entropy(const Rational& p_a, const Rational& p_e);

struct EntropyPoint {
  int n = 0;
  double entropy = 0.0;
  std::size_t support_size = 0;
};

struct EntropyCurve {
  std::vector<EntropyPoint> points;
  bool truncated = false;  // support_cap exceeded before n_max
  int truncated_at = 0;    // first n whose support would exceed the cap

  /// H(μ^{*(n+1)}) - H(μ^{*n}) for consecutive computed points.
  std::vector<double> increments() const;
};

inline constexpr std::size_t kDefaultSupportCap = 2'000'000;

/// Exact H(μ^{*n}) for n = 1..n_max, merging words by canonical form.
/// Stops (flagged) when a support would exceed support_cap.
EntropyCurve entropy_curve(const StepDistribution& mu, int n_max, std::size_t support_cap = kDefaultSupportCap,
                           int workers = 1);

struct CondEntropyReport {
  int n = 0;
  double proxy = 0.0;  // Σ_bins p(bin) H(w_n | bin), Miller–Madow corrected
  double ci_low = 0.0;
  double ci_high = 0.0;
  int bins = 0;
  int trials = 0;
  int bootstrap = 0;
  int undersampled_bins = 0;  // occupied bins where most samples are singletons
  int not_concentrated = 0;
};

/// Binned plug-in estimate of H(w_n | ξ): trials are grouped by the arc bin
/// of xi_hat and the entropy of the observed w_n is averaged over bins. The
/// interval is the point estimate ± 1.96 bootstrap standard deviations.
CondEntropyReport conditional_entropy_proxy(const MeasurePtr& mu, int n, int arc_bins, int xi_horizon,
                                            const MonteCarlo& mc, int bootstrap = 200, const GridOptions& grid = {});

}  // namespace circlewalk
