#pragma once

#include <map>
#include <string>
#include <vector>

#include "circlewalk/boundary.hpp"

namespace circlewalk {

/// Finitely supported configuration Br -> R, stored multiplicatively: the
/// entry at x is the jump ratio r(x) and the value is log2 r(x). Entries with
/// ratio 1 (value 0) are never stored.
class BreakpointConfiguration {
 public:
  BreakpointConfiguration() = default;

  Rational ratio(const CirclePoint& x) const;
  /// log2 of the ratio; throws std::domain_error unless it is a power of two.
  long exponent(const CirclePoint& x) const;
  double log2_value(const CirclePoint& x) const;
  /// Every stored ratio is a power of two (always the case in T).
  bool exact() const;

  /// Adds log2(r) at x.
  void add(const CirclePoint& x, const Rational& r);

  const std::map<CirclePoint, Rational>& entries() const { return ratios_; }
  std::size_t size() const { return ratios_.size(); }
  bool empty() const { return ratios_.empty(); }

  /// Pointwise sum.
  friend BreakpointConfiguration operator+(const BreakpointConfiguration& a, const BreakpointConfiguration& b);
  friend BreakpointConfiguration operator-(const BreakpointConfiguration& a);
  friend bool operator==(const BreakpointConfiguration&, const BreakpointConfiguration&) = default;

  /// "{x: value, ...}" with exponents when exact.
  std::string str() const;

 private:
  std::map<CirclePoint, Rational> ratios_;
};

/// C_g(x) = log2 of the derivative jump (g^{-1})'(x+) / (g^{-1})'(x-).
BreakpointConfiguration cocycle(const CircleMap& g);

/// S_g C : x -> C(g^{-1}(x)); entries move from x to g(x).
BreakpointConfiguration shift_config(const CircleMap& g, const BreakpointConfiguration& c);

/// g.C = C_g + S_g C.
BreakpointConfiguration act(const CircleMap& g, const BreakpointConfiguration& c);

/// C_{gh} == C_g + S_g C_h, compared exactly.
bool verify_chain_rule(const CircleMap& g, const CircleMap& h);

/// Cocycles of every atom of μ, by atom index.
std::vector<BreakpointConfiguration> atom_cocycles(const StepDistribution& mu);

struct PointTrack {
  CirclePoint x;
  std::vector<std::pair<int, Rational>> changes;  // (n, ratio of C_{w_n}(x)) whenever the value changes
  int last_change = 0;                            // N(x); 0 when the value never changes
  Rational final_ratio{1};                        // C_{w_horizon}(x) as a ratio
};

/// Follows C_{w_n}(x) for n = 0..horizon through C_{w_{n+1}}(x) =
/// C_{w_n}(x) + C_{g_{n+1}}(w_n^{-1}(x)).
std::vector<PointTrack> track_configuration(const Trajectory& t, const std::vector<CirclePoint>& watched, int horizon);

/// Union of the breakpoints of every atom of μ and of their inverses.
std::vector<CirclePoint> measure_breakpoints(const StepDistribution& mu);

struct ReturnStats {
  std::vector<int> returns;      // per trial: #{1 <= n <= horizon : x_n = x}
  std::vector<int> last_return;  // per trial: last such n, 0 if none
  MeanEstimate mean_returns;
  double fraction_last_below_half = 0.0;  // last_return < horizon/2
  bool degenerate = false;                // every step of every trial returned
};

/// Returns of the chain x_n = w_n^{-1}(x) to its starting point.
ReturnStats orbit_return_stats(const MeasurePtr& mu, const CirclePoint& x, int horizon, const MonteCarlo& mc);

struct HarmonicEstimate {
  MeanEstimate value;  // fraction of trials with log2 C_∞(gw)(y) = k
  int unstabilized = 0;  // trials whose tracked value changed after horizon/2
  int trials = 0;
};

/// f(g) = P[C_∞(g w)(y) = k], using C_∞(g w)(y) = C_g(y) + C_∞(w)(g^{-1} y)
/// with C_∞(w) read at the horizon.
HarmonicEstimate estimate_harmonic(const MeasurePtr& mu, const CircleMap& g, const CirclePoint& y, long k, int horizon,
                                   const MonteCarlo& mc);

struct MeanValueCheck {
  HarmonicEstimate f_g;
  std::vector<HarmonicEstimate> f_gh;  // per atom h of μ
  double mean_value = 0.0;             // Σ_h μ(h) f(gh)
  double diff = 0.0;                   // f(g) - mean_value
  double sigma = 0.0;                  // combined standard error of diff
};

/// Compares f(g) with Σ_h μ(h) f(gh). Every estimate gets its own derived
/// seed, so the terms are independent.
MeanValueCheck harmonic_mean_value_check(const MeasurePtr& mu, const CircleMap& g, const CirclePoint& y, long k,
                                         int horizon, const MonteCarlo& mc);

struct HarmonicTarget {
  long k = 0;
  double frequency = 0.0;
  std::map<long, int> histogram;  // log2 C_∞(w)(y) over trials
  int unstabilized = 0;
};

/// Picks k as the most frequent value of log2 C_∞(w)(y) (smallest on ties).
HarmonicTarget calibrate_harmonic_target(const MeasurePtr& mu, const CirclePoint& y, int horizon, const MonteCarlo& mc);

struct TheoremBRow {
  int n = 0;
  HarmonicEstimate f_e;
  HarmonicEstimate f_an;
  MeanEstimate nu_In;
  Arc I_n;
  double margin = 0.0;  // |f_an - f_e| - 2 nu_In
  double sigma = 0.0;   // sqrt(se_e^2 + se_an^2 + 4 se_nu^2)
  bool verdict = false; // margin > 3 sigma
};

struct TheoremBReport {
  long k = 0;
  std::vector<TheoremBRow> rows;
  bool verdict = false;
};

struct TheoremBOptions {
  int horizon = 300;
  int xi_horizon = 240;
  GridOptions grid;
};

/// For a_n = remark_element(y, n) compares |f(a_n) - f(e)| with 2 ν(I_n),
/// I_n the support arc of a_n. Each estimate uses its own derived seed.
TheoremBReport theorem_b_witness(const MeasurePtr& mu, const CirclePoint& y, long k, const std::vector<int>& n_list,
                                 const MonteCarlo& mc, const TheoremBOptions& opts = {});

}  // namespace circlewalk
