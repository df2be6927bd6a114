#pragma once

#include <cstdint>
#include <vector>

#include "circlewalk/boundary.hpp"

namespace circlewalk {

/// I1 dominates I2 when the arcs are disjoint or interior(I1) ⊇ I2.
bool dominates(const Arc& i1, const Arc& i2);

/// Z^J_{n,s}: number of 1 <= k <= ⌈n/s⌉ such that w_{ks}(J) dominates
/// w_{js}(J) for every 0 <= j < k. Needs a horizon of at least s⌈n/s⌉.
int count_Z(const Trajectory& t, const Arc& J, int s, int n);

/// Indicator per trial of "w_{js}(J) dominates J for all 1 <= j <= j_max".
MeanEstimate dominating_probability(const MeasurePtr& mu, const Arc& J, int s, int j_max, const MonteCarlo& mc);

/// A collection of length n: distinguished times i_1 < ... < i_k in [1, n]
/// and one fixed increment (atom index) for every other time, in order.
struct Collection {
  MeasurePtr mu;
  int n = 0;
  std::vector<int> times;
  std::vector<std::uint32_t> fixed;

  int k() const { return static_cast<int>(times.size()); }
  friend bool operator==(const Collection& a, const Collection& b) {
    return a.n == b.n && a.times == b.times && a.fixed == b.fixed;
  }
};

/// Marks the times 1 <= i <= n at which w_{i-1}(J) dominates w_l(J) for all
/// l < i-1, g_i ∈ {a, e}, and w_i^{-1}(xi) ∉ J.
Collection extract_good_collection(const Trajectory& t, const CirclePoint& xi, const CircleMap& a, const Arc& J, int n);

/// Keeps the first k_max distinguished times; later ones become fixed at the
/// trajectory's own increments.
Collection truncate_collection(const Collection& q, const Trajectory& t, int k_max);

inline constexpr int kVariantCap = 16;

/// The 2^k endpoints y_n, distinguished increments ranging over {a, e}. The
/// bit r of the variant index selects a (1) or e (0) at time i_{r+1}.
std::vector<CircleMap> enumerate_variants(const Collection& q, const CircleMap& a, int cap = kVariantCap);

/// True iff the 2^k endpoints are pairwise distinct.
bool is_satisfactory(const Collection& q, const CircleMap& a, int cap = kVariantCap);

/// W_n: number of 1 <= k <= n with w_k(J) dominating every w_j(J), j < k,
/// w_k^{-1}(xi) ∉ J and g_{k+1} ∈ {a, e}. Needs a horizon of at least n+1.
int count_W(const Trajectory& t, const CirclePoint& xi, const CircleMap& a, const Arc& J, int n);

}  // namespace circlewalk
