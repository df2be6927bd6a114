#pragma once

#include <memory>

#include "circlewalk/measure.hpp"
#include "circlewalk/thompson.hpp"
#include "circlewalk/walk.hpp"

namespace testing {

using namespace circlewalk;

inline const GeneratorSet& gens() {
  static const GeneratorSet g = default_generators();
  return g;
}

inline MeasurePtr uniform_mu() {
  static const MeasurePtr mu = std::make_shared<const StepDistribution>(default_measure());
  return mu;
}

inline MeasurePtr lazy_mu() {
  static const MeasurePtr mu = std::make_shared<const StepDistribution>(default_lazy_measure());
  return mu;
}

inline MeasurePtr delta_mu(const CircleMap& g) { return std::make_shared<const StepDistribution>(StepDistribution::delta(g)); }

/// Random word of length 0..max_len in the shipped generators.
inline CircleMap random_element(Rng& rng, int max_len = 12) {
  const auto& all = gens().generators();
  const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(max_len + 1));
  CircleMap g;
  for (int i = 0; i < len; ++i) g = g.compose(all[rng() % all.size()].map);
  return g;
}

inline Rational random_rational(Rng& rng, long max_den = 1000) {
  const long den = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(max_den));
  const long num = static_cast<long>(rng() % static_cast<std::uint64_t>(4 * max_den)) - 2 * max_den;
  return Rational(num, den);
}

inline CirclePoint random_dyadic_point(Rng& rng, int bits = 10) {
  return CirclePoint(static_cast<long>(rng() % (1UL << bits)), 1L << bits);
}

}  // namespace testing
