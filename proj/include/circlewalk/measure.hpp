#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circlewalk/circle_map.hpp"
#include "circlewalk/thompson.hpp"

namespace circlewalk {

struct Atom {
  CircleMap element;
  Rational weight;
  std::string label;  // word that produced the element, "e" for the identity
};

/// Finitely supported probability measure with exact weights.
///
/// Construction merges atoms that are equal as maps (labels of merged atoms
/// keep the first one seen), rejects non-positive weights and requires the
/// weights to sum to exactly 1. Atom order is the order of first appearance
/// and is part of the measure's identity for sampling.
class StepDistribution {
 public:
  explicit StepDistribution(std::vector<Atom> atoms);

  static StepDistribution delta(const CircleMap& g, std::string label = "g");
  /// Uniform over the given elements (duplicates merge).
  static StepDistribution uniform(const std::vector<CircleMap>& elements, const std::vector<std::string>& labels = {});

  /// [{word: [names], weight: "num/den"}, ...] resolved through `gens`; a record
  /// may give {map, label} instead of a word, as written by to_json.
  static StepDistribution from_json(const nlohmann::json& j, const GeneratorSet& gens);
  static StepDistribution load(const std::filesystem::path& path, const GeneratorSet& gens);
  nlohmann::json to_json() const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const CircleMap& element(std::size_t i) const { return atoms_[i].element; }
  const CircleMap& inverse_element(std::size_t i) const { return inverses_[i]; }
  const Rational& weight(std::size_t i) const { return atoms_[i].weight; }

  std::optional<std::size_t> index_of(const CircleMap& g) const;
  /// Exact mass of g (zero when g is not an atom).
  Rational mass(const CircleMap& g) const;

  /// Atom index for a uniform 64-bit draw: inverse CDF against the exact
  /// cumulative weights scaled by 2^64 (bias below 2^-63 per atom).
  std::size_t index_for_draw(std::uint64_t u) const;
  template <class Rng>
  std::size_t sample_index(Rng& rng) const {
    return index_for_draw(static_cast<std::uint64_t>(rng()));
  }
  template <class Rng>
  const CircleMap& sample(Rng& rng) const {
    return element(sample_index(rng));
  }

  /// Σ μ(g) |Br_g|.
  Rational breakpoint_moment() const;

  friend bool operator==(const StepDistribution& a, const StepDistribution& b);

 private:
  std::vector<Atom> atoms_;
  std::vector<CircleMap> inverses_;
  std::vector<std::uint64_t> thresholds_;
};

/// ½μ + ½δ_e.
StepDistribution lazify(const StepDistribution& mu);
/// μ*ν: the law of gh with g ~ μ, h ~ ν independent.
StepDistribution convolve(const StepDistribution& mu, const StepDistribution& nu);
/// μ^{*s}; s = 0 is rejected.
StepDistribution power(const StepDistribution& mu, int s);
/// μ̄(g) = μ(g^{-1}).
StepDistribution reflect(const StepDistribution& mu);

/// Bundled measure: uniform over A, B, C and their inverses.
StepDistribution default_measure(const GeneratorSet& gens);
StepDistribution default_measure();
/// ½ on the identity, the rest uniform over A, B, C, a and their inverses.
StepDistribution default_lazy_measure(const GeneratorSet& gens);
StepDistribution default_lazy_measure();

using MeasurePtr = std::shared_ptr<const StepDistribution>;

}  // namespace circlewalk
