#include "circlewalk/measure.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace circlewalk {

namespace {

std::string join_labels(const std::string& a, const std::string& b) {
  if (a == "e") return b;
  if (b == "e") return a;
  return a + " " + b;
}

}  // namespace

StepDistribution::StepDistribution(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("step distribution needs at least one atom");
  std::unordered_map<CircleMap, std::size_t, CircleMapHash> seen;
  Rational total(0);
  for (auto& a : atoms) {
    if (a.weight.sign() <= 0) throw std::invalid_argument("non-positive weight " + a.weight.str() + " for '" + a.label + "'");
    total += a.weight;
    if (auto it = seen.find(a.element); it != seen.end()) {
      atoms_[it->second].weight += a.weight;
      continue;
    }
    seen.emplace(a.element, atoms_.size());
    atoms_.push_back(std::move(a));
  }
  if (total != Rational(1)) throw std::invalid_argument("weights sum to " + total.str() + ", not 1");

  inverses_.reserve(atoms_.size());
  for (const auto& a : atoms_) inverses_.push_back(a.element.inverse());

  // thresholds_[i] = floor(2^64 * cumulative weight through atom i).
  mpz_class two64 = 1;
  mpz_mul_2exp(two64.get_mpz_t(), two64.get_mpz_t(), 64);
  Rational cum(0);
  for (const auto& a : atoms_) {
    cum += a.weight;
    mpz_class scaled = cum.raw().get_num() * two64;
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), cum.raw().get_den_mpz_t());
    std::uint64_t t = 0;
    if (scaled >= two64) {
      t = ~std::uint64_t{0};
    } else {
      mpz_export(&t, nullptr, -1, sizeof(t), 0, 0, scaled.get_mpz_t());
    }
    thresholds_.push_back(t);
  }
}

StepDistribution StepDistribution::delta(const CircleMap& g, std::string label) {
  return StepDistribution({Atom{g, Rational(1), std::move(label)}});
}

StepDistribution StepDistribution::uniform(const std::vector<CircleMap>& elements, const std::vector<std::string>& labels) {
  if (elements.empty()) throw std::invalid_argument("uniform: no elements");
  std::vector<Atom> atoms;
  const Rational w(1, static_cast<long>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i)
    atoms.push_back({elements[i], w, i < labels.size() ? labels[i] : "g" + std::to_string(i)});
  return StepDistribution(std::move(atoms));
}

StepDistribution StepDistribution::from_json(const nlohmann::json& j, const GeneratorSet& gens) {
  if (!j.is_array()) throw std::invalid_argument("measure file must be a JSON array");
  std::vector<Atom> atoms;
  try {
    for (const auto& rec : j) {
      const Rational weight = Rational::parse(rec.at("weight").get<std::string>());
      if (rec.contains("map")) {
        atoms.push_back({CircleMap::from_json(rec.at("map")), weight, rec.value("label", std::string("g"))});
        continue;
      }
      const Word w = rec.at("word").get<Word>();
      std::string label;
      for (const auto& l : w) label += (label.empty() ? "" : " ") + l;
      atoms.push_back({gens.word(w), weight, label.empty() ? "e" : label});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed measure record: ") + e.what());
  }
  return StepDistribution(std::move(atoms));
}

StepDistribution StepDistribution::load(const std::filesystem::path& path, const GeneratorSet& gens) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measure file " + path.string());
  return from_json(nlohmann::json::parse(in), gens);
}

nlohmann::json StepDistribution::to_json() const {
  auto j = nlohmann::json::array();
  for (const auto& a : atoms_) j.push_back({{"label", a.label}, {"weight", a.weight.str()}, {"map", a.element.to_json()}});
  return j;
}

std::optional<std::size_t> StepDistribution::index_of(const CircleMap& g) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].element == g) return i;
  return std::nullopt;
}

Rational StepDistribution::mass(const CircleMap& g) const {
  const auto i = index_of(g);
  return i ? atoms_[*i].weight : Rational(0);
}

std::size_t StepDistribution::index_for_draw(std::uint64_t u) const {
  for (std::size_t i = 0; i + 1 < thresholds_.size(); ++i)
    if (u < thresholds_[i]) return i;
  return thresholds_.size() - 1;
}

Rational StepDistribution::breakpoint_moment() const {
  Rational m(0);
  for (const auto& a : atoms_) m += a.weight * Rational(static_cast<long>(a.element.breakpoint_count()));
  return m;
}

bool operator==(const StepDistribution& a, const StepDistribution& b) {
  if (a.size() != b.size()) return false;
  for (const auto& atom : a.atoms_)
    if (b.mass(atom.element) != atom.weight) return false;
  return true;
}

StepDistribution lazify(const StepDistribution& mu) {
  std::vector<Atom> atoms;
  atoms.push_back({CircleMap::identity(), Rational(1, 2), "e"});
  for (const auto& a : mu.atoms()) atoms.push_back({a.element, a.weight / Rational(2), a.label});
  return StepDistribution(std::move(atoms));
}

StepDistribution convolve(const StepDistribution& mu, const StepDistribution& nu) {
  std::vector<Atom> atoms;
  std::unordered_map<CircleMap, std::size_t, CircleMapHash> index;
  for (const auto& g : mu.atoms()) {
    for (const auto& h : nu.atoms()) {
      CircleMap gh = g.element.compose(h.element);
      Rational w = g.weight * h.weight;
      if (auto it = index.find(gh); it != index.end()) {
        atoms[it->second].weight += w;
        continue;
      }
      index.emplace(gh, atoms.size());
      atoms.push_back({std::move(gh), std::move(w), join_labels(g.label, h.label)});
    }
  }
  return StepDistribution(std::move(atoms));
}

StepDistribution power(const StepDistribution& mu, int s) {
  if (s < 1) throw std::invalid_argument("power: exponent must be >= 1");
  StepDistribution out = mu;
  for (int i = 1; i < s; ++i) out = convolve(out, mu);
  return out;
}

StepDistribution reflect(const StepDistribution& mu) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::string& l = mu.atoms()[i].label;
    atoms.push_back({mu.inverse_element(i), mu.weight(i), l == "e" ? l : "(" + l + ")^-1"});
  }
  return StepDistribution(std::move(atoms));
}

StepDistribution default_measure(const GeneratorSet& gens) {
  return StepDistribution::from_json(nlohmann::json::parse(bundled_uniform_measure_json()), gens);
}

StepDistribution default_measure() { return default_measure(default_generators()); }

StepDistribution default_lazy_measure(const GeneratorSet& gens) {
  return StepDistribution::from_json(nlohmann::json::parse(bundled_lazy_measure_json()), gens);
}

StepDistribution default_lazy_measure() { return default_lazy_measure(default_generators()); }

}  // namespace circlewalk
