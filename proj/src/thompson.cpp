#include "circlewalk/thompson.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace circlewalk {

GeneratorSet GeneratorSet::from_json(const nlohmann::json& j, std::string note) {
  if (!j.is_array()) throw std::invalid_argument("generator file must be a JSON array");
  GeneratorSet set;
  set.note_ = std::move(note);
  std::set<std::string> names;
  for (const auto& rec : j) {
    Generator g{rec.at("name").get<std::string>(), CircleMap::from_json(rec.at("map")),
                rec.at("inverse_name").get<std::string>()};
    if (!names.insert(g.name).second) throw std::invalid_argument("duplicate generator name '" + g.name + "'");
    set.generators_.push_back(std::move(g));
  }
  for (const auto& g : set.generators_) {
    if (!set.contains(g.inverse_name))
      throw std::invalid_argument("generator '" + g.name + "' lists missing inverse '" + g.inverse_name + "'");
    if (!g.map.compose(set.at(g.inverse_name).map).is_identity())
      throw std::invalid_argument("generator '" + g.name + "' composed with '" + g.inverse_name + "' is not the identity");
  }
  return set;
}

GeneratorSet GeneratorSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open generator file " + path.string());
  return from_json(nlohmann::json::parse(in), path.string());
}

bool GeneratorSet::contains(std::string_view name) const {
  for (const auto& g : generators_)
    if (g.name == name) return true;
  return false;
}

const Generator& GeneratorSet::at(std::string_view name) const {
  for (const auto& g : generators_)
    if (g.name == name) return g;
  throw std::invalid_argument("unknown generator name '" + std::string(name) + "'");
}

CircleMap GeneratorSet::word(const Word& letters) const {
  CircleMap out;
  for (const auto& l : letters) out = out.compose(at(l).map);
  return out;
}

void GeneratorSet::require_thompson() const {
  for (const auto& g : generators_)
    if (!g.map.is_in_thompson_t()) throw std::invalid_argument("generator '" + g.name + "' is not in Thompson's group T");
}

nlohmann::json GeneratorSet::to_json() const {
  auto j = nlohmann::json::array();
  for (const auto& g : generators_) j.push_back({{"name", g.name}, {"map", g.map.to_json()}, {"inverse_name", g.inverse_name}});
  return j;
}

GeneratorSet default_generators() {
  GeneratorSet set = GeneratorSet::from_json(nlohmann::json::parse(bundled_generators_json()), "bundled default generators");
  set.require_thompson();
  for (const auto& r : default_relations())
    if (!verify_relation(set, r)) throw std::logic_error("bundled relation does not hold");
  return set;
}

std::vector<Word> relations_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("relation file must be a JSON array of words");
  std::vector<Word> out;
  for (const auto& w : j) out.push_back(w.get<Word>());
  return out;
}

std::vector<Word> default_relations() { return relations_from_json(nlohmann::json::parse(bundled_relations_json())); }

std::vector<Word> load_relations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open relation file " + path.string());
  return relations_from_json(nlohmann::json::parse(in));
}

bool verify_relation(const GeneratorSet& gens, const Word& word) { return gens.word(word).is_identity(); }

CircleMap remark_element(const CirclePoint& y, int n) {
  if (n < 1) throw std::invalid_argument("remark_element: n must be >= 1");
  if (!y.value().is_dyadic()) throw std::invalid_argument("remark_element: y = " + y.str() + " is not dyadic");
  const Rational big = Rational::pow2(n);
  const Rational small = Rational::pow2(-n);
  const Rational short_len = Rational::pow2(-2 * n);
  const Rational& y0 = y.value();
  return CircleMap::canonicalize({
      {y0, big, y0},
      {y0 + short_len, small, y0 + small},
      {y0 + short_len + small, Rational(1), y0 + short_len + small},
  });
}

}  // namespace circlewalk
