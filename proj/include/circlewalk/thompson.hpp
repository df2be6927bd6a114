#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "circlewalk/circle_map.hpp"

namespace circlewalk {

using Word = std::vector<std::string>;

struct Generator {
  std::string name;
  CircleMap map;
  std::string inverse_name;
};

/// Named group elements closed under the listed inverses. Words are read as
/// products: ["x", "y"] is x∘y.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  /// Parses [{name, map, inverse_name}, ...]; checks that names are unique,
  /// every inverse is listed and that g∘g_inv is the identity.
  static GeneratorSet from_json(const nlohmann::json& j, std::string note = {});
  static GeneratorSet load(const std::filesystem::path& path);

  bool contains(std::string_view name) const;
  const Generator& at(std::string_view name) const;
  CircleMap word(const Word& letters) const;

  /// Throws std::invalid_argument naming the first generator outside T.
  void require_thompson() const;

  const std::vector<Generator>& generators() const { return generators_; }
  const std::string& note() const { return note_; }
  nlohmann::json to_json() const;

 private:
  std::vector<Generator> generators_;
  std::string note_;
};

/// Bundled three-generator set for T (A and B generate F, C has order 3) plus
/// one small-support element `a` and its inverse. Validated on load.
GeneratorSet default_generators();
/// Relations shipped with the default set.
std::vector<Word> default_relations();
std::vector<Word> load_relations(const std::filesystem::path& path);
std::vector<Word> relations_from_json(const nlohmann::json& j);

/// True iff the word composes to the identity. Unknown names throw.
bool verify_relation(const GeneratorSet& gens, const Word& word);

/// The element a_n fixing y: slope 2^n on [y, y+4^-n), slope 2^-n on
/// [y+4^-n, y+4^-n+2^-n), identity elsewhere. Requires dyadic y and n >= 1.
CircleMap remark_element(const CirclePoint& y, int n);

/// Raw JSON text of the bundled data files.
std::string_view bundled_generators_json();
std::string_view bundled_relations_json();
std::string_view bundled_lazy_measure_json();
std::string_view bundled_uniform_measure_json();
std::string_view bundled_calibration_json();

}  // namespace circlewalk
