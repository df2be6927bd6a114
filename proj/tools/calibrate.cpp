// One-off calibration of the Z and W floors, written to data/calibration.json.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "circlewalk/cli.hpp"

using nlohmann::json;

namespace {

constexpr std::uint64_t kCalibrationSeed = 90001;
constexpr int kTrials = 2000;
constexpr double kFloorFactor = 0.5;

double mean_over_n(const std::string& sub, int n, const std::string& key, const std::filesystem::path& out) {
  json cfg{{"seed", kCalibrationSeed}, {"trials", kTrials}, {"horizon", n}, {"out", out.string()}};
  if (sub == "domination-z") cfg["scan_s_max"] = 0;
  return circlewalk::cli::run(sub, cfg).summary.at(key).get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path target = argc > 1 ? argv[1] : "data/calibration.json";
  const auto scratch = std::filesystem::temp_directory_path() / "circlewalk-calibration";
  json floors = json::object();
  for (int n : {30, 60}) {
    const double z = mean_over_n("domination-z", n, "mean_Z_over_n", scratch);
    floors["Z_over_n"][std::to_string(n)] = {{"estimate", z}, {"floor", kFloorFactor * z}};
  }
  const double w = mean_over_n("domination-w", 60, "mean_W_over_n", scratch);
  floors["W_over_n"]["60"] = {{"estimate", w}, {"floor", kFloorFactor * w}};
  const json out{{"seed", kCalibrationSeed}, {"trials", kTrials}, {"floor_factor", kFloorFactor}, {"measure", "lazy"},
                 {"floors", floors}};
  std::ofstream(target) << out.dump(2) << '\n';
  std::cout << out.dump(2) << '\n';
  std::filesystem::remove_all(scratch);
}
