#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace circlewalk::cli {

/// Every subcommand, in the order shown by the usage text.
const std::vector<std::string>& subcommands();

/// Default parameters of a subcommand (before the config file and flags).
nlohmann::json defaults(const std::string& subcommand);

/// Validation failure: reported as one line and a nonzero exit.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  std::vector<std::string> files;  // written CSVs
  nlohmann::json summary;
};

/// Runs a subcommand with a fully merged config and writes
/// <out>/<subcommand>.csv (plus any extra tables) and <out>/<subcommand>.manifest.json.
RunResult run(const std::string& subcommand, const nlohmann::json& config);

/// Command-line entry point. Precedence: subcommand defaults < --config file
/// < --set key=value < dedicated flags.
int main(int argc, char** argv);

std::string version();

}  // namespace circlewalk::cli
