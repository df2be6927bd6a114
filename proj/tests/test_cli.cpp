#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "circlewalk/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("circlewalk-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "circlewalk");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return circlewalk::cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("every subcommand has defaults") {
  CHECK(circlewalk::cli::subcommands().size() == 17);
  for (const auto& s : circlewalk::cli::subcommands()) {
    const json d = circlewalk::cli::defaults(s);
    CHECK(d.contains("seed"));
    CHECK(d.contains("measure"));
  }
  CHECK_THROWS_AS(circlewalk::cli::defaults("nope"), circlewalk::cli::ConfigError);
}

TEST_CASE("unknown subcommands and bad parameters fail") {
  const auto dir = fresh_dir("errors");
  CHECK(call({"nope"}) == 2);
  CHECK(call({}) == 2);
  CHECK(call({"contract-curve", "--out", dir.string(), "--set", "bins=3"}) == 2);
  CHECK(call({"contract-curve", "--out", dir.string(), "--trials", "-4"}) == 2);
  CHECK(call({"theorem-b", "--out", dir.string(), "--set", "y=\"1/3\""}) == 2);
  CHECK(call({"stationary", "--out", dir.string(), "--measure", "/nonexistent.json"}) == 2);
  CHECK(call({"contract-curve", "--out", dir.string(), "--config", "/nonexistent.json"}) == 2);
  CHECK(call({"contract-curve", "--bogus-flag"}) == 2);
  CHECK_THROWS_AS(circlewalk::cli::run("rn-check", json{{"out", dir.string()}, {"a", "Q"}}), circlewalk::cli::ConfigError);
}

TEST_CASE("zero trials writes header-only tables") {
  const auto dir = fresh_dir("zero");
  const auto r = circlewalk::cli::run("stabilization", json{{"trials", 0}, {"out", dir.string()}});
  REQUIRE(r.files.size() == 1);
  CHECK(slurp(r.files[0]) == "trial,x,last_change,final_exponent,stabilized,matches_position\n");
  CHECK(fs::exists(dir / "stabilization.manifest.json"));
}

TEST_CASE("precedence: defaults < config < set < flags") {
  const auto dir = fresh_dir("precedence");
  {
    std::ofstream(dir / "cfg.json") << R"({"seed": 5, "trials": 7, "horizon": 9})";
  }
  CHECK(call({"contract-curve", "--config", (dir / "cfg.json").string(), "--set", "trials=6", "--set", "seed=4", "--seed", "3",
              "--out", dir.string()}) == 0);
  const json m = json::parse(slurp(dir / "contract-curve.manifest.json"));
  CHECK(m["config"]["seed"] == 3);
  CHECK(m["config"]["trials"] == 6);
  CHECK(m["config"]["horizon"] == 9);
  CHECK(m["seed"] == 3);
  CHECK(m["subcommand"] == "contract-curve");
  CHECK(m.contains("wall_time_seconds"));
  CHECK(m["version"] == circlewalk::cli::version());
}

TEST_CASE("identical configs give identical bytes") {
  const auto d1 = fresh_dir("same1"), d2 = fresh_dir("same2");
  const json base{{"trials", 30}, {"horizon", 20}};
  json c1 = base, c2 = base;
  c1["out"] = d1.string();
  c2["out"] = d2.string();
  c2["workers"] = 3;
  const auto r1 = circlewalk::cli::run("domination-w", c1);
  const auto r2 = circlewalk::cli::run("domination-w", c2);
  CHECK(slurp(r1.files[0]) == slurp(r2.files[0]));
  CHECK(r1.summary["count_mismatches"] == 0);
}

TEST_CASE("interval contraction succeeds within the step budget") {
  const auto dir = fresh_dir("interval");
  const auto r = circlewalk::cli::run("contract-interval", json{{"out", dir.string()}});
  CHECK(r.summary["attempts"] == 100);
  CHECK(r.summary["found"].get<int>() >= 95);
}

TEST_CASE("relations verify") {
  const auto dir = fresh_dir("relations");
  const auto r = circlewalk::cli::run("verify-relations", json{{"out", dir.string()}});
  CHECK(r.summary["failures"] == 0);
}
