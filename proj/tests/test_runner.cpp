#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "traversim/runner.hpp"

using namespace traversim;
namespace fs = std::filesystem;

namespace {

const char* kOpenWorld = R"(
[world]
extent = 4 4

[robot]
start = 0.5 2.0 0
goal = 3.5 2.0

[sensors]
depth_rays = 24
vertical_rays = 8

[fusion]
local_span = 4.0
)";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("open world run reaches the goal with exit code 0") {
  const auto out = fresh_dir("open");
  const auto report = run_scenario(parse_scenario_text(kOpenWorld), out);
  CHECK(report.verdict == Verdict::goal_reached);
  CHECK(exit_code(report.verdict) == 0);
  CHECK(report.ticks_used > 0);
  CHECK(report.path_length_m > 2.5);
  CHECK(!report.cells_entered.empty());
  CHECK(fs::exists(out / "events.jsonl"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "final" / "traversability.pgm"));
  CHECK(fs::exists(out / "final" / "traversability.csv"));
  CHECK(fs::exists(out / "final" / "semantic_class.csv"));
  CHECK(fs::exists(out / "final" / "traversability_categories.ppm"));
}

TEST_CASE("snapshot PGM dimensions match the scenario grid") {
  const auto out = fresh_dir("pgm");
  (void)run_scenario(parse_scenario_text(kOpenWorld), out);
  const std::string pgm = slurp(out / "final" / "traversability.pgm");
  // 4 m x 4 m at 0.05 m: 80 x 80
  CHECK(pgm.rfind("P5\n80 80\n255\n", 0) == 0);
  const std::string header = "P5\n80 80\n255\n";
  CHECK(pgm.size() == header.size() + 80 * 80);

  const std::string csv = slurp(out / "final" / "traversability.csv");
  int rows = 0;
  for (char c : csv) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 80);
}

TEST_CASE("tick limit verdict") {
  const auto out = fresh_dir("ticklimit");
  RunOptions options;
  options.max_ticks = 1;
  const auto report = run_scenario(parse_scenario_text(kOpenWorld), out, options);
  CHECK(report.verdict == Verdict::tick_limit);
  CHECK(report.ticks_used == 1);
  CHECK(exit_code(report.verdict) == 1);
}

TEST_CASE("goal sealed by true obstacles ends in no_path") {
  const char* sealed = R"(
[world]
extent = 4 4
box = 2.4 0 2.8 4 1.0   # full-height wall between start and goal

[robot]
start = 0.5 2.0 0
goal = 3.5 2.0

[sensors]
depth_rays = 32
vertical_rays = 10

[fusion]
local_span = 4.0
)";
  const auto out = fresh_dir("sealed");
  const auto report = run_scenario(parse_scenario_text(sealed), out);
  CHECK(report.verdict == Verdict::no_path);
  CHECK(exit_code(report.verdict) == 1);
}

TEST_CASE("event log replays byte-identically from the echoed config") {
  const char* noisy = R"(
[world]
extent = 4 4
semantic = plants 1.6 1.2 2.6 2.8
bearing = 1.6 1.2 2.6 2.8 40

[robot]
start = 0.5 2.0 0
goal = 3.5 2.0

[sensors]
depth_rays = 24
vertical_rays = 8
misclass_prob = 0.05

[probe]
noise_std = 2

[fusion]
local_span = 4.0

[run]
seed = 11
)";
  const auto out1 = fresh_dir("replay1");
  const auto report1 = run_scenario(parse_scenario_text(noisy), out1);
  CHECK(report1.probe_events.size() == 1);

  // replay from the echoed canonical scenario
  const auto out2 = fresh_dir("replay2");
  const auto echoed = parse_scenario_text(report1.effective_scenario);
  const auto report2 = run_scenario(echoed, out2);

  CHECK(report1.verdict == report2.verdict);
  CHECK(slurp(out1 / "events.jsonl") == slurp(out2 / "events.jsonl"));

  // a seed override lands in the echo and changes the log
  const auto out3 = fresh_dir("replay3");
  RunOptions options;
  options.seed = 999;
  const auto report3 = run_scenario(parse_scenario_text(noisy), out3, options);
  CHECK(report3.effective_scenario.find("seed = 999") != std::string::npos);
  CHECK(slurp(out1 / "events.jsonl") != slurp(out3 / "events.jsonl"));
}

TEST_CASE("probe-all option disables corridor gating in the echo") {
  const auto out = fresh_dir("probeall");
  RunOptions options;
  options.probe_all = true;
  options.max_ticks = 1;
  const auto report =
      run_scenario(parse_scenario_text(kOpenWorld), out, options);
  CHECK(report.effective_scenario.find("corridor_gating = false") !=
        std::string::npos);
}
