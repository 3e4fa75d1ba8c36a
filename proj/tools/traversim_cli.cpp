// traversim: run a navigation scenario and emit maps, logs, and a verdict.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "traversim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"traversim - 2.5D traversability and terrain-probing simulator"};

  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::int64_t max_ticks = 0;
  int snapshot_every = -1;
  bool probe_all = false;
  bool quiet = false;

  app.add_option("--scenario", scenario_path, "Scenario file")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Override run.seed");
  auto* ticks_opt = app.add_option("--max-ticks", max_ticks, "Override run.max_ticks");
  auto* snap_opt =
      app.add_option("--snapshot-every", snapshot_every,
                     "Snapshot period in ticks (0 = probes and final only)");
  app.add_flag("--probe-all", probe_all,
               "Probe every visible cluster (disable path-corridor gating)");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  traversim::Scenario scenario;
  try {
    scenario = traversim::parse_scenario(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << scenario_path << ": " << e.what() << "\n";
    return 2;
  }

  traversim::RunOptions options;
  if (!seed_opt->empty()) options.seed = seed;
  if (!ticks_opt->empty()) options.max_ticks = max_ticks;
  if (!snap_opt->empty()) options.snapshot_every = snapshot_every;
  options.probe_all = probe_all;
  options.quiet = quiet;

  traversim::RunReport report;
  try {
    report = traversim::run_scenario(scenario, out_dir, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!quiet) {
    std::cout << "verdict: " << traversim::to_string(report.verdict)
              << "  ticks: " << report.ticks_used
              << "  probes: " << report.probe_events.size()
              << "  path: " << report.path_length_m << " m\n"
              << "artifacts in " << out_dir << "/\n";
  }
  return traversim::exit_code(report.verdict);
}
