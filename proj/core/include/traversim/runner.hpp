/*
 * runner.hpp
 *
 * Drives a scenario to a verdict and emits the run artifacts: a line-oriented
 * event log, layer snapshots, the final maps, and a structured run report.
 */

#ifndef TRAVERSIM_RUNNER_HPP
#define TRAVERSIM_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "traversim/scenario.hpp"

namespace traversim {

enum class Verdict { goal_reached, failed, no_path, tick_limit };

std::string_view to_string(Verdict v);

struct RunOptions {
  std::optional<std::uint64_t> seed;        // override run.seed
  std::optional<std::int64_t> max_ticks;    // override run.max_ticks
  std::optional<int> snapshot_every;        // override run.snapshot_every
  bool probe_all = false;                   // disable path-corridor gating
  bool quiet = true;                        // no per-tick stderr notes
};

struct RunReport {
  Verdict verdict = Verdict::tick_limit;
  std::int64_t ticks_used = 0;
  std::vector<ProbeEvent> probe_events;
  double path_length_m = 0.0;
  std::vector<GridIndex> cells_entered;
  std::size_t dropped_hits = 0;
  std::string effective_scenario;  // canonical text, overrides applied
};

/// Run to a terminal status or the tick limit, writing events.jsonl,
/// report.json, effective_scenario.cfg, periodic/probe snapshots, and the
/// final layers under out_dir.
RunReport run_scenario(const Scenario& scenario,
                       const std::filesystem::path& out_dir,
                       const RunOptions& options = {});

/// Exit-code contract: 0 iff the goal was reached.
int exit_code(Verdict v);

}  // namespace traversim

#endif  // TRAVERSIM_RUNNER_HPP
