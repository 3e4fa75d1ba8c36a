#include "traversim/runner.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "traversim/snapshot.hpp"

namespace traversim {

namespace {

using json = nlohmann::ordered_json;

std::string_view to_string(RobotStatus s) {
  switch (s) {
    case RobotStatus::running: return "running";
    case RobotStatus::paused: return "paused";
    case RobotStatus::goal_reached: return "goal_reached";
    case RobotStatus::failed: return "failed";
  }
  return "running";
}

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::found: return "found";
    case PlanStatus::no_path: return "no_path";
    case PlanStatus::blocked_start: return "blocked_start";
    case PlanStatus::blocked_goal: return "blocked_goal";
  }
  return "no_path";
}

json probe_event_json(const ProbeEvent& e) {
  json j;
  j["tick"] = e.tick;
  j["cluster"] = e.cluster_id;
  j["spot"] = {e.measurement.spot.x, e.measurement.spot.y};
  j["f_ext"] = e.measurement.f_ext;
  j["collapsibility"] = e.collapsibility;
  j["cells_updated"] = e.cells_updated;
  return j;
}

void write_snapshot(const LayeredGridMap& map, const std::filesystem::path& dir,
                    std::int64_t tick) {
  char prefix[32];
  std::snprintf(prefix, sizeof prefix, "tick_%06lld_",
                static_cast<long long>(tick));
  for (const auto& id : LayeredGridMap::scalar_layer_ids()) {
    write_pgm(map, id, dir / (prefix + id + ".pgm"));
  }
  write_category_ppm(map, dir / (std::string(prefix) + "traversability_categories.ppm"));
}

void write_final_layers(const LayeredGridMap& map,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& id : LayeredGridMap::scalar_layer_ids()) {
    write_pgm(map, id, dir / (id + std::string(".pgm")));
    write_csv(map, id, dir / (id + std::string(".csv")));
  }
  write_class_csv(map, dir / "semantic_class.csv");
  write_category_ppm(map, dir / "traversability_categories.ppm");
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::goal_reached: return "goal_reached";
    case Verdict::failed: return "failed";
    case Verdict::no_path: return "no_path";
    case Verdict::tick_limit: return "tick_limit";
  }
  return "tick_limit";
}

int exit_code(Verdict v) { return v == Verdict::goal_reached ? 0 : 1; }

RunReport run_scenario(const Scenario& scenario,
                       const std::filesystem::path& out_dir,
                       const RunOptions& options) {
  Scenario s = scenario;
  if (options.seed) s.sim.seed = *options.seed;
  if (options.max_ticks) s.max_ticks = *options.max_ticks;
  if (options.snapshot_every) s.snapshot_every = *options.snapshot_every;
  if (options.probe_all) s.sim.probing.corridor_gating = false;

  std::filesystem::create_directories(out_dir);
  const auto snapshot_dir = out_dir / "snapshots";
  if (s.snapshot_every > 0) std::filesystem::create_directories(snapshot_dir);

  std::ofstream events(out_dir / "events.jsonl", std::ios::binary);
  if (!events) {
    throw std::runtime_error("run_scenario: cannot write to '" +
                             out_dir.string() + "'");
  }
  const auto emit = [&events](const json& j) { events << j.dump() << "\n"; };

  RunReport report;
  report.effective_scenario = scenario_to_text(s);
  {
    std::ofstream echo(out_dir / "effective_scenario.cfg", std::ios::binary);
    echo << report.effective_scenario;
  }

  Simulation sim(s.world, s.sim);
  bool wrote_probe_snapshot = false;
  while (!sim.terminal() && sim.tick() < s.max_ticks) {
    const StepTrace trace = sim.step();

    for (const auto& c : trace.new_clusters) {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "cluster";
      j["id"] = c.id;
      j["class"] = to_string(c.cls);
      j["cells"] = c.cells;
      emit(j);
    }
    for (const auto& c : trace.inherited) {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "cluster_inherit";
      j["id"] = c.id;
      j["collapsibility"] = c.c_value;
      j["cells"] = c.cells;
      emit(j);
    }
    if (trace.pause_issued) {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "pause";
      j["cluster"] = trace.pause_spot ? trace.pause_spot->cluster_id : -1;
      if (trace.pause_spot) {
        j["spot"] = {trace.pause_spot->world_point.x,
                     trace.pause_spot->world_point.y};
      }
      emit(j);
    }
    if (trace.probe_event) {
      json j = probe_event_json(*trace.probe_event);
      j["kind"] = "probe";
      emit(j);
      write_snapshot(sim.map(), out_dir, trace.tick);
      wrote_probe_snapshot = true;
      if (!options.quiet) {
        std::cerr << "tick " << trace.tick << ": probed cluster "
                  << trace.probe_event->cluster_id << ", C = "
                  << trace.probe_event->collapsibility << "\n";
      }
    }
    if (trace.resume_issued) {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "resume";
      emit(j);
    }
    if (trace.replanned) {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "replan";
      j["status"] = to_string(trace.plan_status);
      if (trace.path) {
        j["cost"] = trace.path->total_cost;
        auto waypoints = json::array();
        for (const auto& w : trace.path->waypoints) {
          waypoints.push_back({w.x, w.y});
        }
        j["waypoints"] = std::move(waypoints);
      }
      emit(j);
    }
    {
      json j;
      j["tick"] = trace.tick;
      j["kind"] = "pose";
      j["x"] = trace.pose.position.x;
      j["y"] = trace.pose.position.y;
      j["heading"] = trace.pose.heading;
      j["status"] = to_string(trace.status);
      if (!trace.entered_cells.empty()) {
        auto cells = json::array();
        for (const auto& c : trace.entered_cells) cells.push_back({c.col, c.row});
        j["entered"] = std::move(cells);
      }
      emit(j);
    }
    if (s.snapshot_every > 0 && sim.tick() % s.snapshot_every == 0) {
      write_snapshot(sim.map(), snapshot_dir, sim.tick());
    }
  }
  (void)wrote_probe_snapshot;

  if (sim.robot().status == RobotStatus::goal_reached) {
    report.verdict = Verdict::goal_reached;
  } else if (sim.robot().status == RobotStatus::failed) {
    report.verdict = Verdict::failed;
  } else if (sim.no_path()) {
    report.verdict = Verdict::no_path;
  } else {
    report.verdict = Verdict::tick_limit;
  }
  report.ticks_used = sim.tick();
  report.probe_events = sim.probe_events();
  report.path_length_m = sim.traveled_m();
  report.cells_entered = sim.cells_entered();
  report.dropped_hits = sim.dropped_hits_total();

  {
    json j;
    j["tick"] = sim.tick();
    j["kind"] = "verdict";
    j["verdict"] = to_string(report.verdict);
    emit(j);
  }
  events.close();

  write_final_layers(sim.map(), out_dir / "final");

  json j;
  j["verdict"] = to_string(report.verdict);
  j["ticks_used"] = report.ticks_used;
  auto pe = json::array();
  for (const auto& e : report.probe_events) pe.push_back(probe_event_json(e));
  j["probe_events"] = std::move(pe);
  j["path_length_m"] = report.path_length_m;
  auto cells = json::array();
  for (const auto& c : report.cells_entered) cells.push_back({c.col, c.row});
  j["cells_entered"] = std::move(cells);
  j["dropped_hits"] = report.dropped_hits;
  j["effective_scenario"] = report.effective_scenario;
  std::ofstream rep(out_dir / "report.json", std::ios::binary);
  rep << j.dump(2) << "\n";

  return report;
}

}  // namespace traversim
