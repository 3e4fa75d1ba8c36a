/*
 * simulation.hpp
 *
 * Fixed-rate simulation loop: sense, analyze, fuse, probe, plan, move. One
 * tick is 0.2 s (a 5 Hz pipeline). All randomness flows through one seeded
 * stream, so runs are deterministic.
 */

#ifndef TRAVERSIM_SIMULATION_HPP
#define TRAVERSIM_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "traversim/geometric.hpp"
#include "traversim/grid_map.hpp"
#include "traversim/planner.hpp"
#include "traversim/probing.hpp"
#include "traversim/semantic.hpp"
#include "traversim/traversability.hpp"
#include "traversim/world.hpp"

namespace traversim {

constexpr double kTickSeconds = 0.2;

struct SimConfig {
  double resolution = 0.05;  // [m] grid cell edge
  DepthSensorSpec depth{};
  SemanticSensorSpec semantic{};
  VarianceModel variance_model{};
  int plane_fit_halfwidth = 2;  // cells (5x5 neighborhood)
  double local_span = 8.0;      // [m] robot-centric window edge
  FusionConfig fusion{};
  ProbeConfig probe{};
  ProbePlannerConfig probing{};
  PlannerConfig planner{};
  std::uint64_t seed = 0;
};

/// What one tick did, for logging.
struct StepTrace {
  std::int64_t tick = 0;
  std::size_t depth_hits = 0;
  std::size_t dropped_hits = 0;
  std::vector<ProbingPlanner::ClusterNote> new_clusters;
  std::vector<ProbingPlanner::InheritNote> inherited;
  bool pause_issued = false;
  bool resume_issued = false;
  std::optional<ProbeSpot> pause_spot;
  std::optional<ProbeEvent> probe_event;
  bool replanned = false;
  PlanStatus plan_status = PlanStatus::found;
  const PlannedPath* path = nullptr;  // valid when replanned
  Pose2 pose{};
  RobotStatus status = RobotStatus::running;
  std::vector<GridIndex> entered_cells;  // cells crossed this tick, in order
};

class Simulation {
 public:
  Simulation(const WorldSpec& world, const SimConfig& cfg);

  /// One pipeline pass. Only valid while running or paused.
  StepTrace step();

  bool terminal() const;
  bool no_path() const { return no_path_; }

  const WorldSpec& world() const { return world_; }
  const SimConfig& config() const { return cfg_; }
  const LayeredGridMap& map() const { return map_; }
  const RobotState& robot() const { return robot_; }
  std::int64_t tick() const { return tick_; }
  double traveled_m() const { return traveled_m_; }
  std::size_t dropped_hits_total() const { return dropped_hits_total_; }
  const std::vector<GridIndex>& cells_entered() const { return cells_entered_; }
  const std::vector<ProbeEvent>& probe_events() const { return probe_events_; }

 private:
  WorldSpec world_;
  SimConfig cfg_;
  MapGeometry geom_;
  LayeredGridMap map_;
  RobotState robot_;
  ProbingPlanner probing_;
  std::mt19937_64 rng_;

  std::int64_t tick_ = 0;
  PlannedPath current_path_;
  bool have_path_ = false;
  bool no_path_ = false;
  double traveled_m_ = 0.0;
  std::size_t dropped_hits_total_ = 0;
  std::vector<GridIndex> cells_entered_;
  std::vector<ProbeEvent> probe_events_;
};

}  // namespace traversim

#endif  // TRAVERSIM_SIMULATION_HPP
