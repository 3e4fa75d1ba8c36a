/*
 * planner.hpp
 *
 * Dijkstra shortest-path planning over the global traversability layer with
 * a linear traversability-penalty cost, and a waypoint follower that honors
 * the probing pause flag.
 */

#ifndef TRAVERSIM_PLANNER_HPP
#define TRAVERSIM_PLANNER_HPP

#include <optional>
#include <vector>

#include "traversim/grid_map.hpp"

namespace traversim {

struct PlannerConfig {
  double t_block = 0.1;       // cells at or below this traversability are forbidden
  double lambda = 4.0;        // cost penalty weight
  double goal_tolerance = 0.1;  // [m]
  double speed = 0.5;         // [m/s]
  int replan_every = 1;       // ticks between replans
};

struct PlannedPath {
  std::vector<Vec2> waypoints;  // cell centers, start cell through goal cell
  double total_cost = 0.0;
};

enum class PlanStatus { found, no_path, blocked_start, blocked_goal };

struct PlanResult {
  PlanStatus status = PlanStatus::no_path;
  PlannedPath path;
};

/// Cost of stepping `step` meters into a cell with the given traversability
/// (unknown cells use the t_unknown prior): step * (1 + lambda * (1 - t)).
/// Returns nullopt when the cell is blocked (t <= t_block).
std::optional<double> cell_cost(std::optional<double> traversability,
                                double step, const PlannerConfig& cfg,
                                double t_unknown);

/// Minimum-cost 8-connected path over the traversability layer. Expansion
/// order breaks cost ties deterministically by (row, col).
PlanResult plan(const Layer& traversability, const MapGeometry& geom,
                GridIndex start, GridIndex goal, const PlannerConfig& cfg,
                double t_unknown);

struct FollowOutcome {
  Pose2 pose{};
  bool reached_path_end = false;
};

/// Advance along the path polyline at speed * dt, popping waypoints within
/// goal_tolerance. A paused robot does not move.
FollowOutcome follow(const PlannedPath& path, const Pose2& pose, double dt,
                     bool paused, const PlannerConfig& cfg);

}  // namespace traversim

#endif  // TRAVERSIM_PLANNER_HPP
