#include "traversim/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace traversim {

namespace {

MapGeometry geometry_for(const WorldSpec& world, double resolution) {
  MapGeometry g;
  g.origin = {0.0, 0.0};
  g.resolution = resolution;
  g.length_cells = static_cast<int>(std::lround(world.extent.x / resolution));
  g.width_cells = static_cast<int>(std::lround(world.extent.y / resolution));
  return g;
}

}  // namespace

Simulation::Simulation(const WorldSpec& world, const SimConfig& cfg)
    : world_(world),
      cfg_(cfg),
      geom_(geometry_for(world, cfg.resolution)),
      map_(geom_),
      probing_(cfg.probing),
      rng_(cfg.seed) {
  if (!world_.contains(world_.start_pose.position) ||
      !world_.contains(world_.goal)) {
    throw std::invalid_argument("Simulation: start or goal outside the world");
  }
  robot_.pose = world_.start_pose;
  robot_.status = RobotStatus::running;
  cells_entered_.push_back(world_to_index(robot_.pose.position, geom_));
}

bool Simulation::terminal() const {
  return robot_.status == RobotStatus::goal_reached ||
         robot_.status == RobotStatus::failed || no_path_;
}

StepTrace Simulation::step() {
  if (terminal()) throw std::logic_error("Simulation::step on a finished run");
  ++tick_;
  StepTrace trace;
  trace.tick = tick_;

  // Sense: depth rays into the elevation layer, semantics into the class and
  // score layers.
  const auto hits = raycast_depth(world_, robot_.pose, cfg_.depth, geom_.resolution);
  trace.depth_hits = hits.size();
  trace.dropped_hits = integrate_hits(hits, map_.layer(layer::elevation), geom_,
                                      cfg_.variance_model);
  dropped_hits_total_ += trace.dropped_hits;

  if (cfg_.semantic.rate_divisor <= 1 || tick_ % cfg_.semantic.rate_divisor == 0) {
    const auto obs =
        sense_semantics(world_, robot_.pose, geom_, cfg_.semantic, rng_);
    fuse_semantic(map_, obs, cfg_.fusion.sigma_sem2);
  }

  // Analyze the robot-centric window and register it globally.
  LayeredGridMap window =
      local_window(map_, robot_.pose.position, cfg_.local_span);
  analyze_geometry(window, cfg_.plane_fit_halfwidth);
  const GridIndex off = window_offset(geom_, window.geometry());
  for (int r = 0; r < window.geometry().width_cells; ++r) {
    for (int c = 0; c < window.geometry().length_cells; ++c) {
      // Mirror the freshly analyzed geometry into the global layers for
      // snapshots and diagnostics.
      const GridIndex wi{c, r};
      const GridIndex gi{c + off.col, r + off.row};
      const auto& slope = window.layer(layer::slope).at(wi);
      const auto& rough = window.layer(layer::roughness).at(wi);
      if (slope.known) map_.layer(layer::slope).at(gi) = slope;
      if (rough.known) map_.layer(layer::roughness).at(gi) = rough;
    }
  }
  const LocalTraversability local =
      compute_local_traversability(window, cfg_.fusion);
  register_global(local, map_, cfg_.fusion);

  // Probing decision and protocol.
  const auto probing_outcome = probing_.tick(
      tick_, robot_.pose.position, have_path_ ? &current_path_ : nullptr,
      world_, map_, cfg_.probe, cfg_.fusion, rng_);
  trace.new_clusters = probing_outcome.new_clusters;
  trace.inherited = probing_outcome.inherited;
  trace.pause_issued = probing_outcome.pause_issued;
  trace.resume_issued = probing_outcome.resume_issued;
  trace.pause_spot = probing_outcome.pause_spot;
  trace.probe_event = probing_outcome.event;
  if (probing_outcome.event) probe_events_.push_back(*probing_outcome.event);
  robot_.status =
      probing_outcome.paused ? RobotStatus::paused : RobotStatus::running;

  // Replan on schedule (every tick by default).
  const bool due = cfg_.planner.replan_every <= 1 ||
                   tick_ % cfg_.planner.replan_every == 0 || !have_path_;
  if (due) {
    const GridIndex start = world_to_index(robot_.pose.position, geom_);
    const GridIndex goal = world_to_index(world_.goal, geom_);
    PlanResult result = plan(map_.layer(layer::traversability), geom_, start,
                             goal, cfg_.planner, cfg_.fusion.t_unknown);
    trace.replanned = true;
    trace.plan_status = result.status;
    if (result.status == PlanStatus::found) {
      current_path_ = std::move(result.path);
      have_path_ = true;
      trace.path = &current_path_;
    } else {
      have_path_ = false;
      no_path_ = true;
      trace.pose = robot_.pose;
      trace.status = robot_.status;
      return trace;
    }
  }

  // Move (a paused robot stands still), then check ground and goal.
  const Vec2 before = robot_.pose.position;
  const auto follow_out =
      follow(current_path_, robot_.pose, kTickSeconds,
             robot_.status == RobotStatus::paused, cfg_.planner);
  robot_.pose = follow_out.pose;
  const Vec2 delta = robot_.pose.position - before;
  traveled_m_ += delta.norm();

  // Record every cell crossed this tick, not just the end cell: one tick of
  // motion can span more than one cell width.
  bool stepped_on_soft = false;
  const int samples = std::max(1, static_cast<int>(std::ceil(
                                      delta.norm() / (geom_.resolution / 4.0))));
  for (int s = 1; s <= samples; ++s) {
    const Vec2 p = before + delta * (static_cast<double>(s) / samples);
    const GridIndex cell = world_to_index(p, geom_);
    if (cell != cells_entered_.back()) {
      cells_entered_.push_back(cell);
      trace.entered_cells.push_back(cell);
      if (bearing_force(world_, index_to_world(cell, geom_)) < world_.fail_force) {
        stepped_on_soft = true;
      }
    }
  }

  if (robot_.status != RobotStatus::paused) {
    if (stepped_on_soft) {
      robot_.status = RobotStatus::failed;
    } else if ((robot_.pose.position - world_.goal).norm() <=
               cfg_.planner.goal_tolerance) {
      robot_.status = RobotStatus::goal_reached;
    }
  }

  trace.pose = robot_.pose;
  trace.status = robot_.status;
  return trace;
}

}  // namespace traversim
