#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "traversim/simulation.hpp"

using namespace traversim;

namespace {

WorldSpec small_world() {
  WorldSpec w;
  w.extent = {4.0, 4.0};
  w.start_pose = {{0.5, 2.0}, 0.0};
  w.goal = {3.5, 2.0};
  return w;
}

SimConfig fast_config() {
  SimConfig cfg;
  cfg.resolution = 0.05;
  cfg.depth.rays_per_scan = 24;
  cfg.depth.vertical_rays = 8;
  cfg.local_span = 4.0;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("robot on hard ground walks to the goal") {
  Simulation sim(small_world(), fast_config());
  int ticks = 0;
  while (!sim.terminal() && ticks < 500) {
    sim.step();
    ++ticks;
  }
  CHECK(sim.robot().status == RobotStatus::goal_reached);
  // straight 3 m leg at 0.5 m/s and 0.2 s ticks is ~30 ticks
  CHECK(ticks < 80);
}

TEST_CASE("stepping onto soft ground fails the run") {
  WorldSpec w = small_world();
  // invisible soft band across the route: no semantics, so nothing warns
  w.bearing_regions.push_back({Rect{2.0, 0.0, 2.6, 4.0}, 40.0});
  Simulation sim(w, fast_config());
  while (!sim.terminal() && sim.tick() < 500) sim.step();
  CHECK(sim.robot().status == RobotStatus::failed);
  const Vec2 p = sim.robot().pose.position;
  CHECK(p.x >= 2.0);
  CHECK(p.x < 2.6);
}

TEST_CASE("immediate goal tolerance") {
  WorldSpec w = small_world();
  w.start_pose = {{3.45, 2.0}, 0.0};
  Simulation sim(w, fast_config());
  sim.step();
  CHECK(sim.robot().status == RobotStatus::goal_reached);
}

TEST_CASE("per-tick displacement is bounded by speed * dt") {
  Simulation sim(small_world(), fast_config());
  Vec2 prev = sim.robot().pose.position;
  while (!sim.terminal() && sim.tick() < 200) {
    sim.step();
    const Vec2 now = sim.robot().pose.position;
    CHECK((now - prev).norm() <=
          sim.config().planner.speed * kTickSeconds + 1e-12);
    prev = now;
  }
}

TEST_CASE("pause freezes the pose while probing") {
  WorldSpec w = small_world();
  w.semantic_regions.push_back({Rect{1.6, 1.0, 2.8, 3.0}, SemanticClass::plants});
  w.bearing_regions.push_back({Rect{1.6, 1.0, 2.8, 3.0}, 40.0});
  SimConfig cfg = fast_config();
  cfg.probing.pause_ticks_min = 3;

  Simulation sim(w, cfg);
  bool saw_pause = false;
  Vec2 pause_pos{};
  int pause_ticks = 0;
  while (!sim.terminal() && sim.tick() < 500) {
    const auto trace = sim.step();
    if (trace.pause_issued) {
      saw_pause = true;
      pause_pos = trace.pose.position;
    } else if (trace.status == RobotStatus::paused) {
      ++pause_ticks;
      CHECK((trace.pose.position - pause_pos).norm() < 1e-12);
    }
  }
  CHECK(saw_pause);
  CHECK(pause_ticks >= 2);
  REQUIRE(sim.probe_events().size() == 1);
  CHECK(sim.probe_events()[0].collapsibility == doctest::Approx(0.6).epsilon(1e-9));
  // soft plant region avoided, goal still reached
  CHECK(sim.robot().status == RobotStatus::goal_reached);
  for (const auto& cell : sim.cells_entered()) {
    const Vec2 p{(cell.col + 0.5) * 0.05, (cell.row + 0.5) * 0.05};
    CHECK(bearing_force(w, p) >= w.fail_force);
  }
}

TEST_CASE("same seed, same trajectory and events") {
  WorldSpec w = small_world();
  w.semantic_regions.push_back({Rect{1.6, 1.2, 2.6, 2.8}, SemanticClass::plants});
  w.bearing_regions.push_back({Rect{1.6, 1.2, 2.6, 2.8}, 40.0});
  SimConfig cfg = fast_config();
  cfg.semantic.misclass_prob = 0.05;
  cfg.probe.noise_std = 2.0;

  Simulation a(w, cfg), b(w, cfg);
  while (!a.terminal() && a.tick() < 500) {
    const auto ta = a.step();
    const auto tb = b.step();
    CHECK(ta.pose.position.x == tb.pose.position.x);
    CHECK(ta.pose.position.y == tb.pose.position.y);
    CHECK(ta.pose.heading == tb.pose.heading);
    CHECK(ta.status == tb.status);
    CHECK(ta.probe_event.has_value() == tb.probe_event.has_value());
    if (ta.probe_event) {
      CHECK(ta.probe_event->measurement.f_ext == tb.probe_event->measurement.f_ext);
      CHECK(ta.probe_event->collapsibility == tb.probe_event->collapsibility);
    }
  }
  CHECK(b.terminal());

  // a different seed perturbs the noisy measurements
  SimConfig other = cfg;
  other.seed = 43;
  Simulation c(w, other);
  while (!c.terminal() && c.tick() < 500) c.step();
  REQUIRE(!a.probe_events().empty());
  REQUIRE(!c.probe_events().empty());
  CHECK(a.probe_events()[0].measurement.f_ext !=
        c.probe_events()[0].measurement.f_ext);
}

TEST_CASE("sensing never mutates the world") {
  const WorldSpec w = small_world();
  Simulation sim(w, fast_config());
  for (int k = 0; k < 10 && !sim.terminal(); ++k) sim.step();
  CHECK(sim.world().default_bearing == w.default_bearing);
  CHECK(sim.world().semantic_regions.size() == w.semantic_regions.size());
  CHECK(ground_height(sim.world(), {1.0, 1.0}) == ground_height(w, {1.0, 1.0}));
}
