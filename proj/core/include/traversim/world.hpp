/*
 * world.hpp
 *
 * Ground-truth scenario world: a 2.5D heightfield built from primitives,
 * semantic regions, a bearing-force field, and the simulated depth sensor.
 */

#ifndef TRAVERSIM_WORLD_HPP
#define TRAVERSIM_WORLD_HPP

#include <vector>

#include "traversim/geometric.hpp"
#include "traversim/grid_map.hpp"
#include "traversim/types.hpp"

namespace traversim {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(const Vec2& p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
  bool valid() const { return x1 > x0 && y1 > y0; }
};

/// Heightfield primitives override the base plane inside their rectangle;
/// later primitives override earlier ones.
struct HeightPrimitive {
  enum class Kind { box, ramp };
  Kind kind = Kind::box;
  Rect rect{};
  double z0 = 0.0;   // box: top height; ramp: height at the low edge
  double z1 = 0.0;   // ramp: height at the high edge
  char axis = 'x';   // ramp rise axis
};

struct SemanticRegion {
  Rect rect{};
  SemanticClass cls = SemanticClass::plants;
};

struct BearingRegion {
  Rect rect{};
  double force_n = 0.0;
};

struct WorldSpec {
  Vec2 extent{10.0, 10.0};  // world spans [0, extent) in both axes
  double plane_z = 0.0;
  std::vector<HeightPrimitive> height_primitives;
  std::vector<SemanticRegion> semantic_regions;
  std::vector<BearingRegion> bearing_regions;
  double default_bearing = 500.0;  // [N]
  Pose2 start_pose{};
  Vec2 goal{};
  double fail_force = 100.0;  // [N] ground below this cannot carry the robot

  bool contains(const Vec2& p) const {
    return p.x >= 0.0 && p.x < extent.x && p.y >= 0.0 && p.y < extent.y;
  }
};

enum class RobotStatus { running, paused, goal_reached, failed };

struct RobotState {
  Pose2 pose{};
  RobotStatus status = RobotStatus::running;
};

struct DepthSensorSpec {
  double horizontal_fov = 1.518;  // [rad]
  int rays_per_scan = 48;         // horizontal rays per row
  double max_range = 4.0;         // [m]
  double mounted_height = 0.5;    // [m] above the ground at the robot
  // The scan is a 2D fan: rows are pitched downward around pitch_center so a
  // single scan samples the ground from near to far.
  double pitch_center = 0.55;  // [rad] downward
  double vertical_fov = 1.0;   // [rad]
  int vertical_rays = 16;
};

/// Ground height at a world point (defined everywhere; primitives apply
/// inside their rectangles, later ones winning).
double ground_height(const WorldSpec& world, const Vec2& p);

/// Maximum force the ground supports at p: the innermost (last declared)
/// bearing region containing p, else the default. Throws std::out_of_range
/// outside the world extent.
double bearing_force(const WorldSpec& world, const Vec2& p);

/// Ground-truth semantic class at p (last declared region wins).
SemanticClass semantic_class_at(const WorldSpec& world, const Vec2& p);

/// March a fan of rays from the sensor against the heightfield and report
/// first intersections within max_range; misses are omitted. The march step
/// is half a map resolution, with a secant refinement at the crossing.
std::vector<DepthHit> raycast_depth(const WorldSpec& world, const Pose2& pose,
                                    const DepthSensorSpec& spec,
                                    double map_resolution);

}  // namespace traversim

#endif  // TRAVERSIM_WORLD_HPP
