#include "traversim/world.hpp"

#include <cmath>
#include <stdexcept>

namespace traversim {

double ground_height(const WorldSpec& world, const Vec2& p) {
  double z = world.plane_z;
  for (const auto& prim : world.height_primitives) {
    if (!prim.rect.contains(p)) continue;
    switch (prim.kind) {
      case HeightPrimitive::Kind::box:
        z = prim.z0;
        break;
      case HeightPrimitive::Kind::ramp: {
        const Rect& r = prim.rect;
        const double s = (prim.axis == 'y')
                             ? (p.y - r.y0) / (r.y1 - r.y0)
                             : (p.x - r.x0) / (r.x1 - r.x0);
        z = prim.z0 + (prim.z1 - prim.z0) * s;
        break;
      }
    }
  }
  return z;
}

double bearing_force(const WorldSpec& world, const Vec2& p) {
  if (!world.contains(p)) {
    throw std::out_of_range("bearing_force: point outside world extent");
  }
  for (auto it = world.bearing_regions.rbegin();
       it != world.bearing_regions.rend(); ++it) {
    if (it->rect.contains(p)) return it->force_n;
  }
  return world.default_bearing;
}

SemanticClass semantic_class_at(const WorldSpec& world, const Vec2& p) {
  for (auto it = world.semantic_regions.rbegin();
       it != world.semantic_regions.rend(); ++it) {
    if (it->rect.contains(p)) return it->cls;
  }
  return SemanticClass::none;
}

std::vector<DepthHit> raycast_depth(const WorldSpec& world, const Pose2& pose,
                                    const DepthSensorSpec& spec,
                                    double map_resolution) {
  std::vector<DepthHit> hits;
  hits.reserve(static_cast<std::size_t>(spec.rays_per_scan) *
               spec.vertical_rays);

  const double z0 = ground_height(world, pose.position) + spec.mounted_height;
  const double step = map_resolution / 2.0;

  for (int j = 0; j < spec.vertical_rays; ++j) {
    const double pitch =
        spec.vertical_rays > 1
            ? spec.pitch_center - spec.vertical_fov / 2.0 +
                  spec.vertical_fov * j / (spec.vertical_rays - 1)
            : spec.pitch_center;
    for (int k = 0; k < spec.rays_per_scan; ++k) {
      const double yaw =
          spec.rays_per_scan > 1
              ? pose.heading - spec.horizontal_fov / 2.0 +
                    spec.horizontal_fov * k / (spec.rays_per_scan - 1)
              : pose.heading;

      const Vec3 dir{std::cos(pitch) * std::cos(yaw),
                     std::cos(pitch) * std::sin(yaw), -std::sin(pitch)};

      double t_prev = 0.0;
      double f_prev = spec.mounted_height;  // sensor clearance at t = 0
      bool hit_found = false;
      for (double t = step; t <= spec.max_range + 1e-12; t += step) {
        const Vec2 p{pose.position.x + dir.x * t, pose.position.y + dir.y * t};
        if (!world.contains(p)) break;  // ray leaves the world: miss
        const double f = (z0 + dir.z * t) - ground_height(world, p);
        if (f <= 0.0) {
          // Secant refinement between the last clear and first buried sample.
          double t_hit = t;
          if (f_prev > f) t_hit = t_prev + (t - t_prev) * f_prev / (f_prev - f);
          const Vec3 wp{pose.position.x + dir.x * t_hit,
                        pose.position.y + dir.y * t_hit, z0 + dir.z * t_hit};
          hits.push_back({wp, t_hit});
          hit_found = true;
          break;
        }
        t_prev = t;
        f_prev = f;
      }
      (void)hit_found;
    }
  }
  return hits;
}

}  // namespace traversim
