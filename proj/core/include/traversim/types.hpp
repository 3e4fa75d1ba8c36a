/*
 * types.hpp
 *
 * Small value types shared across the library.
 */

#ifndef TRAVERSIM_TYPES_HPP
#define TRAVERSIM_TYPES_HPP

#include <algorithm>
#include <cmath>

namespace traversim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Pose2 {
  Vec2 position{};
  double heading = 0.0;  // [rad], world frame
};

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace traversim

#endif  // TRAVERSIM_TYPES_HPP
