#pragma once

#include <cmath>
#include <numbers>

namespace barnav {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose2D&, const Pose2D&) = default;

  /// Expresses a world point in this pose's frame.
  Vec2 to_local(Vec2 world) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const Vec2 d = world - position();
    return {c * d.x + s * d.y, -s * d.x + c * d.y};
  }

  Vec2 to_world(Vec2 local) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
  }
};

struct Twist2D {
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s
  friend bool operator==(const Twist2D&, const Twist2D&) = default;
};

/// Rectangle with its long axis along `heading`; containment is inclusive.
struct OrientedRect {
  Vec2 center;
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  bool contains(Vec2 p) const {
    const double c = std::cos(heading), s = std::sin(heading);
    const Vec2 d = p - center;
    const double along = c * d.x + s * d.y;
    const double across = -s * d.x + c * d.y;
    return std::abs(along) <= half_length && std::abs(across) <= half_width;
  }

  /// Radius of the circle through the corners.
  double circumradius() const { return std::hypot(half_length, half_width); }
};

/// Rectangular robot body. `center_offset` is the distance of the geometric
/// center ahead of the pose origin.
struct RobotFootprint {
  double width = 0.43;
  double length = 0.508;
  double center_offset = 0.0;

  OrientedRect at(const Pose2D& pose, double inflation = 0.0) const {
    return {pose.to_world({center_offset, 0.0}), pose.theta, length / 2.0 + inflation,
            width / 2.0 + inflation};
  }

  double half_diagonal() const { return std::hypot(width, length) / 2.0; }
};

}  // namespace barnav
