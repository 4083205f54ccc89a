#pragma once

#include <memory>
#include <string_view>

#include "barnav/geometry.hpp"
#include "barnav/sim.hpp"

namespace barnav {

/// Produces a velocity command from the live scan and a path point given in
/// the robot frame. Implementations must be pure and respect v_max.
class DrivePolicy {
 public:
  virtual ~DrivePolicy() = default;
  virtual Twist2D command(const LaserScan& scan, Vec2 lookahead_rel, double v_max) const = 0;
  virtual std::unique_ptr<DrivePolicy> clone() const = 0;
  virtual std::string_view name() const = 0;
};

struct PurePursuitParams {
  double slow_distance = 1.0;          // full speed beyond this frontal clearance
  double cone_half_angle = kPi / 4.0;  // front 90 deg cone
  double w_max = 1.5;
};

/// Smallest range among beams within +/- half_angle of the heading.
double front_cone_min_range(const LaserScan& scan, double half_angle);

/// Geometric stand-in for a learned local controller: curvature toward the
/// lookahead point, speed scaled down by frontal clearance.
class PurePursuitPolicy final : public DrivePolicy {
 public:
  explicit PurePursuitPolicy(PurePursuitParams params = {}) : params_(params) {}

  /// Throws DegenerateLookahead when the lookahead point is at the origin.
  Twist2D command(const LaserScan& scan, Vec2 lookahead_rel, double v_max) const override;
  std::unique_ptr<DrivePolicy> clone() const override { return std::make_unique<PurePursuitPolicy>(*this); }
  std::string_view name() const override { return "pursuit"; }

  const PurePursuitParams& params() const { return params_; }

 private:
  PurePursuitParams params_;
};

/// Accepts "pursuit".
std::unique_ptr<DrivePolicy> make_policy(std::string_view name, const PurePursuitParams& params = {});

}  // namespace barnav
