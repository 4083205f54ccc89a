#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "barnav/costmap.hpp"
#include "barnav/geometry.hpp"
#include "barnav/planner.hpp"
#include "barnav/policy.hpp"
#include "barnav/safety.hpp"
#include "barnav/sim.hpp"

namespace barnav {

/// Controller states. Drive is the main driving mode that runs the drive policy.
enum class FsmState { Initial, Heading, Drive, Backtrack, Forward };

inline constexpr std::array<FsmState, 5> kAllStates = {FsmState::Initial, FsmState::Heading, FsmState::Drive,
                                                       FsmState::Backtrack, FsmState::Forward};

const char* to_string(FsmState s);
FsmState parse_fsm_state(std::string_view s);

struct Transition {
  FsmState from;
  FsmState to;
  std::string_view trigger;
};

// The complete edge set; any state change outside it is a controller bug.
inline constexpr std::array<Transition, 13> kTransitions = {{
    {FsmState::Initial, FsmState::Initial, "no path"},
    {FsmState::Initial, FsmState::Heading, "path"},
    {FsmState::Heading, FsmState::Initial, "no path"},
    {FsmState::Heading, FsmState::Drive, "aligned"},
    {FsmState::Drive, FsmState::Drive, "safe"},
    {FsmState::Drive, FsmState::Heading, "not aligned"},
    {FsmState::Drive, FsmState::Backtrack, "dangerous"},
    {FsmState::Backtrack, FsmState::Backtrack, "safe"},
    {FsmState::Backtrack, FsmState::Forward, "stuck"},
    {FsmState::Backtrack, FsmState::Heading, "recovered"},
    {FsmState::Forward, FsmState::Forward, "safe"},
    {FsmState::Forward, FsmState::Heading, "recovered"},
    {FsmState::Forward, FsmState::Backtrack, "stuck"},
}};

/// Edge label for a state change, or nullopt if the edge does not exist.
std::optional<std::string_view> transition_trigger(FsmState from, FsmState to);

struct TimelineViolation {
  std::size_t index = 0;  // position of the offending state in the timeline
  FsmState from = FsmState::Initial;
  FsmState to = FsmState::Initial;
};

/// Checks every consecutive state change against kTransitions. Staying in a
/// state between ticks is not a state change and is always accepted.
std::optional<TimelineViolation> validate_timeline(std::span<const FsmState> timeline);

struct ControllerConfig {
  double heading_tolerance = deg_to_rad(30.0);  // "not aligned" at or beyond
  double heading_hysteresis = deg_to_rad(5.0);  // "aligned" at tolerance - hysteresis
  double lookahead = 0.5;
  double backtrack_distance = 0.3;
  double slow_forward_speed = 0.2;
  double slow_reverse_speed = 0.15;
  double v_max = 0.7;
  double w_max = 1.5;
  double k_theta = 2.0;
  double arrival_tolerance = 0.05;
  double recover_distance = 0.3;
  double reverse_align_tolerance = 0.05;  // rad, rear axis vs backtrack target
  double trail_spacing = 0.05;
  double plan_radius = RobotFootprint{}.half_diagonal();
  double start_snap_radius = 0.3;
  ClearanceCost clearance;
  bool loop_guard = true;
  int loop_guard_count = 5;
  double loop_guard_radius = 3.0;
  RobotFootprint footprint;
  RearRoi roi = RearRoi::behind(RobotFootprint{});
  SafetyConfig safety;
  PurePursuitParams pursuit;

  void validate() const;
};

/// Rotate-in-place toward the target: v = 0, w = clamp(k_theta * error).
Twist2D heading_command(double error, const ControllerConfig& cfg);

/// Forward-motion history used to pick backtrack targets.
class BreadcrumbTrail {
 public:
  explicit BreadcrumbTrail(double min_spacing = 0.05) : min_spacing_(min_spacing) {}

  /// Appends `pose` unless it is closer than min_spacing to the last entry.
  void record(const Pose2D& pose);
  void clear() { poses_.clear(); }
  /// Keeps entries [0, n).
  void truncate(std::size_t n);

  /// Index of the entry whose distance back along the trail from `pose` is
  /// nearest to `distance`; nullopt for an empty trail.
  std::optional<std::size_t> target_behind(const Pose2D& pose, double distance) const;

  const std::vector<Pose2D>& poses() const { return poses_; }
  double min_spacing() const { return min_spacing_; }

 private:
  double min_spacing_;
  std::vector<Pose2D> poses_;
};

struct TickInput {
  Pose2D pose;
  const LaserScan& scan;
  const GlobalPath* path;  // nullptr when the planner has no path
  const Costmap& costmap;
};

struct TickOutput {
  Twist2D cmd;
  FsmState from = FsmState::Initial;
  FsmState state = FsmState::Initial;  // after this tick's transition
  std::string_view trigger;            // edge taken (self-loops included)
  SafetyVerdict verdict;
};

class FsmController {
 public:
  FsmController(ControllerConfig cfg, std::unique_ptr<DrivePolicy> policy);
  FsmController(const FsmController& other);
  FsmController& operator=(const FsmController&) = delete;
  FsmController(FsmController&&) noexcept = default;

  void reset();
  TickOutput tick(const TickInput& in);

  FsmState state() const { return state_; }
  /// Whether the caller should replan before the next tick.
  bool wants_path() const { return state_ != FsmState::Backtrack; }
  bool loop_detected() const { return loop_detected_; }
  const BreadcrumbTrail& trail() const { return trail_; }
  std::optional<Vec2> backtrack_target() const { return backtrack_target_; }
  const ControllerConfig& config() const { return cfg_; }
  const DrivePolicy& policy() const { return *policy_; }

 private:
  enum class ReversePhase { Align, Reverse };

  void enter_backtrack(const Pose2D& pose);
  void enter_forward(const Pose2D& pose);
  TickOutput tick_heading(const TickInput& in);
  TickOutput tick_drive(const TickInput& in);
  TickOutput tick_backtrack(const TickInput& in);
  TickOutput tick_forward(const TickInput& in);
  double lookahead_error(const Pose2D& pose, const GlobalPath& path) const;

  ControllerConfig cfg_;
  std::unique_ptr<DrivePolicy> policy_;
  FsmState state_ = FsmState::Initial;
  BreadcrumbTrail trail_;
  std::optional<GlobalPath> last_path_;
  std::optional<Vec2> backtrack_target_;
  ReversePhase reverse_phase_ = ReversePhase::Align;
  Vec2 forward_entry_;
  std::vector<Vec2> backtrack_entries_;
  bool loop_detected_ = false;
};

}  // namespace barnav
