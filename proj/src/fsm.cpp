#include "barnav/fsm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "barnav/error.hpp"

namespace barnav {

const char* to_string(FsmState s) {
  switch (s) {
    case FsmState::Initial: return "Initial";
    case FsmState::Heading: return "Heading";
    case FsmState::Drive: return "Drive";
    case FsmState::Backtrack: return "Backtrack";
    case FsmState::Forward: return "Forward";
  }
  return "?";
}

FsmState parse_fsm_state(std::string_view s) {
  for (const FsmState st : kAllStates)
    if (s == to_string(st)) return st;
  throw NavError(ErrorKind::Parse, "unknown FSM state '" + std::string(s) + "'");
}

std::optional<std::string_view> transition_trigger(FsmState from, FsmState to) {
  for (const Transition& t : kTransitions)
    if (t.from == from && t.to == to) return t.trigger;
  return std::nullopt;
}

std::optional<TimelineViolation> validate_timeline(std::span<const FsmState> timeline) {
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    const FsmState a = timeline[i - 1], b = timeline[i];
    if (a != b && !transition_trigger(a, b)) return TimelineViolation{i, a, b};
  }
  return std::nullopt;
}

void ControllerConfig::validate() const {
  const bool positive = heading_tolerance > 0 && lookahead > 0 && backtrack_distance > 0 &&
                        slow_forward_speed > 0 && slow_reverse_speed > 0 && v_max > 0 && w_max > 0 &&
                        k_theta > 0 && arrival_tolerance > 0 && recover_distance > 0 && trail_spacing > 0;
  if (!positive) throw NavError(ErrorKind::InvalidArgument, "controller parameters must be positive");
  if (!(heading_tolerance < kPi / 2.0))
    throw NavError(ErrorKind::InvalidArgument, "heading_tolerance must be below pi/2");
  if (!(heading_hysteresis >= 0.0 && heading_hysteresis < heading_tolerance))
    throw NavError(ErrorKind::InvalidArgument, "heading_hysteresis must be in [0, heading_tolerance)");
  if (slow_forward_speed > v_max) throw NavError(ErrorKind::InvalidArgument, "slow_forward_speed exceeds v_max");
}

Twist2D heading_command(double error, const ControllerConfig& cfg) {
  return {0.0, std::clamp(cfg.k_theta * error, -cfg.w_max, cfg.w_max)};
}

void BreadcrumbTrail::record(const Pose2D& pose) {
  if (poses_.empty() || distance(poses_.back().position(), pose.position()) >= min_spacing_)
    poses_.push_back(pose);
}

void BreadcrumbTrail::truncate(std::size_t n) {
  if (n < poses_.size()) poses_.resize(n);
}

std::optional<std::size_t> BreadcrumbTrail::target_behind(const Pose2D& pose, double dist) const {
  if (poses_.empty()) return std::nullopt;
  std::size_t best = poses_.size() - 1;
  double back = distance(pose.position(), poses_.back().position());
  double best_gap = std::abs(back - dist);
  for (std::size_t i = poses_.size() - 1; i-- > 0;) {
    back += distance(poses_[i + 1].position(), poses_[i].position());
    const double gap = std::abs(back - dist);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
    if (back > dist) break;
  }
  return best;
}

FsmController::FsmController(ControllerConfig cfg, std::unique_ptr<DrivePolicy> policy)
    : cfg_(std::move(cfg)), policy_(std::move(policy)), trail_(cfg_.trail_spacing) {
  cfg_.validate();
  if (!policy_) throw NavError(ErrorKind::InvalidArgument, "controller needs a drive policy");
}

FsmController::FsmController(const FsmController& other)
    : cfg_(other.cfg_),
      policy_(other.policy_->clone()),
      state_(other.state_),
      trail_(other.trail_),
      last_path_(other.last_path_),
      backtrack_target_(other.backtrack_target_),
      reverse_phase_(other.reverse_phase_),
      forward_entry_(other.forward_entry_),
      backtrack_entries_(other.backtrack_entries_),
      loop_detected_(other.loop_detected_) {}

void FsmController::reset() {
  state_ = FsmState::Initial;
  trail_ = BreadcrumbTrail(cfg_.trail_spacing);
  last_path_.reset();
  backtrack_target_.reset();
  reverse_phase_ = ReversePhase::Align;
  backtrack_entries_.clear();
  loop_detected_ = false;
}

double FsmController::lookahead_error(const Pose2D& pose, const GlobalPath& path) const {
  const Vec2 target = sample_lookahead(path, pose, cfg_.lookahead);
  if (distance(target, pose.position()) < 1e-6) return 0.0;
  return heading_error(pose, target);
}

void FsmController::enter_backtrack(const Pose2D& pose) {
  state_ = FsmState::Backtrack;
  reverse_phase_ = ReversePhase::Align;
  if (const auto idx = trail_.target_behind(pose, cfg_.backtrack_distance)) {
    backtrack_target_ = trail_.poses()[*idx].position();
    trail_.truncate(*idx + 1);
  } else {
    backtrack_target_ = pose.to_world({-cfg_.backtrack_distance, 0.0});
  }

  if (cfg_.loop_guard) {
    backtrack_entries_.push_back(pose.position());
    const auto nearby = std::count_if(backtrack_entries_.begin(), backtrack_entries_.end(), [&](Vec2 p) {
      return distance(p, pose.position()) <= cfg_.loop_guard_radius;
    });
    if (nearby > cfg_.loop_guard_count) loop_detected_ = true;
  }
}

void FsmController::enter_forward(const Pose2D& pose) {
  state_ = FsmState::Forward;
  forward_entry_ = pose.position();
}

TickOutput FsmController::tick(const TickInput& in) {
  if (in.path) last_path_ = *in.path;
  TickOutput out;
  out.from = state_;
  switch (state_) {
    case FsmState::Initial:
      if (in.path) {
        state_ = FsmState::Heading;
        out.trigger = "path";
      } else {
        out.trigger = "no path";
      }
      break;
    case FsmState::Heading: out = tick_heading(in); break;
    case FsmState::Drive: out = tick_drive(in); break;
    case FsmState::Backtrack: out = tick_backtrack(in); break;
    case FsmState::Forward: out = tick_forward(in); break;
  }
  out.state = state_;
  return out;
}

TickOutput FsmController::tick_heading(const TickInput& in) {
  TickOutput out;
  out.from = FsmState::Heading;
  if (!in.path) {
    state_ = FsmState::Initial;
    out.trigger = "no path";
    return out;
  }
  const double err = lookahead_error(in.pose, *in.path);
  out.cmd = heading_command(err, cfg_);
  if (std::abs(err) <= cfg_.heading_tolerance - cfg_.heading_hysteresis) {
    state_ = FsmState::Drive;
    out.trigger = "aligned";
  }
  return out;
}

TickOutput FsmController::tick_drive(const TickInput& in) {
  TickOutput out;
  out.from = FsmState::Drive;
  const GlobalPath& path = *last_path_;  // Drive is only reachable with a path
  const Vec2 target = sample_lookahead(path, in.pose, cfg_.lookahead);
  const Vec2 rel = in.pose.to_local(target);
  Twist2D cmd;
  double err = 0.0;
  if (rel.norm() >= 1e-6) {
    cmd = clamp_command(policy_->command(in.scan, rel, cfg_.v_max), cfg_.v_max, cfg_.w_max);
    err = heading_error(in.pose, target);
  }

  out.verdict = forward_safe(in.scan, cmd, cfg_.safety);
  if (!out.verdict.safe) {
    enter_backtrack(in.pose);
    out.trigger = "dangerous";
    return out;  // zero twist: the unsafe command is never executed
  }
  out.cmd = cmd;
  if (std::abs(err) >= cfg_.heading_tolerance) {
    state_ = FsmState::Heading;
    out.trigger = "not aligned";
    return out;
  }
  if (cmd.v > 0.0) trail_.record(in.pose);
  out.trigger = "safe";
  return out;
}

TickOutput FsmController::tick_backtrack(const TickInput& in) {
  TickOutput out;
  out.from = FsmState::Backtrack;
  bool rear_clear = false;
  try {
    rear_clear = in.costmap.roi_clear(in.pose, cfg_.roi);
  } catch (const NavError&) {
    rear_clear = false;  // outside the remembered window: nothing vouches for the rear
  }
  if (!rear_clear) {
    out.verdict = SafetyVerdict::unsafe(0, in.pose.to_local(cfg_.roi.at(in.pose).center));
    enter_forward(in.pose);
    out.trigger = "stuck";
    return out;
  }

  const Vec2 target = *backtrack_target_;
  const Vec2 rel = in.pose.to_local(target);
  // Reversing past the target also counts as arrival.
  const bool passed = reverse_phase_ == ReversePhase::Reverse && rel.x >= 0.0;
  if (distance(in.pose.position(), target) <= cfg_.arrival_tolerance || passed) {
    state_ = FsmState::Heading;
    backtrack_target_.reset();
    out.trigger = "recovered";
    return out;
  }

  if (reverse_phase_ == ReversePhase::Align) {
    // Point the rear axis at the target.
    const double err = normalize_angle(std::atan2(-rel.y, -rel.x));
    if (std::abs(err) > cfg_.reverse_align_tolerance) {
      out.cmd = heading_command(err, cfg_);
      out.trigger = "safe";
      return out;
    }
    reverse_phase_ = ReversePhase::Reverse;
  }
  out.cmd = {-cfg_.slow_reverse_speed, 0.0};
  out.trigger = "safe";
  return out;
}

TickOutput FsmController::tick_forward(const TickInput& in) {
  TickOutput out;
  out.from = FsmState::Forward;
  const Twist2D cmd{cfg_.slow_forward_speed, 0.0};
  out.verdict = forward_safe(in.scan, cmd, cfg_.safety);
  if (!out.verdict.safe) {
    enter_backtrack(in.pose);
    out.trigger = "stuck";
    return out;
  }
  out.cmd = cmd;
  if (distance(in.pose.position(), forward_entry_) >= cfg_.recover_distance && in.path) {
    state_ = FsmState::Heading;
    out.trigger = "recovered";
    return out;
  }
  trail_.record(in.pose);
  out.trigger = "safe";
  return out;
}

}  // namespace barnav
