#include "barnav/episode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "barnav/error.hpp"
#include "barnav/planner.hpp"
#include "barnav/rng.hpp"

namespace barnav {

namespace {

constexpr const char* kTraceHeader =
    "t,x,y,theta,v_cmd,w_cmd,fsm_state,safety_flag,first_unsafe_step,min_scan_range";

// %.17g round-trips doubles exactly, so traces reload bit-identically.
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw NavError(ErrorKind::Parse, "bad number '" + std::string(s) + "' in trace");
  return v;
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "Success";
    case Outcome::Collision: return "Collision";
    case Outcome::Timeout: return "Timeout";
  }
  return "?";
}

Outcome parse_outcome(std::string_view s) {
  for (const Outcome o : {Outcome::Success, Outcome::Collision, Outcome::Timeout})
    if (s == to_string(o)) return o;
  throw NavError(ErrorKind::Parse, "unknown outcome '" + std::string(s) + "'");
}

std::vector<FsmState> EpisodeResult::timeline() const {
  std::vector<FsmState> states;
  states.reserve(trace.size() + 1);
  states.push_back(FsmState::Initial);
  for (const TraceRow& r : trace) states.push_back(r.fsm_state);
  return states;
}

EpisodeResult run_episode(const WorldSpec& world, FsmController& controller, const SimConfig& cfg,
                          const EpisodeOptions& options) {
  cfg.validate();
  controller.reset();
  const ControllerConfig& ccfg = controller.config();
  const OccupancyGrid dilated = dilate(world.grid, ccfg.plan_radius);
  const std::vector<double> penalty = clearance_penalty(world.grid, ccfg.clearance);

  Pose2D pose = world.start;
  if (cfg.start_heading_jitter > 0.0) {
    std::mt19937_64 rng(derive_seed(cfg.seed, "start-jitter"));
    pose.theta = normalize_angle(pose.theta + (2.0 * unit_uniform(rng) - 1.0) * cfg.start_heading_jitter);
  }

  EpisodeResult result;
  Costmap costmap(options.costmap, pose);
  Twist2D target_cmd, actual_cmd;
  FsmState state = controller.state();

  for (long n = 0;; ++n) {
    const double t = static_cast<double>(n) * cfg.dt;
    if (check_collision(world.grid, pose, cfg.footprint)) {
      result.outcome = Outcome::Collision;
      result.actual_time = t;
      break;
    }
    if (distance(pose.position(), world.goal) <= cfg.goal_tolerance) {
      result.outcome = Outcome::Success;
      result.actual_time = t;
      break;
    }
    if (t >= cfg.timeout) {
      result.outcome = Outcome::Timeout;
      result.actual_time = cfg.timeout;
      break;
    }

    if (n % cfg.control_every == 0) {
      const LaserScan sweep = scan(world.grid, pose, cfg.lidar);
      costmap.integrate_scan(sweep);
      PlanResult plan;
      if (controller.wants_path())
        plan = plan_on_dilated(dilated, pose.position(), world.goal, ccfg.start_snap_radius,
                               ccfg.clearance.enabled() ? &penalty : nullptr);
      const TickOutput out = controller.tick({pose, sweep, plan.ok() ? &plan.path : nullptr, costmap});
      target_cmd = clamp_command(out.cmd, cfg.v_max, cfg.w_max);
      state = out.state;

      if (options.fsm_log && out.from != out.state) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "t=%.2f %s -> %s (%.*s) at (%.3f, %.3f, %.3f)", t, to_string(out.from),
                      to_string(out.state), static_cast<int>(out.trigger.size()), out.trigger.data(), pose.x,
                      pose.y, pose.theta);
        result.fsm_log.emplace_back(buf);
      }
      if (options.record_trace) {
        result.trace.push_back({t, pose.x, pose.y, pose.theta, target_cmd.v, target_cmd.w, out.state,
                                out.verdict.safe, out.verdict.first_unsafe_step.value_or(-1),
                                *std::min_element(sweep.ranges.begin(), sweep.ranges.end())});
      }
    }

    actual_cmd = cfg.accel_limits ? apply_accel_limits(actual_cmd, target_cmd, *cfg.accel_limits, cfg.dt)
                                  : target_cmd;
    result.state_time[static_cast<std::size_t>(state)] += cfg.dt;
    pose = step(pose, actual_cmd, cfg.dt);
  }

  result.loop_detected = controller.loop_detected();
  if (options.keep_costmap) result.costmap = std::move(costmap);
  return result;
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const TraceRow& r : rows) {
    out += fmt_double(r.t) + ',' + fmt_double(r.x) + ',' + fmt_double(r.y) + ',' + fmt_double(r.theta) + ',' +
           fmt_double(r.v_cmd) + ',' + fmt_double(r.w_cmd) + ',' + to_string(r.fsm_state) + ',' +
           (r.safe ? "1" : "0") + ',' + std::to_string(r.first_unsafe_step) + ',' +
           fmt_double(r.min_scan_range) + '\n';
  }
  return out;
}

std::vector<TraceRow> trace_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw NavError(ErrorKind::Parse, "bad trace header");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      f.push_back(rest.substr(0, pos));
    f.push_back(rest);
    if (f.size() != 10) throw NavError(ErrorKind::Parse, "trace row must have 10 fields");
    TraceRow r;
    r.t = parse_double(f[0]);
    r.x = parse_double(f[1]);
    r.y = parse_double(f[2]);
    r.theta = parse_double(f[3]);
    r.v_cmd = parse_double(f[4]);
    r.w_cmd = parse_double(f[5]);
    r.fsm_state = parse_fsm_state(f[6]);
    if (f[7] != "0" && f[7] != "1") throw NavError(ErrorKind::Parse, "safety_flag must be 0 or 1");
    r.safe = f[7] == "1";
    r.first_unsafe_step = static_cast<int>(parse_double(f[8]));
    r.min_scan_range = parse_double(f[9]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace barnav
