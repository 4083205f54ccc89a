#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "barnav/costmap.hpp"
#include "barnav/fsm.hpp"
#include "barnav/sim.hpp"
#include "barnav/worldgen.hpp"

namespace barnav {

enum class Outcome { Success, Collision, Timeout };

const char* to_string(Outcome o);
Outcome parse_outcome(std::string_view s);

/// One row per controller tick.
struct TraceRow {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v_cmd = 0.0;
  double w_cmd = 0.0;
  FsmState fsm_state = FsmState::Initial;  // state after the tick
  bool safe = true;
  int first_unsafe_step = -1;
  double min_scan_range = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct EpisodeOptions {
  bool record_trace = true;
  bool fsm_log = false;        // collect a line per state change
  bool keep_costmap = false;   // return the final costmap for debug dumps
  CostmapConfig costmap;
};

struct EpisodeResult {
  Outcome outcome = Outcome::Timeout;
  double actual_time = 0.0;
  std::vector<TraceRow> trace;
  std::array<double, 5> state_time{};  // seconds per FsmState, indexed by enum value
  bool loop_detected = false;
  std::vector<std::string> fsm_log;
  std::optional<Costmap> costmap;

  std::vector<FsmState> timeline() const;
};

/// Sense, plan, control and integrate at cfg.dt until the robot reaches the
/// goal, collides, or runs out of time. The controller runs every
/// cfg.control_every physics steps.
EpisodeResult run_episode(const WorldSpec& world, FsmController& controller, const SimConfig& cfg,
                          const EpisodeOptions& options = {});

/// CSV with header t,x,y,theta,v_cmd,w_cmd,fsm_state,safety_flag,first_unsafe_step,min_scan_range.
std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::vector<TraceRow> trace_from_csv(const std::string& csv);

}  // namespace barnav
