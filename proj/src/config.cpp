#include "barnav/config.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "barnav/error.hpp"
#include "barnav/world_io.hpp"

namespace barnav {

using nlohmann::json;

namespace {

using Slot = std::variant<double*, int*, bool*, std::uint64_t*, std::string*, SafetyMode*>;

struct Field {
  const char* key;
  Slot slot;
};

json slot_value(const Slot& slot) {
  return std::visit(
      [](auto* p) -> json {
        if constexpr (std::is_same_v<std::remove_pointer_t<decltype(p)>, SafetyMode>)
          return to_string(*p);
        else
          return *p;
      },
      slot);
}

void assign(const Slot& slot, const json& v, const std::string& where) {
  try {
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, SafetyMode>) {
            *p = parse_safety_mode(v.get<std::string>());
          } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw NavError(ErrorKind::Parse, where + " must be a number");
            *p = v.get<double>();
          } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw NavError(ErrorKind::Parse, where + " must be a boolean");
            *p = v.get<bool>();
          } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw NavError(ErrorKind::Parse, where + " must be a string");
            *p = v.get<std::string>();
          } else {
            if (!v.is_number_integer()) throw NavError(ErrorKind::Parse, where + " must be an integer");
            *p = v.get<T>();
          }
        },
        slot);
  } catch (const json::exception& e) {
    throw NavError(ErrorKind::Parse, where + ": " + e.what());
  }
}

void apply_section(const json& j, const std::vector<Field>& fields, const std::string& section) {
  if (!j.is_object()) throw NavError(ErrorKind::Parse, section + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return key == f.key; });
    if (it == fields.end()) throw NavError(ErrorKind::Parse, "unknown config key '" + section + "." + key + "'");
    assign(it->slot, value, section + "." + key);
  }
}

json dump_section(const std::vector<Field>& fields) {
  json out = json::object();
  for (const Field& f : fields) out[f.key] = slot_value(f.slot);
  return out;
}

// Accel limits live in an optional; the table edits this proxy.
struct SimProxy {
  double accel_linear = 0.0;
  double accel_angular = 0.0;
};

std::vector<Field> sim_fields(SimConfig& s, SimProxy& px) {
  return {{"dt", &s.dt},
          {"control_every", &s.control_every},
          {"v_max", &s.v_max},
          {"w_max", &s.w_max},
          {"accel_linear", &px.accel_linear},
          {"accel_angular", &px.accel_angular},
          {"beam_count", &s.lidar.beam_count},
          {"range_max", &s.lidar.range_max},
          {"fov", &s.lidar.fov},
          {"goal_tolerance", &s.goal_tolerance},
          {"start_heading_jitter", &s.start_heading_jitter},
          {"footprint_width", &s.footprint.width},
          {"footprint_length", &s.footprint.length},
          {"footprint_center_offset", &s.footprint.center_offset}};
}

std::vector<Field> controller_fields(ControllerConfig& c) {
  return {{"heading_tolerance", &c.heading_tolerance},
          {"heading_hysteresis", &c.heading_hysteresis},
          {"lookahead", &c.lookahead},
          {"backtrack_distance", &c.backtrack_distance},
          {"slow_forward_speed", &c.slow_forward_speed},
          {"slow_reverse_speed", &c.slow_reverse_speed},
          {"v_max", &c.v_max},
          {"w_max", &c.w_max},
          {"k_theta", &c.k_theta},
          {"arrival_tolerance", &c.arrival_tolerance},
          {"recover_distance", &c.recover_distance},
          {"reverse_align_tolerance", &c.reverse_align_tolerance},
          {"trail_spacing", &c.trail_spacing},
          {"plan_radius", &c.plan_radius},
          {"start_snap_radius", &c.start_snap_radius},
          {"clearance_weight", &c.clearance.weight},
          {"clearance_decay", &c.clearance.decay},
          {"clearance_radius", &c.clearance.radius},
          {"clearance_inscribed", &c.clearance.inscribed},
          {"loop_guard", &c.loop_guard},
          {"loop_guard_count", &c.loop_guard_count},
          {"loop_guard_radius", &c.loop_guard_radius},
          {"roi_length", &c.roi.length},
          {"roi_width", &c.roi.width},
          {"roi_offset", &c.roi.offset},
          {"slow_distance", &c.pursuit.slow_distance},
          {"cone_half_angle", &c.pursuit.cone_half_angle}};
}

std::vector<Field> safety_fields(SafetyConfig& s) {
  return {{"mode", &s.mode},
          {"offset", &s.inflated.offset},
          {"mpc_horizon_steps", &s.mpc.horizon_steps},
          {"mpc_step_dt", &s.mpc.step_dt},
          {"mpc_margin", &s.mpc.margin}};
}

std::vector<Field> run_fields(RunSettings& r) {
  return {{"policy", &r.policy}, {"seed", &r.root_seed}, {"trials", &r.trials}, {"jobs", &r.jobs}};
}

std::vector<Field> gen_fields(GenParams& p) {
  return {{"initial_fill", &p.initial_fill},         {"smoothing_iterations", &p.smoothing_iterations},
          {"fill_threshold", &p.fill_threshold},     {"clear_threshold", &p.clear_threshold},
          {"width", &p.width},                       {"height", &p.height},
          {"resolution", &p.resolution},             {"clearance_radius", &p.clearance_radius},
          {"max_attempts", &p.max_attempts},         {"seed", &p.seed}};
}

}  // namespace

json settings_to_json(const RunSettings& in) {
  RunSettings s = in;
  SimProxy px;
  if (s.sim.accel_limits) px = {s.sim.accel_limits->linear, s.sim.accel_limits->angular};
  json out = dump_section(run_fields(s));
  out["sim"] = dump_section(sim_fields(s.sim, px));
  out["controller"] = dump_section(controller_fields(s.controller));
  out["safety"] = dump_section(safety_fields(s.controller.safety));
  return out;
}

void apply_settings_json(const json& j, RunSettings& s) {
  if (!j.is_object()) throw NavError(ErrorKind::Parse, "run config must be an object");
  json top = j;
  SimProxy px;
  if (s.sim.accel_limits) px = {s.sim.accel_limits->linear, s.sim.accel_limits->angular};
  for (const char* section : {"sim", "controller", "safety"}) {
    if (!top.contains(section)) continue;
    const json& sub = top[section];
    if (std::string(section) == "sim") apply_section(sub, sim_fields(s.sim, px), "sim");
    if (std::string(section) == "controller") apply_section(sub, controller_fields(s.controller), "controller");
    if (std::string(section) == "safety") apply_section(sub, safety_fields(s.controller.safety), "safety");
    top.erase(section);
  }
  apply_section(top, run_fields(s), "run");
  if (px.accel_linear > 0.0 || px.accel_angular > 0.0)
    s.sim.accel_limits = AccelLimits{px.accel_linear, px.accel_angular};
  else
    s.sim.accel_limits.reset();
  // The controller and simulator share one body and speed envelope.
  s.controller.footprint = s.sim.footprint;
  s.controller.safety.inflated.base = s.sim.footprint;
}

void apply_gen_params_json(const json& j, GenParams& p) { apply_section(j, gen_fields(p), "generate"); }

void load_config_file(const std::filesystem::path& path, RunSettings& run, GenParams& gen) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw NavError(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw NavError(ErrorKind::Parse, path.string() + ": config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "run")
      apply_settings_json(value, run);
    else if (key == "generate")
      apply_gen_params_json(value, gen);
    else
      throw NavError(ErrorKind::Parse, "unknown config section '" + key + "'");
  }
}

}  // namespace barnav
