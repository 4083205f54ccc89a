#include "barnav/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "barnav/error.hpp"
#include "barnav/policy.hpp"
#include "barnav/rng.hpp"
#include "barnav/world_io.hpp"

namespace barnav {

using nlohmann::json;

double score_trial(bool success, double actual_time, double ot) {
  if (!(ot > 0.0)) throw NavError(ErrorKind::InvalidOptimalTime, "optimal time must be > 0");
  if (!success) return 0.0;
  return ot / std::clamp(actual_time, 4.0 * ot, 8.0 * ot);
}

double optimal_time(double path_length) {
  if (!(path_length > 0.0)) throw NavError(ErrorKind::InvalidPathLength, "path length must be > 0");
  return path_length / kOptimalSpeed;
}

json record_to_json(const EpisodeRecord& r) {
  return {{"schema_version", kRecordSchemaVersion},
          {"world_id", r.world_id},
          {"trial_index", r.trial_index},
          {"outcome", to_string(r.outcome)},
          {"actual_time", r.actual_time},
          {"optimal_time", r.optimal_time},
          {"method", r.method},
          {"trace_path", r.trace_path},
          {"fsm_summary", r.fsm_summary},
          {"loop_detected", r.loop_detected}};
}

EpisodeRecord record_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kRecordSchemaVersion)
      throw NavError(ErrorKind::Parse, "unsupported record schema_version");
    EpisodeRecord r;
    r.world_id = j.at("world_id").get<std::string>();
    r.trial_index = j.at("trial_index").get<int>();
    r.outcome = parse_outcome(j.at("outcome").get<std::string>());
    r.actual_time = j.at("actual_time").get<double>();
    r.optimal_time = j.at("optimal_time").get<double>();
    r.method = j.value("method", "");
    r.trace_path = j.value("trace_path", "");
    r.fsm_summary = j.value("fsm_summary", std::map<std::string, double>{});
    r.loop_detected = j.value("loop_detected", false);
    if (r.actual_time < 0.0) throw NavError(ErrorKind::Parse, "actual_time must be >= 0");
    if (!(r.optimal_time > 0.0)) throw NavError(ErrorKind::Parse, "optimal_time must be > 0");
    return r;
  } catch (const json::exception& e) {
    throw NavError(ErrorKind::Parse, std::string("record json: ") + e.what());
  }
}

SuiteReport aggregate_records(std::vector<EpisodeRecord> records, const std::string& method) {
  std::sort(records.begin(), records.end(), [](const EpisodeRecord& a, const EpisodeRecord& b) {
    return std::tie(a.world_id, a.trial_index) < std::tie(b.world_id, b.trial_index);
  });
  SuiteReport rep;
  rep.method = method;
  for (EpisodeRecord& r : records) {
    if (rep.envs.empty() || rep.envs.back().world_id != r.world_id) {
      rep.envs.push_back({});
      rep.envs.back().world_id = r.world_id;
      rep.envs.back().optimal_time = r.optimal_time;
    }
    EnvScore& env = rep.envs.back();
    env.successes += r.outcome == Outcome::Success;
    env.collisions += r.outcome == Outcome::Collision;
    env.timeouts += r.outcome == Outcome::Timeout;
    env.trials.push_back(std::move(r));
  }
  double total = 0.0;
  for (EnvScore& env : rep.envs) {
    double sum = 0.0;
    for (const EpisodeRecord& r : env.trials) sum += r.score();
    env.score = sum / static_cast<double>(env.trials.size());
    total += env.score;
    rep.episodes += static_cast<int>(env.trials.size());
    rep.successes += env.successes;
    rep.collisions += env.collisions;
    rep.timeouts += env.timeouts;
  }
  rep.aggregate = rep.envs.empty() ? 0.0 : total / static_cast<double>(rep.envs.size());
  return rep;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

std::string report_csv(const SuiteReport& rep) {
  std::string out = "world_id,optimal_time,trials,successes,collisions,timeouts,score\n";
  char buf[256];
  for (const EnvScore& e : rep.envs) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%zu,%d,%d,%d,%s\n", e.world_id.c_str(), e.optimal_time,
                  e.trials.size(), e.successes, e.collisions, e.timeouts, format_score(e.score).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "aggregate,,%d,%d,%d,%d,%s\n", rep.episodes, rep.successes, rep.collisions,
                rep.timeouts, format_score(rep.aggregate).c_str());
  out += buf;
  return out;
}

std::string report_markdown(const std::vector<SuiteReport>& reports) {
  std::vector<const SuiteReport*> ranked;
  for (const SuiteReport& r : reports) ranked.push_back(&r);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const SuiteReport* a, const SuiteReport* b) { return a->aggregate > b->aggregate; });
  std::string out = "| Rank | Method | Score |\n|---|---|---|\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::string method = ranked[i]->method.empty() ? "unnamed" : ranked[i]->method;
    out += "| " + std::to_string(i + 1) + " | " + method + " | " + format_score(ranked[i]->aggregate) + " |\n";
  }
  return out;
}

std::vector<NamedWorld> generate_suite(const GenParams& base, int count, std::uint64_t root_seed) {
  std::vector<NamedWorld> worlds;
  worlds.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) worlds.push_back(generate_suite_world(base, i, root_seed));
  return worlds;
}

NamedWorld generate_suite_world(const GenParams& base, int index, std::uint64_t root_seed) {
  GenParams p = base;
  p.seed = derive_seed(root_seed, "worldgen-suite", static_cast<std::uint64_t>(index));
  char id[32];
  std::snprintf(id, sizeof id, "world_%03d", index);
  return {id, generate_world(p)};
}

std::string RunSettings::method() const { return policy + "+" + to_string(controller.safety.mode); }

std::uint64_t trial_seed(std::uint64_t root_seed, const std::string& world_id, int trial) {
  return derive_seed(root_seed, "episode/" + world_id, static_cast<std::uint64_t>(trial));
}

double trial_timeout(double ot) { return 8.0 * ot + 10.0; }

EpisodeRun run_trial(const NamedWorld& world, int trial, const RunSettings& settings) {
  SimConfig sim = settings.sim;
  sim.timeout = trial_timeout(world.world.optimal_time);
  sim.seed = trial_seed(settings.root_seed, world.id, trial);
  ControllerConfig ccfg = settings.controller;
  FsmController controller(ccfg, make_policy(settings.policy, ccfg.pursuit));

  EpisodeOptions opts;
  opts.record_trace = settings.record_trace;
  opts.fsm_log = settings.fsm_log;
  opts.keep_costmap = settings.keep_costmap;

  EpisodeRun run;
  run.result = run_episode(world.world, controller, sim, opts);
  EpisodeRecord& rec = run.record;
  rec.world_id = world.id;
  rec.trial_index = trial;
  rec.outcome = run.result.outcome;
  rec.actual_time = run.result.actual_time;
  rec.optimal_time = world.world.optimal_time;
  rec.method = settings.method();
  rec.loop_detected = run.result.loop_detected;
  // Shares of the simulated time; the last step of a timeout can overrun actual_time.
  double total = 0.0;
  for (const double t : run.result.state_time) total += t;
  for (const FsmState s : kAllStates) {
    const double share = total > 0.0 ? run.result.state_time[static_cast<std::size_t>(s)] / total : 0.0;
    rec.fsm_summary[to_string(s)] = share;
  }
  return run;
}

SuiteRun run_suite(const std::vector<NamedWorld>& worlds, const RunSettings& settings) {
  if (worlds.empty()) throw NavError(ErrorKind::InvalidArgument, "suite needs at least one world");
  if (settings.trials < 1) throw NavError(ErrorKind::InvalidArgument, "trials must be >= 1");
  const std::size_t total = worlds.size() * static_cast<std::size_t>(settings.trials);
  std::vector<std::optional<EpisodeRun>> slots(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < total;) {
      const auto& world = worlds[job / static_cast<std::size_t>(settings.trials)];
      const int trial = static_cast<int>(job % static_cast<std::size_t>(settings.trials));
      try {
        slots[job] = run_trial(world, trial, settings);
      } catch (const std::exception& e) {
        errors[job] = world.id + " trial " + std::to_string(trial) + ": " + e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(settings.jobs, 1)), 1, total);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SuiteRun out;
  for (std::size_t i = 0; i < total; ++i) {
    if (slots[i]) out.runs.push_back(std::move(*slots[i]));
    if (!errors[i].empty()) out.errors.push_back(errors[i]);
  }
  return out;
}

void write_results(const std::filesystem::path& dir, std::vector<EpisodeRun>& runs, bool write_traces) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "records", ec);
  if (ec) throw NavError(ErrorKind::Io, "cannot create " + (dir / "records").string() + ": " + ec.message());
  if (write_traces) fs::create_directories(dir / "traces", ec);
  if (ec) throw NavError(ErrorKind::Io, "cannot create " + (dir / "traces").string() + ": " + ec.message());
  for (EpisodeRun& run : runs) {
    const std::string stem = run.record.world_id + "_t" + std::to_string(run.record.trial_index);
    if (write_traces) {
      run.record.trace_path = "traces/" + stem + ".csv";
      write_text_file(dir / run.record.trace_path, trace_to_csv(run.result.trace));
    }
    if (run.result.costmap) {
      fs::create_directories(dir / "costmaps", ec);
      write_text_file(dir / "costmaps" / (stem + ".pgm"), run.result.costmap->to_pgm());
    }
    write_text_file(dir / "records" / (stem + ".json"), record_to_json(run.record).dump(2) + "\n");
  }
}

std::vector<NamedWorld> load_suite(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<NamedWorld> out;
  if (fs::is_regular_file(path)) {
    out.push_back({path.stem().string(), load_world(path)});
    return out;
  }
  if (!fs::is_directory(path)) throw NavError(ErrorKind::Io, "no such world file or directory: " + path.string());
  const fs::path manifest = path / "manifest.json";
  if (fs::exists(manifest)) {
    json m;
    try {
      m = json::parse(read_text_file(manifest));
      for (const json& w : m.at("worlds"))
        out.push_back({w.at("id").get<std::string>(), load_world(path / w.at("file").get<std::string>())});
    } catch (const json::exception& e) {
      throw NavError(ErrorKind::Parse, manifest.string() + ": " + e.what());
    }
  } else {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) out.push_back({f.stem().string(), load_world(f)});
  }
  if (out.empty()) throw NavError(ErrorKind::Io, "no worlds in " + path.string());
  return out;
}

std::vector<EpisodeRecord> load_records(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path rec_dir = dir / "records";
  if (!fs::is_directory(rec_dir)) throw NavError(ErrorKind::Io, "no records/ directory under " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(rec_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  if (files.empty()) throw NavError(ErrorKind::Io, "no records in " + rec_dir.string());
  std::sort(files.begin(), files.end());
  std::vector<EpisodeRecord> records;
  for (const fs::path& f : files) {
    try {
      records.push_back(record_from_json(json::parse(read_text_file(f))));
    } catch (const json::exception& e) {
      throw NavError(ErrorKind::Parse, f.string() + ": " + e.what());
    } catch (const NavError& e) {
      throw NavError(e.kind(), f.string() + ": " + e.what());
    }
  }
  return records;
}

}  // namespace barnav
