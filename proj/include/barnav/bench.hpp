#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "barnav/episode.hpp"
#include "barnav/fsm.hpp"
#include "barnav/sim.hpp"
#include "barnav/worldgen.hpp"

namespace barnav {

/// OT / clamp(AT, 4 OT, 8 OT) on success, 0 otherwise. Throws InvalidOptimalTime for OT <= 0.
double score_trial(bool success, double actual_time, double optimal_time);

/// path_length / 2 m/s. Throws InvalidPathLength for lengths <= 0.
double optimal_time(double path_length);

inline constexpr int kRecordSchemaVersion = 1;

struct EpisodeRecord {
  std::string world_id;
  int trial_index = 0;
  Outcome outcome = Outcome::Timeout;
  double actual_time = 0.0;
  double optimal_time = 0.0;
  std::string method;      // e.g. "pursuit+fi"
  std::string trace_path;  // relative to the results directory; empty if not written
  std::map<std::string, double> fsm_summary;  // per-state share of episode time
  bool loop_detected = false;

  double score() const { return score_trial(outcome == Outcome::Success, actual_time, optimal_time); }
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

nlohmann::json record_to_json(const EpisodeRecord& r);
EpisodeRecord record_from_json(const nlohmann::json& j);

struct EnvScore {
  std::string world_id;
  double optimal_time = 0.0;
  std::vector<EpisodeRecord> trials;  // sorted by trial_index
  double score = 0.0;                 // mean of per-trial scores
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
};

struct SuiteReport {
  std::string method;
  std::vector<EnvScore> envs;  // sorted by world_id
  double aggregate = 0.0;      // unweighted mean over envs
  int episodes = 0;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
};

/// Pure fold over records; the result does not depend on their order.
SuiteReport aggregate_records(std::vector<EpisodeRecord> records, const std::string& method = "");

/// Per-world rows plus a final "aggregate" row.
std::string report_csv(const SuiteReport& report);

/// Leaderboard table (Rank | Method | Score), ranked by aggregate score.
std::string report_markdown(const std::vector<SuiteReport>& reports);

struct NamedWorld {
  std::string id;
  WorldSpec world;
};

/// `count` worlds with parameters `base` and per-world seeds derived from
/// root_seed; ids are world_000, world_001, ...
std::vector<NamedWorld> generate_suite(const GenParams& base, int count, std::uint64_t root_seed);

/// World `index` of the suite above; throws GenerationExhausted on failure.
NamedWorld generate_suite_world(const GenParams& base, int index, std::uint64_t root_seed);


/// Worlds from a single world file, or from a directory: manifest.json order
/// when present, otherwise every *.json sorted by name (id = file stem).
std::vector<NamedWorld> load_suite(const std::filesystem::path& path);

struct RunSettings {
  SimConfig sim;
  ControllerConfig controller;
  std::string policy = "pursuit";
  std::uint64_t root_seed = 0;
  int trials = 1;
  int jobs = 1;
  bool fsm_log = false;
  bool keep_costmap = false;
  bool record_trace = true;

  std::string method() const;
};

struct EpisodeRun {
  EpisodeRecord record;
  EpisodeResult result;
};

/// Seed of a trial: a named sub-stream of the root seed keyed by world and trial.
std::uint64_t trial_seed(std::uint64_t root_seed, const std::string& world_id, int trial);

/// Timeout used for a world: 8 OT + 10 s.
double trial_timeout(double optimal_time);

/// Runs trials for one world; exceptions from the episode propagate.
EpisodeRun run_trial(const NamedWorld& world, int trial, const RunSettings& settings);

/// All (world, trial) episodes on `settings.jobs` worker threads. Results are
/// ordered by (world index, trial) regardless of completion order. An episode
/// that throws yields an `error` entry instead of aborting the suite.
struct SuiteRun {
  std::vector<EpisodeRun> runs;
  std::vector<std::string> errors;
};
SuiteRun run_suite(const std::vector<NamedWorld>& worlds, const RunSettings& settings);

/// Writes records/<world>_t<k>.json (+ traces/<...>.csv when traced) under dir.
void write_results(const std::filesystem::path& dir, std::vector<EpisodeRun>& runs, bool write_traces);

/// Loads every records/*.json under dir. Throws if none exist or one is corrupt.
std::vector<EpisodeRecord> load_records(const std::filesystem::path& dir);

/// Fixed-precision aggregate string shared by every printer of the score.
std::string format_score(double score);

}  // namespace barnav
