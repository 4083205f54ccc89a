#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "barnav/bench.hpp"
#include "barnav/config.hpp"
#include "barnav/error.hpp"
#include "barnav/world_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace barnav;

namespace {

constexpr const char* kDifficulties[] = {"easy", "med", "hard"};

// Temp file plus rename, so a reader never sees half a file.
void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_text_file(tmp, text);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw NavError(ErrorKind::Io, "cannot write " + path.string());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw NavError(ErrorKind::Io, "cannot create directory " + dir.string());
}

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  std::optional<std::string> policy;
  std::optional<std::string> safety;
  bool fsm_log = false;
  bool dump_costmap = false;
  bool no_trace = false;
  bool print_config = false;

  std::optional<int> count;
  std::string difficulty = "all";
  std::string worlds;
  std::string out;
  std::string results;
  std::string format = "csv";
  std::string methods = "none,fi,mpc";
};

void add_config_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file with \"run\" / \"generate\" sections")
      ->envname("BARNAV_CONFIG");
  cmd->add_flag("--print-config", f.print_config, "print the effective configuration and exit");
}

void add_run_flags(CLI::App* cmd, Flags& f, bool with_safety) {
  cmd->add_option("--trials", f.trials, "trials per world")->envname("BARNAV_TRIALS")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", f.jobs, "worker threads")->envname("BARNAV_JOBS")->check(CLI::PositiveNumber);
  cmd->add_option("--policy", f.policy, "drive policy")->envname("BARNAV_POLICY")->check(CLI::IsMember({"pursuit"}));
  if (with_safety)
    cmd->add_option("--safety", f.safety, "forward safety check")
        ->envname("BARNAV_SAFETY")
        ->check(CLI::IsMember({"none", "fi", "mpc"}));
  cmd->add_flag("--fsm-log", f.fsm_log, "write a transition log per episode")->envname("BARNAV_FSM_LOG");
  cmd->add_flag("--dump-costmap", f.dump_costmap, "write the final costmap of each episode as PGM")
      ->envname("BARNAV_DUMP_COSTMAP");
  cmd->add_flag("--no-trace", f.no_trace, "skip per-episode CSV traces")->envname("BARNAV_NO_TRACE");
}

// Config file first, then whatever came from flags or the environment.
void resolve(const Flags& f, RunSettings& run, GenParams& gen) {
  if (f.config) load_config_file(*f.config, run, gen);
  if (f.seed) {
    run.root_seed = *f.seed;
    gen.seed = *f.seed;
  }
  if (f.trials) run.trials = *f.trials;
  if (f.jobs) run.jobs = *f.jobs;
  if (f.policy) run.policy = *f.policy;
  if (f.safety) run.controller.safety.mode = parse_safety_mode(*f.safety);
  if (f.fsm_log) run.fsm_log = true;
  if (f.dump_costmap) run.keep_costmap = true;
  if (f.no_trace) run.record_trace = false;
  run.sim.validate();
  run.controller.validate();
  gen.validate();
}

void print_config(const RunSettings& run, const GenParams& gen) {
  std::cout << json{{"run", settings_to_json(run)}, {"generate", params_to_json(gen)}}.dump(2) << "\n";
}

struct GeneratedSet {
  std::vector<NamedWorld> worlds;
  std::vector<std::string> difficulty;
};

GeneratedSet generate_set(const GenParams& gen, int count, const std::string& difficulty) {
  const int candidates = difficulty == "all" ? count : 3 * count;
  std::vector<NamedWorld> pool;
  std::vector<std::string> failures;
  for (int i = 0; i < candidates; ++i) {
    try {
      pool.push_back(generate_suite_world(gen, i, gen.seed));
    } catch (const NavError& e) {
      char id[32];
      std::snprintf(id, sizeof id, "world_%03d", i);
      failures.push_back(std::string(id) + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    for (const auto& msg : failures) std::cerr << "generate: " << msg << "\n";
    throw NavError(ErrorKind::GenerationExhausted, std::to_string(failures.size()) + " world(s) failed");
  }

  // Terciles of path length over the batch; ties resolved by id.
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool[a].world.path_length < pool[b].world.path_length;
  });
  std::vector<std::string> bucket(pool.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) bucket[order[rank]] = kDifficulties[rank * 3 / order.size()];

  GeneratedSet out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (difficulty != "all" && bucket[i] != difficulty) continue;
    out.worlds.push_back(std::move(pool[i]));
    out.difficulty.push_back(bucket[i]);
  }
  return out;
}

void write_set(const fs::path& dir, const GeneratedSet& set, const GenParams& gen) {
  ensure_dir(dir);
  json manifest{{"schema_version", kWorldSchemaVersion}, {"seed", gen.seed}, {"params", params_to_json(gen)}};
  manifest["worlds"] = json::array();
  for (std::size_t i = 0; i < set.worlds.size(); ++i) {
    const NamedWorld& w = set.worlds[i];
    write_atomic(dir / (w.id + ".json"), world_to_json(w.world).dump(2) + "\n");
    manifest["worlds"].push_back({{"id", w.id},
                                  {"file", w.id + ".json"},
                                  {"path_length", w.world.path_length},
                                  {"optimal_time", w.world.optimal_time},
                                  {"difficulty", set.difficulty[i]}});
  }
  // Written last: a manifest only exists once every world file does.
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string stem_of(const EpisodeRecord& r) { return r.world_id + "_t" + std::to_string(r.trial_index); }

SuiteReport run_into(const std::vector<NamedWorld>& worlds, const RunSettings& run, const fs::path& out,
                     bool verbose) {
  ensure_dir(out);
  // Thread count does not change results, so it is left out of the saved config.
  json saved = settings_to_json(run);
  saved.erase("jobs");
  write_atomic(out / "run_config.json", saved.dump(2) + "\n");

  SuiteRun suite = run_suite(worlds, run);
  write_results(out, suite.runs, run.record_trace);
  if (run.fsm_log) {
    ensure_dir(out / "fsm");
    for (const EpisodeRun& r : suite.runs) {
      std::string text;
      for (const std::string& line : r.result.fsm_log) text += line + "\n";
      write_text_file(out / "fsm" / (stem_of(r.record) + ".log"), text);
    }
  }
  std::error_code ec;
  fs::remove(out / "errors.txt", ec);
  if (!suite.errors.empty()) {
    std::string text;
    for (const std::string& e : suite.errors) {
      std::cerr << "episode error: " << e << "\n";
      text += e + "\n";
    }
    write_text_file(out / "errors.txt", text);
  }

  std::vector<EpisodeRecord> records;
  for (const EpisodeRun& r : suite.runs) records.push_back(r.record);
  SuiteReport report = aggregate_records(records, run.method());
  write_atomic(out / "report.csv", report_csv(report));

  // Everything written must load back.
  if (!records.empty() && load_records(out).size() < records.size())
    throw NavError(ErrorKind::Io, "records under " + out.string() + " did not read back");

  if (verbose) {
    for (const EnvScore& env : report.envs)
      std::printf("%s score=%s success=%d/%zu collision=%d timeout=%d\n", env.world_id.c_str(),
                  format_score(env.score).c_str(), env.successes, env.trials.size(), env.collisions, env.timeouts);
    std::printf("aggregate %s %s\n", report.method.c_str(), format_score(report.aggregate).c_str());
  }
  return report;
}

int cmd_generate(const Flags& f) {
  RunSettings run;
  GenParams gen;
  resolve(f, run, gen);
  if (f.print_config) {
    print_config(run, gen);
    return 0;
  }
  if (!f.count || f.out.empty()) throw NavError(ErrorKind::InvalidArgument, "generate needs --count and --out");
  const GeneratedSet set = generate_set(gen, *f.count, f.difficulty);
  write_set(f.out, set, gen);
  std::printf("wrote %zu worlds to %s\n", set.worlds.size(), f.out.c_str());
  return 0;
}

int cmd_run(const Flags& f) {
  RunSettings run;
  GenParams gen;
  resolve(f, run, gen);
  if (f.print_config) {
    print_config(run, gen);
    return 0;
  }
  if (f.worlds.empty() || f.out.empty()) throw NavError(ErrorKind::InvalidArgument, "run needs --worlds and --out");
  const std::vector<NamedWorld> worlds = load_suite(f.worlds);
  run_into(worlds, run, f.out, true);
  return 0;
}

int cmd_score(const Flags& f) {
  const std::vector<EpisodeRecord> records = load_records(f.results);
  std::map<std::string, std::vector<EpisodeRecord>> by_method;
  for (const EpisodeRecord& r : records) by_method[r.method].push_back(r);
  std::vector<SuiteReport> reports;
  for (auto& [method, recs] : by_method) reports.push_back(aggregate_records(recs, method));

  const fs::path dir = f.results;
  if (f.format == "md") {
    const std::string md = report_markdown(reports);
    write_atomic(dir / "report.md", md);
    std::cout << md;
  } else {
    for (const SuiteReport& r : reports) {
      const std::string name = reports.size() == 1 ? "report.csv" : "report_" + r.method + ".csv";
      const std::string csv = report_csv(r);
      write_atomic(dir / name, csv);
      std::cout << csv;
    }
  }
  for (const SuiteReport& r : reports)
    std::printf("aggregate %s %s\n", r.method.c_str(), format_score(r.aggregate).c_str());
  return 0;
}

std::vector<SafetyMode> parse_methods(const std::string& list) {
  std::vector<SafetyMode> modes;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    modes.push_back(parse_safety_mode(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return modes;
}

int cmd_batch(const Flags& f) {
  RunSettings run;
  GenParams gen;
  resolve(f, run, gen);
  if (f.print_config) {
    print_config(run, gen);
    return 0;
  }
  if (!f.count || f.out.empty()) throw NavError(ErrorKind::InvalidArgument, "batch needs --count and --out");
  const std::vector<SafetyMode> modes = parse_methods(f.methods);
  const fs::path out = f.out;

  const GeneratedSet set = generate_set(gen, *f.count, f.difficulty);
  write_set(out / "worlds", set, gen);

  std::vector<SuiteReport> reports;
  json summary{{"seed", run.root_seed}, {"worlds", set.worlds.size()}, {"trials", run.trials}};
  summary["methods"] = json::array();
  for (const SafetyMode mode : modes) {
    RunSettings r = run;
    r.controller.safety.mode = mode;
    SuiteReport rep = run_into(set.worlds, r, out / "runs" / r.method(), false);
    summary["methods"].push_back({{"method", rep.method},
                                  {"score", format_score(rep.aggregate)},
                                  {"successes", rep.successes},
                                  {"collisions", rep.collisions},
                                  {"timeouts", rep.timeouts}});
    std::printf("%s aggregate=%s success=%d collision=%d timeout=%d\n", rep.method.c_str(),
                format_score(rep.aggregate).c_str(), rep.successes, rep.collisions, rep.timeouts);
    reports.push_back(std::move(rep));
  }
  write_atomic(out / "leaderboard.md", report_markdown(reports));
  write_atomic(out / "summary.json", summary.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"barnav: deterministic 2D navigation benchmark"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("generate", "generate a world suite");
  add_config_flags(gen, f);
  gen->add_option("--count", f.count, "number of worlds")->check(CLI::PositiveNumber);
  gen->add_option("--seed", f.seed, "root seed")->envname("BARNAV_SEED");
  gen->add_option("--difficulty", f.difficulty, "path-length tercile to keep")
      ->check(CLI::IsMember({"all", "easy", "med", "hard"}));
  gen->add_option("--out", f.out, "output directory");

  auto* run = app.add_subcommand("run", "run episodes over a world suite");
  add_config_flags(run, f);
  run->add_option("--worlds", f.worlds, "world directory or file");
  run->add_option("--out", f.out, "results directory");
  run->add_option("--seed", f.seed, "root seed for trial sub-streams")->envname("BARNAV_SEED");
  add_run_flags(run, f, true);

  auto* score = app.add_subcommand("score", "score stored episode records");
  score->add_option("--results", f.results, "results directory")->required();
  score->add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "md"}));

  auto* batch = app.add_subcommand("batch", "generate, run every safety mode, and rank");
  add_config_flags(batch, f);
  batch->add_option("--count", f.count, "number of worlds")->check(CLI::PositiveNumber);
  batch->add_option("--seed", f.seed, "root seed for worlds and trials")->envname("BARNAV_SEED");
  batch->add_option("--difficulty", f.difficulty, "path-length tercile to keep")
      ->check(CLI::IsMember({"all", "easy", "med", "hard"}));
  batch->add_option("--methods", f.methods, "comma-separated safety modes")->envname("BARNAV_METHODS");
  batch->add_option("--out", f.out, "output directory");
  add_run_flags(batch, f, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(f);
    if (run->parsed()) return cmd_run(f);
    if (score->parsed()) return cmd_score(f);
    if (batch->parsed()) return cmd_batch(f);
  } catch (const std::exception& e) {
    std::cerr << "barnav: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
