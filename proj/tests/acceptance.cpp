// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "barnav/bench.hpp"
#include "barnav/costmap.hpp"
#include "barnav/episode.hpp"
#include "barnav/error.hpp"
#include "barnav/fsm.hpp"
#include "barnav/rng.hpp"
#include "barnav/safety.hpp"
#include "barnav/sim.hpp"
#include "barnav/world_io.hpp"
#include "support.hpp"

#ifndef BARNAV_CLI_PATH
#define BARNAV_CLI_PATH "barnav"
#endif

using namespace barnav;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double hand_score(bool success, double at, double ot) {
  if (!success) return 0.0;
  double d = at;
  if (d < 4 * ot) d = 4 * ot;
  if (d > 8 * ot) d = 8 * ot;
  return ot / d;
}

std::vector<FsmState> compress(const std::vector<FsmState>& t) {
  std::vector<FsmState> out;
  for (FsmState s : t)
    if (out.empty() || out.back() != s) out.push_back(s);
  return out;
}

// Shared 50-world run for criteria 2, 6 and 7.
struct SuiteResults {
  std::vector<NamedWorld> worlds;
  SuiteRun none, fi, mpc;
  double seconds = 0.0;
};

constexpr std::uint64_t kSuiteSeed = 2023;

SuiteResults& suite_results() {
  static SuiteResults r = [] {
    SuiteResults s;
    const auto t0 = std::chrono::steady_clock::now();
    s.worlds = generate_suite(GenParams{}, 50, kSuiteSeed);
    RunSettings run;
    run.root_seed = kSuiteSeed;
    run.controller.safety.mode = SafetyMode::None;
    s.none = run_suite(s.worlds, run);
    run.controller.safety.mode = SafetyMode::FootprintInflation;
    run.controller.safety.inflated.offset = 0.04;
    run.controller.v_max = 0.7;
    s.fi = run_suite(s.worlds, run);
    run.controller.safety.mode = SafetyMode::Mpc;
    s.mpc = run_suite(s.worlds, run);
    s.seconds = seconds_since(t0);
    return s;
  }();
  return r;
}

SuiteReport report_of(const SuiteRun& run) {
  std::vector<EpisodeRecord> recs;
  for (const EpisodeRun& r : run.runs) recs.push_back(r.record);
  return aggregate_records(recs);
}

Verdict scoring_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(derive_seed(1, "acceptance/score", 0));
  int errors = 0, cases = 0;
  for (int k = 0; k < 1000; ++k, ++cases) {
    const double ot = 0.05 + 30 * unit_uniform(rng);
    const double at = 300 * unit_uniform(rng);
    const bool ok = unit_uniform(rng) < 0.8;
    errors += score_trial(ok, at, ot) != hand_score(ok, at, ot);
  }
  for (int k = 0; k < 100; ++k, cases += 2) {
    const double ot = 0.05 + 30 * unit_uniform(rng);
    errors += score_trial(true, 4 * ot, ot) != hand_score(true, 4 * ot, ot);
    errors += score_trial(true, 8 * ot, ot) != hand_score(true, 8 * ot, ot);
  }
  errors += score_trial(true, 20.0, 5.0) != 0.25;
  errors += score_trial(true, 40.0, 5.0) != 0.125;
  const double secs = seconds_since(t0);
  return {errors == 0 && secs < 1.0,
          std::to_string(cases + 2) + " cases, " + std::to_string(errors) + " mismatches, " + fmt("%.3f s", secs)};
}

Verdict score_range() {
  std::mt19937_64 rng(derive_seed(1, "acceptance/range", 0));
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<EpisodeRecord> recs;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      EpisodeRecord r;
      r.world_id = "w" + std::to_string(rng() % 10);
      r.trial_index = i;
      r.outcome = static_cast<Outcome>(rng() % 3);
      r.optimal_time = 0.1 + 10 * unit_uniform(rng);
      r.actual_time = 100 * unit_uniform(rng);
      const double s = r.score();
      if (r.outcome == Outcome::Success ? (s < 0.125 || s > 0.25) : s != 0.0) ++bad;
      recs.push_back(r);
    }
    const double agg = aggregate_records(recs).aggregate;
    if (agg < 0.0 || agg > 0.25) ++bad;
  }
  SuiteResults& s = suite_results();
  for (const SuiteRun* run : {&s.none, &s.fi, &s.mpc}) {
    for (const EpisodeRun& r : run->runs) {
      const double sc = r.record.score();
      if (r.record.outcome == Outcome::Success && (sc < 0.125 || sc > 0.25)) ++bad;
    }
    const double agg = report_of(*run).aggregate;
    if (agg < 0.0 || agg > 0.25) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " out-of-range values"};
}

Verdict worlds_500() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t root = 500;
  const auto suite = generate_suite(GenParams{}, 500, root);
  int unreachable = 0, length_mismatch = 0, nondeterministic = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const WorldSpec& w = suite[i].world;
    const Cell s = w.grid.world_to_cell(w.start.position()), t = w.grid.world_to_cell(w.goal);
    if (!oracle::reachable4(w.grid, s, t)) ++unreachable;
    const auto steps = oracle::dijkstra_steps(w.grid, s, t);
    const double exact = steps ? (static_cast<double>(steps->first) + static_cast<double>(steps->second) * std::sqrt(2.0)) *
                                     w.params.resolution
                               : -1.0;
    if (!steps || exact != w.path_length) ++length_mismatch;
    const NamedWorld again = generate_suite_world(GenParams{}, static_cast<int>(i), root);
    if (world_to_json(again.world).dump() != world_to_json(w).dump()) ++nondeterministic;
  }
  const double secs = seconds_since(t0);
  const bool ok = suite.size() == 500 && unreachable == 0 && length_mismatch == 0 && nondeterministic == 0 && secs < 30.0;
  return {ok, std::to_string(suite.size()) + " worlds in " + fmt("%.2f s", secs) + ", unreachable " +
                  std::to_string(unreachable) + ", A*/Dijkstra mismatches " + std::to_string(length_mismatch) +
                  ", non-identical regenerations " + std::to_string(nondeterministic)};
}

Verdict geometry_oracles() {
  std::mt19937_64 rng(derive_seed(1, "acceptance/geometry", 0));
  int fi_bad = 0, col_bad = 0, roi_bad = 0;
  int fi_unsafe = 0, col_hits = 0, roi_blocked = 0;

  for (int k = 0; k < 1000; ++k) {
    InflatedFootprint f;
    f.offset = 0.1 * unit_uniform(rng);
    std::vector<Vec2> pts;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) pts.push_back({0.9 * unit_uniform(rng) - 0.45, 0.9 * unit_uniform(rng) - 0.45});
    bool ref = true;
    for (const Vec2 p : pts)
      if (oracle::in_rect({0, 0}, 0.0, f.half_length(), f.half_width(), p)) ref = false;
    const bool got = fi_check(pts, f).safe;
    fi_bad += got != ref;
    fi_unsafe += !got;
  }

  const RobotFootprint fp;
  for (int k = 0; k < 1000; ++k) {
    OccupancyGrid g(24, 24, 0.05 + 0.1 * unit_uniform(rng));
    for (std::size_t i = 0; i < g.size(); ++i)
      if (unit_uniform(rng) < 0.05) g.set_occupied(g.cell_at(i), true);
    const Pose2D p{unit_uniform(rng) * g.width_m(), unit_uniform(rng) * g.height_m(), (2 * unit_uniform(rng) - 1) * kPi};
    bool ref = false;
    for (std::size_t i = 0; i < g.size() && !ref; ++i)
      ref = g.occupied(g.cell_at(i)) &&
            oracle::in_rect(p.position(), p.theta, fp.length / 2, fp.width / 2, g.cell_center(g.cell_at(i)));
    col_bad += check_collision(g, p, fp) != ref;
    col_hits += ref;
  }

  for (int k = 0; k < 1000; ++k) {
    Costmap m;
    const int marks = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < marks; ++i) m.mark({2.4 * unit_uniform(rng) - 1.2, 2.4 * unit_uniform(rng) - 1.2});
    const Pose2D pose{0.6 * unit_uniform(rng) - 0.3, 0.6 * unit_uniform(rng) - 0.3, (2 * unit_uniform(rng) - 1) * kPi};
    RearRoi roi;
    roi.length = 0.2 + 0.6 * unit_uniform(rng);
    roi.width = 0.43 + 0.3 * unit_uniform(rng);
    const double back = roi.offset + roi.length / 2;
    const Vec2 center{pose.x - back * std::cos(pose.theta), pose.y - back * std::sin(pose.theta)};
    bool ref = true;
    const OccupancyGrid& g = m.grid();
    for (std::size_t i = 0; i < g.size() && ref; ++i)
      if (g.cost(g.cell_at(i)) >= 128 &&
          oracle::in_rect(center, pose.theta, roi.length / 2, roi.width / 2, g.cell_center(g.cell_at(i))))
        ref = false;
    const bool got = m.roi_clear(pose, roi);
    roi_bad += got != ref;
    roi_blocked += !got;
  }

  const bool ok = fi_bad == 0 && col_bad == 0 && roi_bad == 0;
  return {ok, "disagreements fi " + std::to_string(fi_bad) + ", collision " + std::to_string(col_bad) + ", roi " +
                  std::to_string(roi_bad) + " (positives " + std::to_string(fi_unsafe) + "/" + std::to_string(col_hits) +
                  "/" + std::to_string(roi_blocked) + ")"};
}

Verdict mpc_consistency() {
  std::mt19937_64 rng(derive_seed(1, "acceptance/mpc", 0));
  MpcParams params;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Twist2D cmd{1.4 * unit_uniform(rng) - 0.7, 3.0 * unit_uniform(rng) - 1.5};
    const auto poses = mpc_rollout(cmd, params);
    if (poses.size() != 20) return {false, "rollout length " + std::to_string(poses.size())};
    for (int i = 0; i < 20; ++i) {
      const Pose2D arc = oracle::arc_pose({}, cmd.v, cmd.w, (i + 1) * params.step_dt);
      const Pose2D& p = poses[static_cast<std::size_t>(i)];
      worst = std::max({worst, std::abs(p.x - arc.x), std::abs(p.y - arc.y), std::abs(normalize_angle(p.theta - arc.theta))});
    }
  }

  const RobotFootprint fp;
  int violations = 0, flips = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 3; ++i) pts.push_back({1.4 * unit_uniform(rng) - 0.7, 1.4 * unit_uniform(rng) - 0.7});
    const Twist2D cmd{1.4 * unit_uniform(rng) - 0.7, 3.0 * unit_uniform(rng) - 1.5};
    bool was_unsafe = false;
    for (int h = 1; h <= 40; ++h) {
      MpcParams p;
      p.horizon_steps = h;
      const bool unsafe = !mpc_check(pts, cmd, fp, p).safe;
      if (was_unsafe && !unsafe) ++violations;
      if (!was_unsafe && unsafe && h > 1) ++flips;
      was_unsafe = was_unsafe || unsafe;
    }
  }
  const bool ok = worst <= 1e-9 && violations == 0;
  return {ok, "max rollout error " + fmt("%.3g", worst) + " over 100 commands; horizon monotonicity violations " +
                  std::to_string(violations) + " on 1000 samples (" + std::to_string(flips) + " become unsafe later)"};
}

Verdict fsm_conformance() {
  SuiteResults& s = suite_results();
  int episodes = 0, violations = 0;
  std::set<std::pair<int, int>> seen;
  std::vector<FsmState> sample;
  for (const SuiteRun* run : {&s.none, &s.fi, &s.mpc})
    for (const EpisodeRun& r : run->runs) {
      ++episodes;
      const auto tl = r.result.timeline();
      if (validate_timeline(tl)) ++violations;
      for (std::size_t i = 1; i < tl.size(); ++i)
        if (tl[i] != tl[i - 1]) seen.insert({static_cast<int>(tl[i - 1]), static_cast<int>(tl[i])});
      if (sample.empty() && compress(tl).size() > 3) sample = tl;
    }

  // Mutation: splice an edge outside the table into a real timeline.
  bool mutant_caught = false;
  if (!sample.empty()) {
    std::vector<FsmState> mutant = sample;
    const auto it = std::find(mutant.begin(), mutant.end(), FsmState::Drive);
    if (it != mutant.end()) {
      mutant.insert(it, FsmState::Forward);  // Heading -> Forward is not an edge
      const auto v = validate_timeline(mutant);
      mutant_caught = v && v->to == FsmState::Forward;
    }
  }
  std::vector<FsmState> init_to_drive = {FsmState::Initial, FsmState::Drive};
  mutant_caught = mutant_caught && validate_timeline(init_to_drive).has_value();

  const bool ok = episodes == 150 && violations == 0 && mutant_caught;
  return {ok, std::to_string(episodes) + " episodes over 50 worlds, " + std::to_string(violations) +
                  " illegal transitions, " + std::to_string(seen.size()) + " distinct state changes seen, mutation " +
                  (mutant_caught ? "caught" : "missed")};
}

Verdict safety_helps() {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResults& s = suite_results();
  const SuiteReport none = report_of(s.none), fi = report_of(s.fi), mpc = report_of(s.mpc);
  const double secs = s.seconds + seconds_since(t0);
  const bool fi_ok = fi.collisions < none.collisions && fi.aggregate > none.aggregate;
  const bool mpc_ok = mpc.collisions < none.collisions && mpc.aggregate > none.aggregate;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "none %.6f (%d collisions), fi %.6f (%d), mpc %.6f (%d); %.1f s", none.aggregate, none.collisions,
                fi.aggregate, fi.collisions, mpc.aggregate, mpc.collisions, secs);
  return {fi_ok && mpc_ok && secs < 300.0, buf};
}

// A closed pocket opening toward -x: robot starts inside, facing the dead end.
WorldSpec pocket(int half, int mouth, int start_col, int goal_col, int goal_drow) {
  constexpr int w = 80, h = 60, axis = 25, dead = 40, thick = 2;
  std::vector<std::string> rows(h, std::string(w, '.'));
  auto set = [&](int c, int r, char ch) { rows[static_cast<std::size_t>(h - 1 - r)][static_cast<std::size_t>(c)] = ch; };
  for (int c = 0; c < w; ++c) {
    set(c, 0, '#');
    set(c, h - 1, '#');
  }
  for (int r = 0; r < h; ++r) {
    set(0, r, '#');
    set(w - 1, r, '#');
  }
  for (int t = 0; t < thick; ++t)
    for (int c = mouth; c <= dead; ++c) {
      set(c, axis + half + t, '#');
      set(c, axis - half - t, '#');
    }
  for (int r = axis - half - thick + 1; r < axis + half + thick; ++r) set(dead, r, '#');
  set(start_col, axis, 'S');
  set(goal_col, axis + goal_drow, 'G');
  return fixture::from_ascii(rows, 0.05, 0.0);
}

EpisodeResult run_fixture(const WorldSpec& w, const ControllerConfig& cc) {
  FsmController ctl(cc, make_policy("pursuit"));
  SimConfig sim;
  sim.timeout = trial_timeout(w.optimal_time);
  return run_episode(w, ctl, sim);
}

Verdict recovery_fixtures() {
  // Cul-de-sac: the turn out of the pocket is unsafe, straight ahead is not.
  const WorldSpec cul = pocket(8, 24, 29, 50, 20);
  ControllerConfig cc;
  cc.safety.mode = SafetyMode::Mpc;
  cc.safety.mpc.margin = 0.02;
  const EpisodeResult a = run_fixture(cul, cc);
  const auto seq = compress(a.timeline());
  bool recovery = false;
  for (std::size_t i = 0; i + 3 < seq.size(); ++i)
    recovery = recovery || (seq[i] == FsmState::Drive && seq[i + 1] == FsmState::Backtrack &&
                            seq[i + 2] == FsmState::Forward && seq[i + 3] == FsmState::Heading);
  const double score = score_trial(a.outcome == Outcome::Success, a.actual_time, cul.optimal_time);
  const bool cul_ok = recovery && score > 0.0;

  // Dead end: the pocket is too tight to either turn or back out.
  const WorldSpec dead = pocket(7, 28, 32, 36, 16);
  ControllerConfig dc;
  dc.safety.mode = SafetyMode::Mpc;
  const EpisodeResult b = run_fixture(dead, dc);
  const auto dseq = compress(b.timeline());
  int alternations = 0;
  for (std::size_t i = 1; i < dseq.size(); ++i)
    alternations += (dseq[i - 1] == FsmState::Backtrack && dseq[i] == FsmState::Forward) ||
                    (dseq[i - 1] == FsmState::Forward && dseq[i] == FsmState::Backtrack);
  dc.loop_guard = false;
  const EpisodeResult c = run_fixture(dead, dc);
  const bool dead_ok = alternations >= 6 && b.loop_detected && !c.loop_detected;

  std::string detail = std::string("cul-de-sac ") + to_string(a.outcome) + fmt(" score %.6f", score) +
                       (recovery ? " with" : " without") + " Drive>Backtrack>Forward>Heading; dead end " +
                       std::to_string(alternations) + " Backtrack/Forward alternations, loop flag " +
                       (b.loop_detected ? "set" : "unset") + " (guard off: " + (c.loop_detected ? "set" : "unset") + ")";
  return {cul_ok && dead_ok, detail};
}

Verdict batch_jobs() {
  const fs::path root = fs::temp_directory_path() / "barnav_acceptance_batch";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = BARNAV_CLI_PATH;
  std::vector<fs::path> outs;
  for (int jobs : {1, 4}) {
    const fs::path out = root / ("jobs" + std::to_string(jobs));
    const std::string cmd = "\"" + cli + "\" batch --count 8 --seed 77 --trials 2 --methods none,fi,mpc --jobs " +
                            std::to_string(jobs) + " --out \"" + out.string() + "\" > \"" + out.string() + ".stdout\" 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "batch exited nonzero for --jobs " + std::to_string(jobs)};
    outs.push_back(out);
  }
  std::vector<std::string> files[2];
  for (int k = 0; k < 2; ++k) {
    for (const auto& e : fs::recursive_directory_iterator(outs[static_cast<std::size_t>(k)]))
      if (e.is_regular_file()) files[k].push_back(fs::relative(e.path(), outs[static_cast<std::size_t>(k)]).string());
    std::sort(files[k].begin(), files[k].end());
  }
  int differing = read_text_file(outs[0].string() + ".stdout") != read_text_file(outs[1].string() + ".stdout");
  if (files[0] != files[1]) differing = -1;
  else
    for (const std::string& f : files[0])
      differing += read_text_file(outs[0] / f) != read_text_file(outs[1] / f);
  fs::remove_all(root);
  if (differing < 0) return {false, "--jobs 1 and --jobs 4 wrote different file sets"};
  return {differing == 0 && !files[0].empty(),
          std::to_string(files[0].size()) + " files and the printed summary compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"scoring exactness", scoring_exactness},
      {"score range", score_range},
      {"500 worlds: validity, A* = Dijkstra, determinism, < 30 s", worlds_500},
      {"fi_check / check_collision / roi_clear vs oracles", geometry_oracles},
      {"MPC rollout vs closed-form arcs; horizon monotonicity", mpc_consistency},
      {"FSM conformance and mutation", fsm_conformance},
      {"safety layers beat no safety on 50 worlds", safety_helps},
      {"cul-de-sac recovery and dead-end loop guard", recovery_fixtures},
      {"batch output independent of --jobs", batch_jobs},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
