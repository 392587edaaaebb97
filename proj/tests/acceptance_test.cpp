// Copyright 2026 The fleetarb Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fleetarb/branch_and_bound.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/report.hpp"
#include "fleetarb/scenarios.hpp"
#include "fleetarb/schedule.hpp"
#include "fleetarb/tour_heuristic.hpp"
#include "helpers.hpp"

using namespace fleetarb;
using namespace fleetarb::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  int compared = 0, infeasible = 0, mismatched = 0;
  double worst = 0.0, milp_secs = 0.0;
  // Fixing indicators at random leaves some instances infeasible; those are
  // compared too, but 50 feasible ones are required.
  while (compared - infeasible < 50) {
    const int max_free = std::uniform_int_distribution<int>(12, 20)(rng);
    RandomCase rc = random_case(rng, max_free);
    MilpSolution ref = oracle_solve(rc.instance, 20);
    const auto t1 = Clock::now();
    MilpSolution s = solve_milp(rc.instance);
    milp_secs += seconds_since(t1);
    ++compared;
    if (ref.status == MilpStatus::Infeasible || s.status == MilpStatus::Infeasible) {
      infeasible += 1;
      mismatched += ref.status != s.status;
      continue;
    }
    const double d = rel_diff(s.objective, ref.objective);
    worst = std::max(worst, d);
    mismatched += d > 1e-6;
  }
  const double secs = seconds_since(t0);
  const bool ok = mismatched == 0 && secs < 60.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%.0f instances (%.0f infeasible), worst rel diff %.2g, ", compared, infeasible,
              worst) +
              fmt("%.1f s total, %.2f s in branch-and-bound", secs, milp_secs) +
              (mismatched ? ", " + std::to_string(mismatched) + " mismatches" : "")};
}

Outcome arbitrage() {
  FleetConfig c = arbitrage_config();
  BuiltModel b = build_with_prices(c, arbitrage_prices(), unit_travel(c));
  MilpSolution ref = oracle_solve(b.instance, 24);
  MilpSolution s = solve_milp(b.instance);
  bool pattern = s.has_solution();
  for (int t = 0; pattern && t < 8; ++t) {
    const double net = s.x[b.layout.column({VarKind::ChargeA, 0, t})] -
                       s.x[b.layout.column({VarKind::DischargeA, 0, t})];
    pattern = std::abs(net - (t < 4 ? 150.0 : -150.0)) <= 1e-6;
  }
  const bool ok = std::abs(s.objective + 12.0) <= 1e-6 && std::abs(ref.objective + 12.0) <= 1e-6 &&
                  pattern;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("milp %.9f, oracle %.9f", s.objective, ref.objective) +
              (pattern ? ", charge 4 steps then discharge 4" : ", wrong pattern")};
}

// Cost of the round-trip heuristic's schedule: its locations fixed, powers
// re-optimized.
double heuristic_cost(const FleetConfig& c, const PricePanel& p, const TravelTimeTable& tt) {
  BuiltModel b = build_with_prices(c, p, tt);
  auto start = tour_start(c, b, p, tt, {});
  if (!start) return kInfinity;
  MilpInstance fixed = b.instance;
  for (int j = 0; j < fixed.num_columns(); ++j) {
    if (fixed.is_integer(j)) fixed.set_bounds(j, (*start)[j], (*start)[j]);
  }
  LpSolution lp = solve_lp(fixed);
  if (lp.status != LpStatus::Optimal) return kInfinity;
  return evaluate_cost(extract_schedule(c, b, lp.x), p);
}

Outcome dominance() {
  int panels = 0, violations = 0, heuristic_checked = 0, not_optimal = 0;
  double margin = kInfinity;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FleetConfig c = fleet(2, 12, 1, 1.0);
    c.delivery.min_visits = {0, 1, 0};
    SyntheticMarketOptions o;
    o.horizon = c.horizon;
    o.seed = seed;
    o.spread = 0.02;
    o.spikes_per_day = 2.0;
    ScenarioSet s = single_scenario(synthetic_market(o).real_time);
    TravelTimeTable tt(c.distances_mi, c.horizon);
    SolveSettings exact;
    exact.limits.gap = 1e-9;
    ScenarioReport sp = run_scenario(c, s, tt, Scenario::Spatial, exact);
    ScenarioReport cf = run_scenario(c, s, tt, Scenario::Counterfactual, exact);
    for (const DayResult& d : sp.days) not_optimal += d.status != MilpStatus::Optimal;
    ++panels;
    violations += sp.total.cost > cf.total.cost + 1e-6;
    margin = std::min(margin, cf.total.cost - sp.total.cost);
    const double h = heuristic_cost(c, s.scenarios[0], tt);
    if (std::isfinite(h)) {
      ++heuristic_checked;
      violations += sp.total.cost > h + 1e-6;
    }
  }
  const bool ok = violations == 0 && not_optimal == 0 && panels >= 20;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%.0f panels, %.0f heuristic schedules, smallest counterfactual margin %.4f USD, "
              "%.0f violations",
              panels, heuristic_checked, margin, violations)};
}

Outcome audited_run() {
  const auto t0 = Clock::now();
  RunManifest m;
  m.config_path = FLEETARB_DATA_DIR "/small.cfg";
  m.limits.gap = 1e-4;
  // Four MILPs (two scenarios, two days) share the five minutes.
  m.limits.time_limit_s = 60.0;
  const RunInputs in = load_inputs(m);
  SolveSettings settings;
  settings.limits = m.limits;
  std::vector<ScenarioReport> reports;
  for (Scenario which : m.scenarios) {
    reports.push_back(
        run_scenario(in.config, single_scenario(in.real_time), in.travel, which, settings));
  }
  const double secs = seconds_since(t0);
  int violations = 0;
  double worst_gap = 0.0;
  for (const ScenarioReport& rep : reports) {
    AuditOptions ao;
    ao.mode = rep.scenario == Scenario::Stationary ? BuildMode::Stationary : BuildMode::Spatial;
    violations += static_cast<int>(audit(rep.schedule, in.config, in.travel, ao).size());
    for (const DayResult& d : rep.days) worst_gap = std::max(worst_gap, d.gap);
  }
  const bool audit_ok = violations == 0 && in.config.num_vehicles() == 3 &&
                        in.config.horizon.steps_per_day == 48 && in.config.horizon.num_days == 2;
  const bool ok = audit_ok && worst_gap <= 1e-4 && secs < 300.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          std::string(audit_ok ? "audit clean" : "audit violations") +
              fmt(" on 3 scenarios, worst gap %.3g (target 1e-4), %.0f s", worst_gap, secs)};
}

Outcome scenario_reduction() {
  FleetConfig c = load_config_file(FLEETARB_DATA_DIR "/small.cfg");
  c.horizon.num_days = 1;
  SyntheticMarketOptions o;
  o.horizon = c.horizon;
  o.horizon.num_days = 5;
  o.seed = 5;
  ScenarioSet s = scenarios_from_days(synthetic_market(o).real_time, c.horizon.steps_per_day);
  TravelTimeTable tt(c.distances_mi, c.horizon);
  const std::string a = serialize(build(c, s, tt).instance);
  const std::string b = serialize(build(c, single_scenario(mean_panel(s)), tt).instance);
  return {s.size() == 5 && a == b ? Verdict::Pass : Verdict::Fail,
          std::to_string(s.size()) + " scenarios, " + std::to_string(a.size()) +
              " serialized bytes, " + (a == b ? "identical" : "different")};
}

Outcome forecast() {
  FleetConfig c = load_config_file(FLEETARB_DATA_DIR "/tiny.cfg");
  SyntheticMarketOptions o;
  o.horizon = c.horizon;
  o.seed = 3;
  SyntheticMarket mk = synthetic_market(o);
  TravelTimeTable tt(c.distances_mi, c.horizon);
  ForecastReplay same = forecast_replay(c, mk.day_ahead, mk.day_ahead, tt);
  double worst_identity = 0.0;
  for (const ForecastDay& d : same.days) worst_identity = std::max(worst_identity, std::abs(d.delta));
  PricePanel shifted = mk.day_ahead;
  for (auto& s : shifted.series) {
    for (double& v : s.values) v += 0.01;
  }
  ForecastReplay up = forecast_replay(c, mk.day_ahead, shifted, tt);
  double worst_shift = 0.0;
  for (const ForecastDay& d : up.days) {
    worst_shift = std::max(worst_shift, std::abs(d.delta - 0.01 * d.net_energy_kwh));
  }
  const bool ok = worst_identity == 0.0 && worst_shift <= 1e-6 && up.days.size() == 2;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("perfect forecast max |delta| %.3g, shift max |delta - 0.01 * net| %.3g",
              worst_identity, worst_shift)};
}

Outcome mps_crosscheck() {
  const std::string python = FLEETARB_PYTHON;
  if (python.empty()) return {Verdict::Skip, "no Python interpreter found"};
  const fs::path dir = fs::temp_directory_path() / "fleetarb_acceptance_mps";
  fs::remove_all(dir);
  fs::create_directories(dir);
  RunManifest m;
  m.config_path = FLEETARB_DATA_DIR "/tiny.cfg";
  m.out_dir = dir.string();
  const RunInputs in = load_inputs(m);
  std::string detail;
  double worst = 0.0;
  for (int day = 0; day < in.config.horizon.num_days; ++day) {
    std::ostringstream out, err;
    if (cmd_export(m, day, out, err) != kExitOk) return {Verdict::Fail, "export failed"};
    DayProblem p = day_problem(in.config, in.real_time, BuildMode::Spatial, day);
    const double ours =
        solve_milp(build_with_prices(p.config, p.prices, in.travel, p.options).instance).objective;
    const fs::path mps = dir / ("day" + std::to_string(day) + ".mps");
    const fs::path result = dir / "highs.txt";
    const std::string cmd = python + " " + FLEETARB_CROSSCHECK + " " + mps.string() + " > " +
                            result.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    if (code == 3) return {Verdict::Skip, "highspy not installed"};
    std::istringstream line(slurp(result));
    std::string status;
    double theirs = 0.0;
    line >> status >> theirs;
    if (code != 0 || status != "optimal") return {Verdict::Fail, "HiGHS: " + slurp(result)};
    worst = std::max(worst, rel_diff(ours, theirs));
    detail += fmt("day %.0f ours %.6f HiGHS %.6f; ", day, ours, theirs);
  }
  return {worst <= 1e-5 ? Verdict::Pass : Verdict::Fail, detail + fmt("worst rel diff %.2g", worst)};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "fleetarb_acceptance_runs";
  fs::remove_all(root);
  RunManifest m;
  m.config_path = FLEETARB_DATA_DIR "/tiny.cfg";
  std::ostringstream out, err;
  m.out_dir = (root / "a").string();
  if (cmd_run(m, out, err) != kExitOk) return {Verdict::Fail, "first run failed: " + err.str()};
  m.out_dir = (root / "b").string();
  if (cmd_run(m, out, err) != kExitOk) return {Verdict::Fail, "second run failed: " + err.str()};
  int files = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    differing += slurp(e.path()) != slurp(root / "b" / fs::relative(e.path(), root / "a"));
  }
  return {files > 0 && differing == 0 ? Verdict::Pass : Verdict::Fail,
          fmt("%.0f files compared, %.0f differ", files, differing)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"AC1 oracle equivalence", oracle_equivalence},
      {"AC2 arbitrage optimum", arbitrage},
      {"AC3 spatial dominance", dominance},
      {"AC4 audited 3-truck run", audited_run},
      {"AC5 scenario reduction", scenario_reduction},
      {"AC6 forecast replay", forecast},
      {"AC7 MPS cross-check", mps_crosscheck},
      {"AC8 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("%s %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.verdict == Verdict::Fail;
  }
  return failed == 0 ? 0 : 1;
}
