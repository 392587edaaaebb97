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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fleetarb/branch_and_bound.hpp"
#include "fleetarb/fleet_model.hpp"
#include "fleetarb/price_data.hpp"
#include "fleetarb/scenarios.hpp"

namespace fleetarb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // verification or audit failed
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitLimit = 5;

struct RunManifest {
  std::string config_path;
  // Without a real-time file, a synthetic market is drawn from `seed` and
  // its day-ahead series is used for the forecast replay.
  std::string prices_real_path;
  std::string prices_dayahead_path;
  std::string traffic_path;
  std::vector<Scenario> scenarios = {Scenario::Spatial, Scenario::Counterfactual,
                                     Scenario::Stationary};
  int days = 0;  // 0 keeps the configured number of days
  std::uint64_t seed = 1;
  MilpLimits limits;
  std::string out_dir = "out";
  std::ostream* node_log = nullptr;
};

struct RunInputs {
  FleetConfig config;
  PricePanel real_time;
  std::optional<PricePanel> day_ahead;
  TravelTimeTable travel;
};

// Throws ConfigError or DataError.
RunInputs load_inputs(const RunManifest& manifest);

struct RunResult {
  std::vector<ScenarioReport> reports;
  std::optional<ForecastReplay> forecast;
};

RunResult run_manifest(const RunManifest& manifest, const RunInputs& inputs);

// One directory per scenario under `out_dir` (report.json, metrics.csv,
// net_power.csv, vehicle_counts.csv, soc.csv, trips.csv, schedule.csv), plus
// summary.csv and, after a forecast replay, forecast.csv.
void write_outputs(const RunResult& result, const RunInputs& inputs, const std::string& out_dir);

void print_summary(std::ostream& out, const RunResult& result);

// The commands behind the CLI. Each returns a process exit code and never
// throws for input problems.
int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_export(const RunManifest& manifest, int day, std::ostream& out, std::ostream& err);
int cmd_verify(const RunManifest& manifest, int max_binaries, std::ostream& out,
               std::ostream& err);
int cmd_audit(const RunManifest& manifest, const std::string& schedule_path, std::ostream& out,
              std::ostream& err);

}  // namespace fleetarb
