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

#include <array>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "fleetarb/branch_and_bound.hpp"
#include "fleetarb/fleet_model.hpp"
#include "fleetarb/price_data.hpp"
#include "fleetarb/schedule.hpp"

namespace fleetarb {

enum class Scenario { Spatial, Counterfactual, Stationary };

const char* to_string(Scenario scenario);
std::optional<Scenario> parse_scenario(std::string_view name);

struct SolveSettings {
  // Applied to every MILP solved (one per day when days are independent).
  MilpLimits limits;
  LpOptions lp;
  // Seed each spatial solve with the round-trip heuristic.
  bool tour_start = true;
  // Solve one MILP per day when the model allows it (home return on, visit
  // windows per day). Off forces a single solve over the whole horizon.
  bool split_days = true;
  std::ostream* node_log = nullptr;
};

struct DayResult {
  int day = 0;
  Metrics metrics;           // settled on the evaluation prices
  double planned_cost = 0.0; // the same schedule on the planning prices
  MilpStatus status = MilpStatus::Optimal;
  double gap = 0.0;
  long nodes = 0;
};

// The model solved for one day of a split run: the day's slice of the config
// (energy carried over from the previous day) and of the prices.
struct DayProblem {
  FleetConfig config;
  PricePanel prices;
  BuildOptions options;
};

// Throws ConfigError when `day` is outside the horizon.
DayProblem day_problem(const FleetConfig& config, const PricePanel& prices, BuildMode mode,
                       int day);

struct Plan {
  FleetSchedule schedule;  // overlap already cancelled
  std::vector<DayResult> days;  // metrics left empty
};

// Solves the fleet model on `planning_prices` and returns the schedule. Throws
// InfeasibleError (with the day index) when a solve is infeasible and
// LimitReachedError when a limit stops a solve without any schedule.
Plan plan_fleet(const FleetConfig& config, const PricePanel& planning_prices,
                const TravelTimeTable& travel, BuildMode mode, const SolveSettings& settings = {});

struct ScenarioReport {
  Scenario scenario = Scenario::Spatial;
  std::vector<DayResult> days;
  Metrics total;
  TripMatrix trips{};
  // Per step: fleet grid power (charge - discharge, kW) and vehicles parked,
  // by site; fleet stored energy.
  std::vector<std::array<double, kNumLocations>> net_power_kw;
  std::vector<std::array<int, kNumLocations>> vehicle_counts;
  std::vector<double> fleet_soc_kwh;
  FleetSchedule schedule;
};

// Spatial plans on the scenario-mean prices; Counterfactual plans on their
// per-step cross-site mean and is settled on the scenario mean; Stationary
// parks every vehicle at the warehouse (A).
ScenarioReport run_scenario(const FleetConfig& config, const ScenarioSet& scenarios,
                            const TravelTimeTable& travel, Scenario which,
                            const SolveSettings& settings = {});

// Fills metrics and the per-step traces for an existing schedule.
ScenarioReport make_report(Scenario which, const FleetConfig& config, Plan plan,
                           const TravelTimeTable& travel, const PricePanel& settle_prices);

struct ForecastDay {
  int day = 0;
  double planned_cost = 0.0;
  double settled_cost = 0.0;
  double delta = 0.0;           // settled - planned
  double net_energy_kwh = 0.0;  // grid energy charged minus discharged
};

struct ForecastReplay {
  std::vector<ForecastDay> days;
  double planned_cost = 0.0;
  double settled_cost = 0.0;
  FleetSchedule schedule;
};

// Plans on day-ahead prices (spatial model) and settles the plan on real-time
// prices.
ForecastReplay forecast_replay(const FleetConfig& config, const PricePanel& day_ahead,
                               const PricePanel& real_time, const TravelTimeTable& travel,
                               const SolveSettings& settings = {});

}  // namespace fleetarb
