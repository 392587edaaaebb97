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

#include "fleetarb/scenarios.hpp"

#include <string>

#include "fleetarb/errors.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/tour_heuristic.hpp"

namespace fleetarb {

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Spatial: return "spatial";
    case Scenario::Counterfactual: return "counterfactual";
    case Scenario::Stationary: return "stationary";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  if (name == "spatial") return Scenario::Spatial;
  if (name == "counterfactual") return Scenario::Counterfactual;
  if (name == "stationary") return Scenario::Stationary;
  return std::nullopt;
}

namespace {

struct Solved {
  FleetSchedule schedule;
  DayResult result;
};

Solved solve_one(const FleetConfig& config, const PricePanel& prices,
                 const TravelTimeTable& travel, const BuildOptions& options,
                 const SolveSettings& settings, int day) {
  const std::string where = day >= 0 ? "day " + std::to_string(day) + ": " : std::string();
  BuiltModel model;
  try {
    model = build_with_prices(config, prices, travel, options);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(where + e.what(), day);
  }

  MilpOptions mo;
  mo.limits = settings.limits;
  mo.lp = settings.lp;
  mo.node_log = settings.node_log;
  if (settings.tour_start && options.mode == BuildMode::Spatial) {
    if (auto start = tour_start(config, model, prices, travel, options, settings.lp)) {
      mo.start = std::move(*start);
    }
  }
  const MilpSolution sol = solve_milp(model.instance, mo);
  if (sol.status == MilpStatus::Infeasible) {
    throw InfeasibleError(where + "no schedule satisfies the fleet constraints", day);
  }
  if (!sol.has_solution()) {
    throw LimitReachedError(where + "solver limit reached before any schedule was found");
  }

  Solved out;
  out.schedule = extract_schedule(config, model, sol.x);
  cancel_overlap(out.schedule, config);
  out.result.day = std::max(day, 0);
  out.result.planned_cost = evaluate_cost(out.schedule, prices);
  out.result.status = sol.status;
  out.result.gap = sol.gap;
  out.result.nodes = sol.nodes;
  return out;
}

}  // namespace

DayProblem day_problem(const FleetConfig& config, const PricePanel& prices, BuildMode mode,
                       int day) {
  const Horizon& h = config.horizon;
  if (day < 0 || day >= h.num_days) {
    throw ConfigError("day out of range: " + std::to_string(day) + " (horizon has " +
                      std::to_string(h.num_days) + " days)");
  }
  DayProblem p;
  p.config = config;
  p.config.horizon.num_days = 1;
  if (day > 0) {
    for (VehicleSpec& v : p.config.vehicles) v.e_init_kwh = v.e_final_kwh;
  }
  p.prices = slice(prices, day * h.steps_per_day, h.steps_per_day);
  p.options.mode = mode;
  p.options.continue_from_home = mode == BuildMode::Spatial && day > 0;
  return p;
}

Plan plan_fleet(const FleetConfig& config, const PricePanel& planning_prices,
                const TravelTimeTable& travel, BuildMode mode, const SolveSettings& settings) {
  validate(config);
  const Horizon& h = config.horizon;
  if (planning_prices.steps() != h.total_steps()) {
    throw DataError("price panel has " + std::to_string(planning_prices.steps()) +
                    " steps but the horizon has " + std::to_string(h.total_steps()));
  }
  const bool spatial = mode == BuildMode::Spatial;
  // Days decouple when each one ends at a fixed energy and, for the spatial
  // model, at home with its own delivery window.
  const bool split = settings.split_days && h.num_days > 1 &&
                     (!spatial || (config.home_return &&
                                   config.delivery.window == VisitWindow::PerDay));

  Plan plan;
  if (!split) {
    Solved s = solve_one(config, planning_prices, travel, {mode}, settings,
                         h.num_days == 1 ? 0 : -1);
    // One solve covers every day; report its status on each of them.
    for (int k = 0; k < h.num_days; ++k) {
      DayResult r = s.result;
      r.day = k;
      plan.days.push_back(r);
    }
    FleetSchedule whole = s.schedule;
    for (int k = 0; k < h.num_days; ++k) {
      FleetSchedule day;
      day.dt_hours = whole.dt_hours;
      for (const auto& row : whole.steps) {
        day.steps.emplace_back(row.begin() + k * h.steps_per_day,
                               row.begin() + (k + 1) * h.steps_per_day);
      }
      plan.days[k].planned_cost =
          evaluate_cost(day, slice(planning_prices, k * h.steps_per_day, h.steps_per_day));
    }
    plan.schedule = std::move(whole);
    return plan;
  }

  std::vector<FleetSchedule> days;
  for (int k = 0; k < h.num_days; ++k) {
    const DayProblem p = day_problem(config, planning_prices, mode, k);
    Solved s = solve_one(p.config, p.prices, travel, p.options, settings, k);
    days.push_back(std::move(s.schedule));
    plan.days.push_back(s.result);
  }
  plan.schedule = concatenate(days);
  return plan;
}

ScenarioReport make_report(Scenario which, const FleetConfig& config, Plan plan,
                           const TravelTimeTable& travel, const PricePanel& settle_prices) {
  ScenarioReport r;
  r.scenario = which;
  r.schedule = std::move(plan.schedule);
  r.days = std::move(plan.days);
  const std::vector<Metrics> per_day = account_by_day(r.schedule, config, travel, settle_prices);
  for (std::size_t k = 0; k < r.days.size() && k < per_day.size(); ++k) {
    r.days[k].metrics = per_day[k];
    r.total.cost += per_day[k].cost;
    r.total.distance_mi += per_day[k].distance_mi;
    r.total.throughput_kwh += per_day[k].throughput_kwh;
  }
  r.trips = count_trips(r.schedule);

  const int T = r.schedule.num_steps();
  r.net_power_kw.assign(static_cast<std::size_t>(T), {0.0, 0.0, 0.0});
  r.vehicle_counts.assign(static_cast<std::size_t>(T), {0, 0, 0});
  r.fleet_soc_kwh.assign(static_cast<std::size_t>(T), 0.0);
  for (const auto& row : r.schedule.steps) {
    for (int t = 0; t < T; ++t) {
      for (int l = 0; l < kNumLocations; ++l) {
        r.net_power_kw[t][l] += row[t].charge_kw[l] - row[t].discharge_kw[l];
        r.vehicle_counts[t][l] += row[t].at[l];
      }
      r.fleet_soc_kwh[t] += row[t].soc_kwh;
    }
  }
  return r;
}

ScenarioReport run_scenario(const FleetConfig& config, const ScenarioSet& scenarios,
                            const TravelTimeTable& travel, Scenario which,
                            const SolveSettings& settings) {
  if (scenarios.size() == 0) throw DataError("scenario set is empty");
  const PricePanel truth = mean_panel(scenarios);
  switch (which) {
    case Scenario::Spatial:
      return make_report(which, config,
                         plan_fleet(config, truth, travel, BuildMode::Spatial, settings), travel,
                         truth);
    case Scenario::Counterfactual:
      return make_report(
          which, config,
          plan_fleet(config, time_only_panel(truth), travel, BuildMode::Spatial, settings),
          travel, truth);
    case Scenario::Stationary:
      return make_report(which, config,
                         plan_fleet(config, truth, travel, BuildMode::Stationary, settings),
                         travel, truth);
  }
  throw std::invalid_argument("unknown scenario");
}

ForecastReplay forecast_replay(const FleetConfig& config, const PricePanel& day_ahead,
                               const PricePanel& real_time, const TravelTimeTable& travel,
                               const SolveSettings& settings) {
  if (day_ahead.steps() != real_time.steps()) {
    throw DataError("day-ahead and real-time panels differ in length");
  }
  Plan plan = plan_fleet(config, day_ahead, travel, BuildMode::Spatial, settings);
  ForecastReplay out;
  const int spd = config.horizon.steps_per_day;
  for (int k = 0; k < config.horizon.num_days; ++k) {
    FleetSchedule day;
    day.dt_hours = plan.schedule.dt_hours;
    for (const auto& row : plan.schedule.steps) {
      day.steps.emplace_back(row.begin() + k * spd, row.begin() + (k + 1) * spd);
    }
    ForecastDay d;
    d.day = k;
    d.planned_cost = evaluate_cost(day, slice(day_ahead, k * spd, spd));
    d.settled_cost = evaluate_cost(day, slice(real_time, k * spd, spd));
    d.delta = d.settled_cost - d.planned_cost;
    d.net_energy_kwh = net_grid_energy(day);
    out.planned_cost += d.planned_cost;
    out.settled_cost += d.settled_cost;
    out.days.push_back(d);
  }
  out.schedule = std::move(plan.schedule);
  return out;
}

}  // namespace fleetarb
