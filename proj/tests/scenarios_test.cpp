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

#include "doctest.h"
#include "fleetarb/errors.hpp"
#include "fleetarb/scenarios.hpp"
#include "helpers.hpp"

#include <random>

using namespace fleetarb;
using namespace fleetarb::testing;

namespace {

// Hourly steps: 31 and 50 mi take one step, 81 mi two.
FleetConfig hourly(int vehicles, int steps_per_day, int days) {
  return fleet(vehicles, steps_per_day, days, 1.0);
}

TravelTimeTable road(const FleetConfig& c) { return TravelTimeTable(c.distances_mi, c.horizon); }

PricePanel spiky(const Horizon& h, std::uint64_t seed) {
  SyntheticMarketOptions o;
  o.horizon = h;
  o.seed = seed;
  o.spread = 0.03;
  o.spikes_per_day = 2.0;
  return synthetic_market(o).real_time;
}

SolveSettings exact() {
  SolveSettings s;
  s.limits.gap = 1e-9;
  return s;
}

}  // namespace

TEST_CASE("scenario names") {
  CHECK(parse_scenario("spatial") == Scenario::Spatial);
  CHECK(parse_scenario("counterfactual") == Scenario::Counterfactual);
  CHECK(parse_scenario("stationary") == Scenario::Stationary);
  CHECK(!parse_scenario("mobile"));
  CHECK(std::string(to_string(Scenario::Counterfactual)) == "counterfactual");
}

TEST_CASE("stationary fleet with flat prices stays idle") {
  FleetConfig c = hourly(2, 8, 2);
  ScenarioReport r =
      run_scenario(c, single_scenario(flat_panel(16, 0.05)), road(c), Scenario::Stationary);
  CHECK(std::abs(r.total.cost) <= 1e-9);
  CHECK(r.total.distance_mi == 0.0);
  CHECK(r.trips == TripMatrix{});
  for (const auto& counts : r.vehicle_counts) CHECK(counts[0] == 2);
}

TEST_CASE("counterfactual equals spatial when sites share prices") {
  FleetConfig c = hourly(2, 8, 2);
  c.delivery.min_visits = {0, 1, 0};
  std::mt19937_64 rng(3);
  PricePanel base = random_panel(rng, 16);
  PricePanel p = base;
  for (Location l : kAllLocations) p.series[index_of(l)].values = base.series[0].values;
  ScenarioSet s = single_scenario(p);
  ScenarioReport sp = run_scenario(c, s, road(c), Scenario::Spatial);
  ScenarioReport cf = run_scenario(c, s, road(c), Scenario::Counterfactual);
  CHECK(sp.total.cost == cf.total.cost);
  CHECK(sp.schedule == cf.schedule);
}

TEST_CASE("spatial dominates") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    FleetConfig c = hourly(2, 10, 2);
    c.delivery.min_visits = {0, 1, 0};
    ScenarioSet s = single_scenario(spiky(c.horizon, seed));
    ScenarioReport sp = run_scenario(c, s, road(c), Scenario::Spatial, exact());
    ScenarioReport cf = run_scenario(c, s, road(c), Scenario::Counterfactual, exact());
    for (const DayResult& d : sp.days) CHECK(d.status == MilpStatus::Optimal);
    CHECK(sp.total.cost <= cf.total.cost + 1e-6);
  }
}

TEST_CASE("totals, periodic energy and deliveries") {
  FleetConfig c = hourly(2, 10, 3);
  c.delivery.min_visits = {0, 1, 1};
  ScenarioSet s = single_scenario(spiky(c.horizon, 9));
  TravelTimeTable tt = road(c);
  for (Scenario which : {Scenario::Spatial, Scenario::Counterfactual, Scenario::Stationary}) {
    CAPTURE(to_string(which));
    ScenarioReport r = run_scenario(c, s, tt, which);
    REQUIRE(r.days.size() == 3);
    Metrics sum;
    for (const DayResult& d : r.days) {
      sum.cost += d.metrics.cost;
      sum.distance_mi += d.metrics.distance_mi;
      sum.throughput_kwh += d.metrics.throughput_kwh;
    }
    CHECK(sum.cost == doctest::Approx(r.total.cost).epsilon(1e-12));
    CHECK(sum.distance_mi == doctest::Approx(r.total.distance_mi));
    CHECK(sum.throughput_kwh == doctest::Approx(r.total.throughput_kwh));

    double final_energy = 0.0;
    for (const VehicleSpec& v : c.vehicles) final_energy += v.e_final_kwh;
    for (int k = 1; k <= 3; ++k) {
      CHECK(r.fleet_soc_kwh[k * 10 - 1] == doctest::Approx(final_energy));
    }

    AuditOptions ao;
    ao.mode = which == Scenario::Stationary ? BuildMode::Stationary : BuildMode::Spatial;
    CHECK(audit(r.schedule, c, tt, ao).empty());
  }
}

TEST_CASE("one solve per day matches one solve for the whole horizon") {
  FleetConfig c = hourly(1, 4, 2);
  c.vehicles[0].e_init_kwh = c.vehicles[0].e_final_kwh = 300.0;
  TravelTimeTable tt = road(c);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    PricePanel p = random_panel(rng, 8);
    SolveSettings split = exact();
    split.tour_start = false;
    SolveSettings whole = split;
    whole.split_days = false;
    Plan a = plan_fleet(c, p, tt, BuildMode::Spatial, split);
    Plan b = plan_fleet(c, p, tt, BuildMode::Spatial, whole);
    MilpSolution ref = oracle_solve(build_with_prices(c, p, tt).instance, 24);
    REQUIRE(ref.status == MilpStatus::Optimal);
    CHECK(evaluate_cost(a.schedule, p) == doctest::Approx(ref.objective).epsilon(1e-6));
    CHECK(evaluate_cost(b.schedule, p) == doctest::Approx(ref.objective).epsilon(1e-6));
  }
}

TEST_CASE("day problems") {
  FleetConfig c = hourly(1, 4, 2);
  c.vehicles[0].e_final_kwh = 350.0;
  PricePanel p = flat_panel(8, 0.05);
  DayProblem d1 = day_problem(c, p, BuildMode::Spatial, 1);
  CHECK(d1.config.vehicles[0].e_init_kwh == 350.0);
  CHECK(d1.options.continue_from_home);
  CHECK(d1.prices.steps() == 4);
  CHECK_FALSE(day_problem(c, p, BuildMode::Spatial, 0).options.continue_from_home);
  CHECK_THROWS_AS(day_problem(c, p, BuildMode::Spatial, 2), ConfigError);
}

TEST_CASE("infeasible day is reported") {
  FleetConfig c = hourly(1, 3, 1);
  c.delivery.min_visits = {0, 0, 1};
  TravelTimeTable tt = road(c);
  tt.set_constant(Location::A, Location::C, 3);
  try {
    plan_fleet(c, flat_panel(3, 0.05), tt, BuildMode::Spatial);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("day 0") != std::string::npos);
  }
}

TEST_CASE("forecast replay") {
  FleetConfig c = hourly(2, 10, 2);
  c.delivery.min_visits = {0, 1, 0};
  TravelTimeTable tt = road(c);
  const PricePanel da = spiky(c.horizon, 4);

  ForecastReplay same = forecast_replay(c, da, da, tt);
  for (const ForecastDay& d : same.days) CHECK(d.delta == 0.0);
  CHECK(same.planned_cost == same.settled_cost);

  PricePanel shifted = da;
  for (auto& s : shifted.series) {
    for (double& v : s.values) v += 0.01;
  }
  ForecastReplay up = forecast_replay(c, da, shifted, tt);
  CHECK(up.schedule == same.schedule);
  for (const ForecastDay& d : up.days) {
    CHECK(d.delta == doctest::Approx(0.01 * d.net_energy_kwh).epsilon(1e-9));
  }

  // A surprise spike during a planned charge step.
  int step = -1, site = -1, vehicle = -1;
  for (int n = 0; n < same.schedule.num_vehicles() && step < 0; ++n) {
    for (int t = 0; t < same.schedule.num_steps() && step < 0; ++t) {
      for (int l = 0; l < kNumLocations; ++l) {
        if (same.schedule.steps[n][t].charge_kw[l] > 1.0) {
          step = t;
          site = l;
          vehicle = n;
          break;
        }
      }
    }
  }
  REQUIRE(step >= 0);
  PricePanel spiked = da;
  spiked.series[site].values[step] += 0.5;
  ForecastReplay hit = forecast_replay(c, da, spiked, tt);
  double charged = 0.0;
  for (const auto& row : same.schedule.steps) {
    charged += (row[step].charge_kw[site] - row[step].discharge_kw[site]) * same.schedule.dt_hours;
  }
  CHECK(vehicle >= 0);
  const ForecastDay& day = hit.days[step / 10];
  CHECK(day.delta > 0.0);
  CHECK(day.delta == doctest::Approx(0.5 * charged).epsilon(1e-9));
  CHECK(hit.settled_cost - hit.planned_cost == doctest::Approx(0.5 * charged).epsilon(1e-9));
}
