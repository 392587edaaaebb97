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
#include "fleetarb/branch_and_bound.hpp"
#include "fleetarb/errors.hpp"
#include "fleetarb/schedule.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <random>
#include <sstream>

using namespace fleetarb;
using namespace fleetarb::testing;

namespace {

// Every vehicle parked at `site` for the whole horizon, doing nothing.
FleetSchedule parked(const FleetConfig& c, Location site) {
  FleetSchedule s;
  s.dt_hours = c.horizon.dt_hours;
  for (const VehicleSpec& v : c.vehicles) {
    StepPlan p;
    p.at[index_of(site)] = true;
    p.soc_kwh = v.e_init_kwh;
    s.steps.emplace_back(c.horizon.total_steps(), p);
  }
  return s;
}

bool flagged(const std::vector<Violation>& vs, const std::string& row) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.row == row; });
}

struct Solved {
  BuiltModel model;
  MilpSolution solution;
};

Solved solve_arbitrage() {
  FleetConfig c = arbitrage_config();
  Solved s{build_with_prices(c, arbitrage_prices(), unit_travel(c)), {}};
  s.solution = solve_milp(s.model.instance);
  return s;
}

}  // namespace

TEST_CASE("cost of simple schedules") {
  FleetConfig c = fleet(1, 4);
  FleetSchedule s = parked(c, Location::A);
  CHECK(evaluate_cost(s, flat_panel(4, 0.04)) == 0.0);
  s.steps[0][2].charge_kw[0] = 150.0;
  CHECK(evaluate_cost(s, flat_panel(4, 0.04)) == doctest::Approx(1.50).epsilon(1e-12));
  CHECK(net_grid_energy(s) == doctest::Approx(37.5));
  CHECK_THROWS_AS(evaluate_cost(s, flat_panel(5, 0.04)), DataError);
}

TEST_CASE("accounting") {
  FleetConfig c = fleet(1, 8);
  TravelTimeTable tt(c.distances_mi, c.horizon);
  PricePanel p = flat_panel(8, 0.04);

  FleetSchedule idle = parked(c, Location::A);
  CHECK(account(idle, c, tt, p) == Metrics{});

  FleetSchedule one = idle;
  one.steps[0][0].charge_kw[0] = 150.0;
  for (int t = 0; t < 8; ++t) one.steps[0][t].soc_kwh += 37.5;
  CHECK(account(one, c, tt, p).throughput_kwh == doctest::Approx(37.5));

  // San Marcos to Austin, 31 mi: three steps in transit at 60 mi/h.
  FleetSchedule trip = parked(c, Location::B);
  for (int t = 1; t < 8; ++t) {
    trip.steps[0][t].at = {false, false, t >= 4};
  }
  Metrics m = account(trip, c, tt, p);
  CHECK(m.distance_mi == doctest::Approx(31.0));
  CHECK(m.throughput_kwh == doctest::Approx(70.0 * 0.25 * 3));
  CHECK(count_trips(trip)[1][2] == 1);

  FleetSchedule quick = trip;
  quick.steps[0][3].at[2] = true;
  CHECK_THROWS_AS(account(quick, c, tt, p), ScheduleError);
}

TEST_CASE("trip detection") {
  FleetConfig c = fleet(1, 8);
  FleetSchedule s = parked(c, Location::A);
  CHECK(count_trips(s) == TripMatrix{});
  // A, drive, B, B, drive, A ...
  s.steps[0][1].at = {false, false, false};
  s.steps[0][2].at = {false, true, false};
  s.steps[0][3].at = {false, true, false};
  s.steps[0][4].at = {false, false, false};
  TripMatrix m = count_trips(s);
  CHECK(m[0][1] == 1);
  CHECK(m[1][0] == 1);
  CHECK(m[0][2] + m[2][0] + m[1][2] + m[2][1] == 0);
  // A round trip that comes back to the same site is not a trip.
  s.steps[0][2].at = {true, false, false};
  s.steps[0][3].at = {true, false, false};
  CHECK(count_trips(s) == TripMatrix{});
}

TEST_CASE("overlap cancellation") {
  FleetConfig c = fleet(1, 4);
  FleetSchedule s = parked(c, Location::A);
  s.steps[0][0].charge_kw[0] = 100.0;
  s.steps[0][0].discharge_kw[0] = 40.0;
  s.steps[0][1].charge_kw[0] = 20.0;
  s.steps[0][1].discharge_kw[0] = 50.0;
  std::mt19937_64 rng(1);
  PricePanel p = random_panel(rng, 4);
  const double before = evaluate_cost(s, p);
  cancel_overlap(s, c);
  CHECK(evaluate_cost(s, p) == doctest::Approx(before).epsilon(1e-12));
  CHECK(s.steps[0][0].charge_kw[0] == doctest::Approx(60.0));
  CHECK(s.steps[0][0].discharge_kw[0] == 0.0);
  CHECK(s.steps[0][1].charge_kw[0] == 0.0);
  CHECK(s.steps[0][1].discharge_kw[0] == doctest::Approx(30.0));

  c.vehicles[0].eta_c = 0.9;
  c.vehicles[0].eta_d = 0.95;
  FleetSchedule lossy = parked(c, Location::A);
  lossy.steps[0][0].charge_kw[0] = 100.0;
  lossy.steps[0][0].discharge_kw[0] = 40.0;
  const double stored = 0.9 * 100.0 - 40.0 / 0.95;
  cancel_overlap(lossy, c);
  const StepPlan& q = lossy.steps[0][0];
  CHECK(0.9 * q.charge_kw[0] - q.discharge_kw[0] / 0.95 == doctest::Approx(stored));
  CHECK(q.charge_kw[0] <= 100.0);
  CHECK(q.discharge_kw[0] == 0.0);
}

TEST_CASE("solver schedule matches the objective and passes audit") {
  Solved s = solve_arbitrage();
  FleetConfig c = arbitrage_config();
  FleetSchedule sched = extract_schedule(c, s.model, s.solution.x);
  CHECK(evaluate_cost(sched, arbitrage_prices()) ==
        doctest::Approx(s.solution.objective).epsilon(1e-9));
  CHECK(audit(sched, c, unit_travel(c)).empty());
}

TEST_CASE("random solutions are gated and conserve energy") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    RandomCase rc = random_case(rng);
    MilpSolution s = solve_milp(rc.instance);
    if (!s.has_solution()) continue;
    BuiltModel b = build_with_prices(rc.config, rc.prices, rc.travel);
    const ColumnLayout& lay = b.layout;
    for (int n = 0; n < lay.num_vehicles(); ++n) {
      for (int t = 0; t < lay.num_steps(); ++t) {
        for (Location l : kAllLocations) {
          const double flow = s.x[lay.column({charge_kind(l), n, t})] +
                              s.x[lay.column({discharge_kind(l), n, t})];
          if (flow > 1e-6) CHECK(s.x[lay.column({ind_kind(l), n, t})] > 0.5);
        }
      }
    }
    FleetSchedule sched = extract_schedule(rc.config, b, s.x);
    CHECK(evaluate_cost(sched, rc.prices) == doctest::Approx(s.objective).epsilon(1e-9));
    CHECK(audit(sched, rc.config, rc.travel).empty());
    cancel_overlap(sched, rc.config);
    CHECK(audit(sched, rc.config, rc.travel).empty());

    // With lossless batteries the grid covers exactly the driving energy.
    FleetConfig lossless = rc.config;
    bool ideal = true;
    for (const VehicleSpec& v : lossless.vehicles) ideal = ideal && v.eta_c == 1.0 && v.eta_d == 1.0;
    if (!ideal) continue;
    double driving = 0.0;
    for (int n = 0; n < sched.num_vehicles(); ++n) {
      for (const StepPlan& p : sched.steps[n]) {
        if (p.driving()) driving += lossless.vehicles[n].p_drive_kw * sched.dt_hours;
      }
    }
    CHECK(net_grid_energy(sched) == doctest::Approx(driving).epsilon(1e-9));
  }
}

TEST_CASE("audit names the broken row") {
  Solved s = solve_arbitrage();
  FleetConfig c = arbitrage_config();
  TravelTimeTable tt = unit_travel(c);
  const FleetSchedule good = extract_schedule(c, s.model, s.solution.x);

  FleetSchedule bad = good;
  bad.steps[0][3].soc_kwh += 5.0;
  CHECK(flagged(audit(bad, c, tt), "socdyn_n1_t3"));

  bad = good;
  bad.steps[0][2].at = {false, true, false};
  auto v = audit(bad, c, tt);
  CHECK(flagged(v, "gate_c_A_n1_t2"));
  CHECK(flagged(v, "travel_AB_n1_t1_k1"));

  bad = good;
  bad.steps[0][7].at = {false, false, true};
  CHECK(flagged(audit(bad, c, tt), "home_n1_d0"));

  bad = good;
  bad.steps[0][0].at = {true, true, false};
  CHECK(flagged(audit(bad, c, tt), "oneloc_n1_t0"));
  CHECK(flagged(audit(bad, c, tt), "travel_BA_n1_t0_k1"));

  bad = good;
  for (int t = 0; t < 8; ++t) bad.steps[0][t].soc_kwh -= 20.0;
  CHECK(flagged(audit(bad, c, tt), "eod_n1_d0"));

  FleetConfig deliver = c;
  deliver.delivery.min_visits = {0, 1, 0};
  CHECK(flagged(audit(good, deliver, tt), "deliver_B_d0"));

  AuditOptions stationary;
  stationary.mode = BuildMode::Stationary;
  bad = good;
  bad.steps[0][4].at = {false, false, false};
  CHECK(flagged(audit(bad, c, tt, stationary), "stationary_n1_t4"));
}

TEST_CASE("schedule CSV round trip") {
  std::mt19937_64 rng(5);
  RandomCase rc = random_case(rng);
  MilpSolution s = solve_milp(rc.instance);
  REQUIRE(s.has_solution());
  BuiltModel b = build_with_prices(rc.config, rc.prices, rc.travel);
  FleetSchedule sched = extract_schedule(rc.config, b, s.x);
  std::stringstream csv;
  write_schedule_csv(csv, sched, rc.config);
  FleetSchedule back = read_schedule_csv(csv, rc.config);
  CHECK(back == sched);

  std::istringstream broken("vehicle,step,at_A\n1,0,1\n");
  CHECK_THROWS_AS(read_schedule_csv(broken, rc.config), ScheduleError);
}
