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
#include "fleetarb/model_builder.hpp"
#include "helpers.hpp"

#include <random>

using namespace fleetarb;
using namespace fleetarb::testing;

namespace {

int count_named(const MilpInstance& m, const std::string& prefix) {
  int c = 0;
  for (int j = 0; j < m.num_columns(); ++j) c += m.col_name(j).rfind(prefix, 0) == 0;
  return c;
}

}  // namespace

TEST_CASE("column counts for one vehicle over eight steps") {
  FleetConfig c = fleet(1, 8);
  BuiltModel b = build_with_prices(c, flat_panel(8, 0.05), unit_travel(c));
  const MilpInstance& m = b.instance;
  CHECK(m.num_integer_columns() == 24);
  CHECK(count_named(m, "c_") + count_named(m, "d_") == 48);
  CHECK(count_named(m, "soc_") == 8);
  CHECK(m.num_columns() == 80);
  CHECK_NOTHROW(m.check());
}

TEST_CASE("layout round trip") {
  ColumnLayout lay(3, 7, 2, {false, true, true});
  for (int j = 0; j < lay.num_columns(); ++j) CHECK(lay.column(lay.decode(j)) == j);
  CHECK(lay.find({VarKind::VisitA, 0, 0}) == -1);
  CHECK(lay.find({VarKind::VisitC, 2, 1}) == lay.num_columns() - 1);
}

TEST_CASE("stationary mode fixes every location") {
  FleetConfig c = fleet(2, 8);
  c.delivery.min_visits = {0, 1, 1};
  BuildOptions o;
  o.mode = BuildMode::Stationary;
  BuiltModel b = build_with_prices(c, flat_panel(8, 0.05), unit_travel(c), o);
  CHECK(b.instance.num_free_integer_columns() == 0);
  CHECK(b.instance.find_row("deliver_B_d0") == -1);
  for (int j = 0; j < b.instance.num_columns(); ++j) {
    if (b.instance.col_name(j).rfind("ind_A", 0) == 0) CHECK(b.instance.col_lower(j) == 1.0);
    if (b.instance.col_name(j).rfind("ind_B", 0) == 0) CHECK(b.instance.col_upper(j) == 0.0);
  }
}

TEST_CASE("delivery requirement above fleet size") {
  FleetConfig c = fleet(10, 8);
  c.delivery.min_visits = {11, 0, 0};
  CHECK_THROWS_AS(build_with_prices(c, flat_panel(8, 0.05), unit_travel(c)), InfeasibleError);
}

TEST_CASE("horizon mismatch") {
  FleetConfig c = fleet(1, 8);
  CHECK_THROWS_AS(build_with_prices(c, flat_panel(7, 0.05), unit_travel(c)), DataError);
}

TEST_CASE("counterfactual changes only the objective") {
  FleetConfig c = fleet(2, 8);
  c.delivery.min_visits = {0, 1, 0};
  std::mt19937_64 rng(5);
  ScenarioSet s = single_scenario(random_panel(rng, 8));
  TravelTimeTable tt = unit_travel(c);
  BuiltModel sp = build(c, s, tt);
  BuiltModel cf = build_counterfactual(c, s, tt);
  REQUIRE(sp.instance.num_rows() == cf.instance.num_rows());
  REQUIRE(sp.instance.num_columns() == cf.instance.num_columns());
  for (int i = 0; i < sp.instance.num_rows(); ++i) {
    CHECK(sp.instance.row_name(i) == cf.instance.row_name(i));
    CHECK(sp.instance.row_sense(i) == cf.instance.row_sense(i));
    CHECK(sp.instance.rhs(i) == cf.instance.rhs(i));
    const auto a = sp.instance.row(i);
    const auto b = cf.instance.row(i);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  MilpInstance masked = cf.instance;
  for (int j = 0; j < masked.num_columns(); ++j) masked.set_cost(j, sp.instance.cost(j));
  CHECK(masked == sp.instance);
}

TEST_CASE("counterfactual with uniform prices") {
  FleetConfig c = fleet(1, 8);
  PricePanel p(8);
  for (int t = 0; t < 8; ++t) {
    for (Location l : kAllLocations) p.price(l, t) = 0.01 * (t + 1);
  }
  TravelTimeTable tt = unit_travel(c);
  CHECK(build(c, single_scenario(p), tt).instance ==
        build_counterfactual(c, single_scenario(p), tt).instance);
}

TEST_CASE("counterfactual coefficient is the cross-site mean") {
  FleetConfig c = fleet(1, 8);
  PricePanel p(8, 0.0);
  p.price(Location::B, 3) = 0.03;
  p.price(Location::C, 3) = 0.06;
  BuiltModel cf = build_counterfactual(c, single_scenario(p), unit_travel(c));
  for (Location l : kAllLocations) {
    const int cc = cf.layout.column({charge_kind(l), 0, 3});
    const int dc = cf.layout.column({discharge_kind(l), 0, 3});
    CHECK(cf.instance.cost(cc) == doctest::Approx(0.03 * 0.25).epsilon(1e-12));
    CHECK(cf.instance.cost(dc) == doctest::Approx(-0.03 * 0.25).epsilon(1e-12));
  }
}

TEST_CASE("scenario set reduces to its mean panel") {
  FleetConfig c = fleet(2, 8);
  c.delivery.min_visits = {0, 1, 1};
  std::mt19937_64 rng(9);
  ScenarioSet s;
  for (int k = 0; k < 5; ++k) s.scenarios.push_back(random_panel(rng, 8));
  TravelTimeTable tt = unit_travel(c);
  const MilpInstance a = build(c, s, tt).instance;
  const MilpInstance b = build(c, single_scenario(mean_panel(s)), tt).instance;
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("named rows exist") {
  FleetConfig c = fleet(1, 8, 2);
  c.vehicles[0].id = 7;
  c.delivery.min_visits = {0, 1, 0};
  BuiltModel b = build_with_prices(c, flat_panel(16, 0.05), unit_travel(c));
  const MilpInstance& m = b.instance;
  for (const char* name : {"gate_c_A_n7_t0", "gate_d_C_n7_t15", "socdyn_n7_t3", "oneloc_n7_t9",
                           "eod_n7_d1", "start_n7", "home_n7_d0", "home_n7_d1",
                           "visitlb_B_n7_t8", "visitub_B_n7_d1", "deliver_B_d1"}) {
    CHECK_MESSAGE(m.find_row(name) >= 0, name);
  }
  CHECK(m.find_row("travel_AB_n7_t0_k1") >= 0);
  CHECK(m.find_row("travel_AB_n7_t15_k1") == -1);
}

TEST_CASE("travel rows span the table duration") {
  FleetConfig c = fleet(1, 12);
  TravelTimeTable tt(c.distances_mi, c.horizon);
  // 31 mi at 60 mi/h over 15 minute steps.
  CHECK(tt.steps(Location::B, Location::C, 0) == 3);
  BuiltModel b = build_with_prices(c, flat_panel(12, 0.05), tt);
  CHECK(b.instance.find_row("travel_BC_n1_t2_k3") >= 0);
  CHECK(b.instance.find_row("travel_BC_n1_t2_k4") == -1);
}

TEST_CASE("continuing from home") {
  FleetConfig c = fleet(1, 12);
  TravelTimeTable tt(c.distances_mi, c.horizon);
  BuildOptions o;
  o.continue_from_home = true;
  BuiltModel b = build_with_prices(c, flat_panel(12, 0.05), tt, o);
  CHECK(b.instance.find_row("start_n1") == -1);
  const int ab = tt.steps(Location::A, Location::B, 0);
  for (int t = 0; t < 12; ++t) {
    const int j = b.layout.column({VarKind::IndB, 0, t});
    CHECK(b.instance.col_upper(j) == (t < ab ? 0.0 : 1.0));
  }
}
