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

#include <algorithm>
#include <cmath>
#include <random>

#include "fleetarb/fleet_model.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/price_data.hpp"

namespace fleetarb::testing {

inline VehicleSpec truck(int id, double e_init = 400.0, Location home = Location::A) {
  VehicleSpec v;
  v.id = id;
  v.capacity_kwh = 700.0;
  v.e_min_kwh = 70.0;
  v.e_init_kwh = e_init;
  v.e_final_kwh = e_init;
  v.eta_c = 1.0;
  v.eta_d = 1.0;
  v.p_drive_kw = 70.0;
  v.home = home;
  return v;
}

inline FleetConfig fleet(int vehicles, int steps_per_day, int days = 1, double dt = 0.25) {
  FleetConfig c;
  c.horizon = {steps_per_day, days, dt};
  for (int n = 0; n < vehicles; ++n) c.vehicles.push_back(truck(n + 1));
  return c;
}

// Every pair one step apart.
inline TravelTimeTable unit_travel(const FleetConfig& c) {
  TravelTimeTable t(c.distances_mi, c.horizon);
  for (Location a : kAllLocations) {
    for (Location b : kAllLocations) {
      if (a != b) t.set_constant(a, b, 1);
    }
  }
  return t;
}

inline PricePanel flat_panel(int steps, double price) { return PricePanel(steps, price); }

// Independent random prices per site and step in [lo, hi].
inline PricePanel random_panel(std::mt19937_64& rng, int steps, double lo = -0.02,
                               double hi = 0.12) {
  std::uniform_real_distribution<double> u(lo, hi);
  PricePanel p(steps);
  for (Location l : kAllLocations) {
    for (int t = 0; t < steps; ++t) p.price(l, t) = std::round(u(rng) * 1e4) / 1e4;
  }
  return p;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// One truck at home for 8 steps, 0.02 $/kWh for the first half and 0.10
// after. Best plan: charge flat out, then discharge, -12 $.
inline FleetConfig arbitrage_config() { return fleet(1, 8); }

inline PricePanel arbitrage_prices() {
  PricePanel p(8);
  for (Location l : kAllLocations) {
    for (int t = 0; t < 8; ++t) p.price(l, t) = t < 4 ? 0.02 : 0.10;
  }
  return p;
}

struct RandomCase {
  FleetConfig config;
  PricePanel prices;
  TravelTimeTable travel;
  MilpInstance instance;
};

// Small spatial instance: 1-2 trucks, 6-10 steps, random prices, travel
// times and delivery. Off-home location indicators are fixed to zero at
// random until at most `max_free` integer columns remain free.
inline RandomCase random_case(std::mt19937_64& rng, int max_free = 20) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomCase rc;
  rc.config = fleet(pick(1, 2), pick(6, 10));
  for (VehicleSpec& v : rc.config.vehicles) {
    v.e_init_kwh = v.e_final_kwh = pick(10, 60) * 10.0;
    v.eta_c = v.eta_d = pick(0, 1) ? 1.0 : 0.95;
  }
  if (pick(0, 1)) rc.config.delivery.min_visits[pick(1, 2)] = 1;
  rc.prices = random_panel(rng, rc.config.horizon.total_steps());
  rc.travel = TravelTimeTable(rc.config.distances_mi, rc.config.horizon);
  for (Location a : kAllLocations) {
    for (Location b : kAllLocations) {
      if (index_of(a) < index_of(b)) {
        const int s = pick(1, 2);
        rc.travel.set_constant(a, b, s);
        rc.travel.set_constant(b, a, s);
      }
    }
  }
  rc.instance = build_with_prices(rc.config, rc.prices, rc.travel).instance;
  MilpInstance& m = rc.instance;
  std::vector<int> candidates;
  for (int j = 0; j < m.num_columns(); ++j) {
    const std::string& name = m.col_name(j);
    if (name.rfind("ind_B", 0) == 0 || name.rfind("ind_C", 0) == 0) candidates.push_back(j);
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  // Then driving at home-site steps, keeping the first and last step.
  const int T = rc.config.horizon.total_steps();
  std::vector<int> home_steps;
  for (int j = 0; j < m.num_columns(); ++j) {
    const std::string& name = m.col_name(j);
    if (name.rfind("ind_A", 0) == 0 && !name.ends_with("_t0") &&
        !name.ends_with("_t" + std::to_string(T - 1))) {
      home_steps.push_back(j);
    }
  }
  std::shuffle(home_steps.begin(), home_steps.end(), rng);
  candidates.insert(candidates.end(), home_steps.begin(), home_steps.end());
  for (int j : candidates) {
    if (m.num_free_integer_columns() <= max_free) break;
    m.set_bounds(j, 0.0, 0.0);
  }
  return rc;
}

}  // namespace fleetarb::testing
