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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fleetarb {

// The three priced sites. A is the warehouse.
enum class Location : int { A = 0, B = 1, C = 2 };

inline constexpr int kNumLocations = 3;
inline constexpr std::array<Location, kNumLocations> kAllLocations = {
    Location::A, Location::B, Location::C};

constexpr int index_of(Location loc) { return static_cast<int>(loc); }
char location_letter(Location loc);
std::optional<Location> location_from_letter(std::string_view s);

struct Horizon {
  int steps_per_day = 96;
  int num_days = 1;
  double dt_hours = 0.25;

  int total_steps() const { return steps_per_day * num_days; }
  bool operator==(const Horizon&) const = default;
};

struct VehicleSpec {
  int id = 0;
  double capacity_kwh = 0.0;
  double e_min_kwh = 0.0;
  double e_init_kwh = 0.0;
  double e_final_kwh = 0.0;
  double eta_c = 1.0;
  double eta_d = 1.0;
  double p_drive_kw = 0.0;
  Location home = Location::A;

  bool operator==(const VehicleSpec&) const = default;
};

struct ChargerSpec {
  double p_c_max_kw = 150.0;
  double p_d_max_kw = 150.0;

  bool operator==(const ChargerSpec&) const = default;
};

enum class VisitWindow { PerDay, WholeHorizon };

struct DeliveryRequirement {
  std::array<int, kNumLocations> min_visits = {0, 0, 0};
  VisitWindow window = VisitWindow::PerDay;

  bool operator==(const DeliveryRequirement&) const = default;
};

// Symmetric miles between sites; the diagonal is unused.
using DistanceTable = std::array<std::array<double, kNumLocations>, kNumLocations>;

DistanceTable default_distances();

struct FleetConfig {
  std::array<std::string, kNumLocations> location_names = {
      "San Antonio", "San Marcos", "Austin"};
  std::vector<VehicleSpec> vehicles;
  ChargerSpec charger;
  Horizon horizon;
  DeliveryRequirement delivery;
  DistanceTable distances_mi = default_distances();
  // Require every vehicle to be back home on the last step of each day.
  bool home_return = true;

  int num_vehicles() const { return static_cast<int>(vehicles.size()); }
  double distance(Location from, Location to) const {
    return distances_mi[index_of(from)][index_of(to)];
  }
  bool operator==(const FleetConfig&) const = default;
};

// Throws ConfigError naming the first violated invariant.
void validate(const FleetConfig& config);
void validate(const VehicleSpec& vehicle);

// Parses the sectioned key/value document described in the README. Errors
// carry "line L, column C" for syntax problems and the violated invariant for
// semantic ones.
FleetConfig parse_config(std::string_view text);
FleetConfig load_config_file(const std::string& path);

// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const FleetConfig& config);

// Draws n trucks with the case-study parameter ranges: capacity 630-770 kWh,
// round-trip efficiency 0.90-1.00 split evenly between charge and discharge,
// initial energy 420-490 kWh, drive draw 63-77 kW. E^min is 10% of capacity
// and E^final equals the initial energy.
std::vector<VehicleSpec> sample_fleet(std::uint64_t seed, int n,
                                      Location home = Location::A);

}  // namespace fleetarb
