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

#include <optional>
#include <span>
#include <vector>

#include "fleetarb/fleet_model.hpp"
#include "fleetarb/milp_instance.hpp"
#include "fleetarb/price_data.hpp"

namespace fleetarb {

enum class VarKind {
  ChargeA, DischargeA, ChargeB, DischargeB, ChargeC, DischargeC,
  IndA, IndB, IndC,
  VisitA, VisitB, VisitC,
  Soc,
};

constexpr VarKind charge_kind(Location l) { return static_cast<VarKind>(2 * index_of(l)); }
constexpr VarKind discharge_kind(Location l) { return static_cast<VarKind>(2 * index_of(l) + 1); }
constexpr VarKind ind_kind(Location l) { return static_cast<VarKind>(6 + index_of(l)); }
constexpr VarKind visit_kind(Location l) { return static_cast<VarKind>(9 + index_of(l)); }

// `vehicle` is the position in FleetConfig::vehicles; `step` is a timestep, or
// a window index for the Visit kinds.
struct VarIndex {
  VarKind kind = VarKind::Soc;
  int vehicle = 0;
  int step = 0;

  bool operator==(const VarIndex&) const = default;
};

// Dense column numbering. Per vehicle and step there are ten consecutive
// columns (six powers, three location indicators, SOC); visit indicators for
// the locations that carry a delivery requirement follow after all of them.
class ColumnLayout {
 public:
  ColumnLayout() = default;
  ColumnLayout(int vehicles, int steps, int windows, std::array<bool, kNumLocations> has_visits);

  static constexpr int kPerStep = 10;

  int column(VarIndex v) const;
  // -1 when the layout has no such column (visit kinds without a requirement).
  int find(VarIndex v) const;
  VarIndex decode(int column) const;

  int num_vehicles() const { return vehicles_; }
  int num_steps() const { return steps_; }
  int num_windows() const { return windows_; }
  bool has_visits(Location l) const { return has_visits_[index_of(l)]; }
  int num_columns() const { return visit_base_ + vehicles_ * windows_ * num_visit_locations_; }

 private:
  int vehicles_ = 0;
  int steps_ = 0;
  int windows_ = 0;
  std::array<bool, kNumLocations> has_visits_ = {false, false, false};
  std::array<int, kNumLocations> visit_slot_ = {-1, -1, -1};
  int num_visit_locations_ = 0;
  int visit_base_ = 0;
};

enum class BuildMode { Spatial, Stationary };

struct BuildOptions {
  BuildMode mode = BuildMode::Spatial;
  // Stationary scenarios park every vehicle here.
  Location warehouse = Location::A;
  // For a day that follows another one: instead of requiring each vehicle to
  // be home on the first step, it is taken to have been home on the step
  // before, so trips may start right away. Travel from home still applies.
  bool continue_from_home = false;
};

struct BuiltModel {
  MilpInstance instance;
  ColumnLayout layout;
  BuildMode mode = BuildMode::Spatial;
};

// Builds the fleet MILP against the scenario-averaged prices. Throws
// InfeasibleError when a delivery requirement exceeds the fleet size and
// DataError when horizons disagree.
BuiltModel build(const FleetConfig& config, const ScenarioSet& scenarios,
                 const TravelTimeTable& travel, BuildOptions options = {});

// Same constraints as the spatial build; the objective uses the
// location-collapsed mean price at each step.
BuiltModel build_counterfactual(const FleetConfig& config, const ScenarioSet& scenarios,
                                const TravelTimeTable& travel);

// The builder behind both: objective prices are taken as given.
BuiltModel build_with_prices(const FleetConfig& config, const PricePanel& objective_prices,
                             const TravelTimeTable& travel, BuildOptions options = {});

// Visit window that contains `step`.
int window_of(const FleetConfig& config, int step);
int num_windows(const FleetConfig& config);

}  // namespace fleetarb
