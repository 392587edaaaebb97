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
#include <span>
#include <string>
#include <vector>

#include "fleetarb/fleet_model.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/price_data.hpp"

namespace fleetarb {

// Grid-side powers (kW) and location for one vehicle at one step. `soc` is the
// energy at the end of the step.
struct StepPlan {
  std::array<bool, kNumLocations> at = {false, false, false};
  std::array<double, kNumLocations> charge_kw = {0.0, 0.0, 0.0};
  std::array<double, kNumLocations> discharge_kw = {0.0, 0.0, 0.0};
  double soc_kwh = 0.0;

  bool driving() const { return !at[0] && !at[1] && !at[2]; }
  bool operator==(const StepPlan&) const = default;
};

struct FleetSchedule {
  double dt_hours = 0.25;
  // steps[n][t] for vehicle position n in the config.
  std::vector<std::vector<StepPlan>> steps;

  int num_vehicles() const { return static_cast<int>(steps.size()); }
  int num_steps() const { return steps.empty() ? 0 : static_cast<int>(steps.front().size()); }
  bool operator==(const FleetSchedule&) const = default;
};

// Reads a solution vector back into a schedule. Indicators are rounded,
// power at sites the vehicle is not at is dropped, and SOC is recomputed from
// the recursion starting at each vehicle's initial energy.
FleetSchedule extract_schedule(const FleetConfig& config, const BuiltModel& model,
                               std::span<const double> x);

// Concatenates per-day schedules in day order.
FleetSchedule concatenate(std::span<const FleetSchedule> days);

// Replaces simultaneous charge and discharge at a site with the single flow
// that leaves the battery energy unchanged. Never adds flow.
void cancel_overlap(FleetSchedule& schedule, const FleetConfig& config);

// Sum of price * (charge - discharge) * dt, in dollars; negative is profit.
double evaluate_cost(const FleetSchedule& schedule, const PricePanel& prices);

// Net energy drawn from the grid, sum of (charge - discharge) * dt in kWh.
double net_grid_energy(const FleetSchedule& schedule);

struct Trip {
  int vehicle = 0;
  Location from = Location::A;
  Location to = Location::A;
  int first_transit_step = 0;
  int arrival_step = 0;
};

// A trip is a maximal run of driving steps between two located steps at
// different sites. Runs that return to the same site are not trips.
std::vector<Trip> detect_trips(const FleetSchedule& schedule);

using TripMatrix = std::array<std::array<int, kNumLocations>, kNumLocations>;

TripMatrix count_trips(const FleetSchedule& schedule);

struct Metrics {
  double cost = 0.0;            // $
  double distance_mi = 0.0;
  double throughput_kwh = 0.0;  // charging + discharging + driving energy

  bool operator==(const Metrics&) const = default;
};

// Throws ScheduleError if a trip is shorter than the travel table allows.
Metrics account(const FleetSchedule& schedule, const FleetConfig& config,
                const TravelTimeTable& travel, const PricePanel& prices);

// Distance and throughput split by day; a trip counts on the day of its first
// driving step.
std::vector<Metrics> account_by_day(const FleetSchedule& schedule, const FleetConfig& config,
                                    const TravelTimeTable& travel, const PricePanel& prices);

struct Violation {
  std::string row;  // model row (or column) name
  std::string detail;
};

struct AuditOptions {
  BuildMode mode = BuildMode::Spatial;
  Location warehouse = Location::A;
  double soc_tol_kwh = 1e-6;
  // The schedule continues a day that ended at home (see BuildOptions).
  bool continue_from_home = false;
};

// Checks every rule the model imposes: one location per step, power only
// where parked and within charger limits, SOC recursion and bounds, daily
// final energy, travel times, delivery counts, start and home return (or
// the warehouse in stationary mode). An empty result means the schedule
// passes.
std::vector<Violation> audit(const FleetSchedule& schedule, const FleetConfig& config,
                             const TravelTimeTable& travel, const AuditOptions& options = {});

// CSV with one row per vehicle and step:
// vehicle,step,at_A,at_B,at_C,c_A,c_B,c_C,d_A,d_B,d_C,soc. `vehicle` is the
// configured id.
void write_schedule_csv(std::ostream& out, const FleetSchedule& schedule,
                        const FleetConfig& config);
FleetSchedule read_schedule_csv(std::istream& in, const FleetConfig& config);

}  // namespace fleetarb
