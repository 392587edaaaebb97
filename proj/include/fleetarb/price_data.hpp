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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fleetarb/fleet_model.hpp"

namespace fleetarb {

using ZoneNames = std::array<std::string, kNumLocations>;

// Prices in $/kWh, one value per step. Negative values are legal.
struct PriceSeries {
  Location location = Location::A;
  std::vector<double> values;

  bool operator==(const PriceSeries&) const = default;
};

struct PricePanel {
  std::array<PriceSeries, kNumLocations> series = {
      PriceSeries{Location::A, {}}, PriceSeries{Location::B, {}}, PriceSeries{Location::C, {}}};

  PricePanel() = default;
  explicit PricePanel(int steps, double fill = 0.0);

  int steps() const { return static_cast<int>(series[0].values.size()); }
  double price(Location loc, int step) const { return series[index_of(loc)].values[step]; }
  double& price(Location loc, int step) { return series[index_of(loc)].values[step]; }

  bool operator==(const PricePanel&) const = default;
};

// Throws DataError if the three series differ in length or hold non-finite
// values.
void validate(const PricePanel& panel);

// Equally weighted price realizations sharing one horizon.
struct ScenarioSet {
  std::vector<PricePanel> scenarios;

  int size() const { return static_cast<int>(scenarios.size()); }
  double weight() const { return 1.0 / static_cast<double>(scenarios.size()); }
  int steps() const { return scenarios.empty() ? 0 : scenarios.front().steps(); }
};

ScenarioSet single_scenario(PricePanel panel);

// One scenario per historical day in `history`; a trailing partial day is
// dropped.
ScenarioSet scenarios_from_days(const PricePanel& history, int steps_per_day);

PricePanel slice(const PricePanel& panel, int first_step, int count);

// Per-location, per-step arithmetic mean across scenarios.
PricePanel mean_panel(const ScenarioSet& set);

// Replaces every location's price with the cross-location mean at that step.
PricePanel time_only_panel(const PricePanel& panel);

// Reads `timestamp,zone,price_per_mwh` rows. Zones must match `zones`; the
// first horizon.total_steps() intervals from the earliest timestamp are kept
// and must be gap free. Prices are converted to $/kWh.
PricePanel load_prices(std::istream& csv, const Horizon& horizon, const ZoneNames& zones);
PricePanel load_prices_file(const std::string& path, const Horizon& horizon,
                            const ZoneNames& zones);

// Writes the same format load_prices reads, starting at `start_iso`.
void write_prices(std::ostream& out, const PricePanel& panel, const Horizon& horizon,
                  const ZoneNames& zones, const std::string& start_iso = "2022-08-01T00:00:00");

// Minutes since 1970-01-01T00:00 for "YYYY-MM-DD[T ]HH:MM[:SS][Z]".
std::int64_t parse_timestamp_minutes(const std::string& text);
std::string format_timestamp_minutes(std::int64_t minutes);

// Whole-step travel durations between ordered location pairs. Entries may vary
// with the departure step of the day; unset pairs use a constant derived from
// distance at 60 mi/h.
class TravelTimeTable {
 public:
  TravelTimeTable() = default;
  TravelTimeTable(const DistanceTable& distances_mi, const Horizon& horizon);

  // Steps in transit when leaving `from` at absolute step `step`. Always >= 1.
  int steps(Location from, Location to, int step) const;
  int default_steps(Location from, Location to) const {
    return defaults_[index_of(from)][index_of(to)];
  }
  // Largest value over all departure times.
  int max_steps(Location from, Location to) const;

  void set_constant(Location from, Location to, int steps);
  // `per_step_of_day` must have steps_per_day entries, each >= 1.
  void set_profile(Location from, Location to, std::vector<int> per_step_of_day);

  int steps_per_day() const { return steps_per_day_; }

 private:
  int steps_per_day_ = 1;
  std::array<std::array<int, kNumLocations>, kNumLocations> defaults_{};
  std::map<std::pair<int, int>, std::vector<int>> profiles_;
};

// Rounds minutes up to whole steps of dt_hours, never below one step.
int minutes_to_steps(double minutes, double dt_hours);

// Reads `origin,destination,depart_hhmm,minutes` rows (origin/destination are
// zone names or the letters A/B/C; depart_hhmm is HHMM or HH:MM). Departure
// times without an entry inherit the latest earlier entry of the same pair,
// wrapping around midnight.
TravelTimeTable load_travel_times(std::istream& csv, const Horizon& horizon,
                                  const DistanceTable& distances_mi, const ZoneNames& zones);
TravelTimeTable load_travel_times_file(const std::string& path, const Horizon& horizon,
                                       const DistanceTable& distances_mi, const ZoneNames& zones);

// Deterministic synthetic market used by the bundled fixture and the tests.
struct SyntheticMarketOptions {
  Horizon horizon;
  std::uint64_t seed = 1;
  double base = 0.030;             // $/kWh
  double daily_amplitude = 0.012;  // peak-to-mean of the daily cycle
  // Scale of the per-location offsets and of location-specific noise.
  double spread = 0.008;
  double noise = 0.002;
  // Expected real-time spikes per day; each lasts one step.
  double spikes_per_day = 1.0;
  double spike_height = 0.25;
};

struct SyntheticMarket {
  PricePanel real_time;
  PricePanel day_ahead;
};

SyntheticMarket synthetic_market(const SyntheticMarketOptions& options);

}  // namespace fleetarb
