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

// Writes the synthetic real-time and day-ahead price files bundled in data/.
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fleetarb/errors.hpp"
#include "fleetarb/price_data.hpp"

using namespace fleetarb;

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic three-site price market"};
  SyntheticMarketOptions o;
  o.horizon.num_days = 14;
  std::string real_path = "prices_rt.csv";
  std::string dayahead_path = "prices_da.csv";
  std::string start = "2022-08-01T00:00:00";

  app.add_option("--days", o.horizon.num_days, "days to generate")->check(CLI::PositiveNumber);
  app.add_option("--steps-per-day", o.horizon.steps_per_day)->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--spread", o.spread, "per-site offset scale, $/kWh");
  app.add_option("--spikes-per-day", o.spikes_per_day, "expected one-step real-time spikes per day");
  app.add_option("--spike-height", o.spike_height, "$/kWh");
  app.add_option("--start", start, "first timestamp");
  app.add_option("--real-out", real_path, "real-time price CSV to write");
  app.add_option("--dayahead-out", dayahead_path, "day-ahead price CSV to write");
  CLI11_PARSE(app, argc, argv);
  if (1440 % o.horizon.steps_per_day != 0) {
    std::cerr << "steps per day must divide 1440\n";
    return 2;
  }
  o.horizon.dt_hours = 24.0 / o.horizon.steps_per_day;

  const FleetConfig defaults;
  const SyntheticMarket market = synthetic_market(o);
  std::ofstream rt(real_path), da(dayahead_path);
  if (!rt || !da) {
    std::cerr << "cannot open output files\n";
    return 3;
  }
  write_prices(rt, market.real_time, o.horizon, defaults.location_names, start);
  write_prices(da, market.day_ahead, o.horizon, defaults.location_names, start);
  return 0;
}
