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

#include "fleetarb/price_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

#include "fleetarb/errors.hpp"
#include "fleetarb/text_util.hpp"

namespace fleetarb {

PricePanel::PricePanel(int steps, double fill) {
  for (auto& s : series) s.values.assign(static_cast<std::size_t>(steps), fill);
}

void validate(const PricePanel& panel) {
  for (int l = 0; l < kNumLocations; ++l) {
    if (panel.series[l].location != kAllLocations[l]) {
      throw DataError("price series stored under the wrong location");
    }
    if (panel.series[l].values.size() != panel.series[0].values.size()) {
      throw DataError("price series lengths differ across locations");
    }
    for (double v : panel.series[l].values) {
      if (!std::isfinite(v)) throw DataError("non-finite price");
    }
  }
}

ScenarioSet single_scenario(PricePanel panel) {
  ScenarioSet set;
  set.scenarios.push_back(std::move(panel));
  return set;
}

PricePanel slice(const PricePanel& panel, int first_step, int count) {
  if (first_step < 0 || count < 0 || first_step + count > panel.steps()) {
    throw DataError("price slice [" + std::to_string(first_step) + ", " +
                    std::to_string(first_step + count) + ") outside panel of " +
                    std::to_string(panel.steps()) + " steps");
  }
  PricePanel out;
  for (int l = 0; l < kNumLocations; ++l) {
    const auto& v = panel.series[l].values;
    out.series[l].values.assign(v.begin() + first_step, v.begin() + first_step + count);
  }
  return out;
}

ScenarioSet scenarios_from_days(const PricePanel& history, int steps_per_day) {
  if (steps_per_day < 1) throw DataError("steps_per_day must be positive");
  const int days = history.steps() / steps_per_day;
  if (days < 1) throw DataError("price history shorter than one day");
  ScenarioSet set;
  for (int d = 0; d < days; ++d) {
    set.scenarios.push_back(slice(history, d * steps_per_day, steps_per_day));
  }
  return set;
}

PricePanel mean_panel(const ScenarioSet& set) {
  if (set.scenarios.empty()) throw DataError("scenario set is empty");
  const int steps = set.steps();
  for (const auto& p : set.scenarios) {
    validate(p);
    if (p.steps() != steps) throw DataError("scenarios do not share one horizon");
  }
  if (set.size() == 1) return set.scenarios.front();
  PricePanel mean(steps);
  const double k = static_cast<double>(set.size());
  for (int l = 0; l < kNumLocations; ++l) {
    for (int t = 0; t < steps; ++t) {
      double sum = 0.0;
      for (const auto& p : set.scenarios) sum += p.series[l].values[t];
      mean.series[l].values[t] = sum / k;
    }
  }
  return mean;
}

PricePanel time_only_panel(const PricePanel& panel) {
  validate(panel);
  PricePanel out(panel.steps());
  for (int t = 0; t < panel.steps(); ++t) {
    const double a = panel.series[0].values[t];
    const double b = panel.series[1].values[t];
    const double c = panel.series[2].values[t];
    // Already uniform steps are copied so the transform is exactly idempotent.
    const double m = (a == b && b == c) ? a : (a + b + c) / 3.0;
    for (auto& s : out.series) s.values[t] = m;
  }
  return out;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<int>(yy + (m <= 2));
}

int zone_index(std::string_view name, const ZoneNames& zones) {
  for (int l = 0; l < kNumLocations; ++l) {
    if (name == zones[l]) return l;
  }
  if (auto loc = location_from_letter(name)) return index_of(*loc);
  return -1;
}

int step_minutes(const Horizon& horizon) {
  const double minutes = horizon.dt_hours * 60.0;
  const double rounded = std::round(minutes);
  if (rounded < 1.0 || std::abs(minutes - rounded) > 1e-9) {
    throw DataError("dt_hours must be a whole number of minutes for timestamped input");
  }
  return static_cast<int>(rounded);
}

}  // namespace

std::int64_t parse_timestamp_minutes(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  int consumed = 0;
  const int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi,
                            &consumed);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    throw DataError("bad timestamp '" + text + "'");
  }
  std::string_view rest = std::string_view(text).substr(static_cast<std::size_t>(consumed));
  if (rest.starts_with(":")) {
    int more = 0;
    if (std::sscanf(text.c_str() + consumed, ":%2d%n", &s, &more) != 1) {
      throw DataError("bad timestamp '" + text + "'");
    }
    rest.remove_prefix(static_cast<std::size_t>(more));
  }
  if (!(rest.empty() || rest == "Z")) throw DataError("bad timestamp '" + text + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s != 0) {
    throw DataError("bad timestamp '" + text + "'");
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 1440 + h * 60 +
         mi;
}

std::string format_timestamp_minutes(std::int64_t minutes) {
  std::int64_t days = minutes >= 0 ? minutes / 1440 : -((-minutes + 1439) / 1440);
  const int rem = static_cast<int>(minutes - days * 1440);
  int y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:00", y, m, d, rem / 60, rem % 60);
  return buf;
}

PricePanel load_prices(std::istream& csv, const Horizon& horizon, const ZoneNames& zones) {
  const int dt_min = step_minutes(horizon);
  const int steps = horizon.total_steps();
  std::string line;
  if (!std::getline(csv, line)) throw DataError("price file is empty");
  {
    auto header = split_csv(line);
    if (header.size() != 3 || header[0] != "timestamp" || header[1] != "zone" ||
        header[2] != "price_per_mwh") {
      throw DataError("price header must be 'timestamp,zone,price_per_mwh'");
    }
  }

  std::array<std::vector<std::pair<std::int64_t, double>>, kNumLocations> rows;
  int line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 3) {
      throw DataError("line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const int zone = zone_index(f[1], zones);
    if (zone < 0) {
      throw DataError("line " + std::to_string(line_no) + ": unknown zone '" + std::string(f[1]) +
                      "'");
    }
    auto price = parse_double(f[2]);
    if (!price) {
      throw DataError("line " + std::to_string(line_no) + ": non-numeric price '" +
                      std::string(f[2]) + "'");
    }
    rows[zone].emplace_back(parse_timestamp_minutes(std::string(f[0])), *price / 1000.0);
  }

  std::int64_t start = 0;
  bool any = false;
  for (const auto& r : rows) {
    for (const auto& [ts, p] : r) {
      if (!any || ts < start) start = ts;
      any = true;
    }
  }
  if (!any) throw DataError("price file has no data rows");

  PricePanel panel(steps);
  for (int l = 0; l < kNumLocations; ++l) {
    auto& r = rows[l];
    std::stable_sort(r.begin(), r.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t k = 0;
    for (int t = 0; t < steps; ++t) {
      const std::int64_t expected = start + static_cast<std::int64_t>(t) * dt_min;
      while (k < r.size() && r[k].first < expected) {
        if (k > 0 && r[k].first == r[k - 1].first) {
          throw DataError("duplicate interval " + format_timestamp_minutes(r[k].first) +
                          " for zone " + zones[l]);
        }
        // Off-grid timestamps are neither a match nor silently dropped.
        throw DataError("interval " + format_timestamp_minutes(r[k].first) + " for zone " +
                        zones[l] + " is not aligned to the " + std::to_string(dt_min) +
                        "-minute grid");
      }
      if (k >= r.size() || r[k].first != expected) {
        throw DataError("missing interval " + format_timestamp_minutes(expected) + " for zone " +
                        zones[l]);
      }
      panel.series[l].values[t] = r[k].second;
      ++k;
      if (k < r.size() && r[k].first == expected) {
        throw DataError("duplicate interval " + format_timestamp_minutes(expected) +
                        " for zone " + zones[l]);
      }
    }
  }
  return panel;
}

PricePanel load_prices_file(const std::string& path, const Horizon& horizon,
                            const ZoneNames& zones) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price file '" + path + "'");
  return load_prices(in, horizon, zones);
}

void write_prices(std::ostream& out, const PricePanel& panel, const Horizon& horizon,
                  const ZoneNames& zones, const std::string& start_iso) {
  const int dt_min = step_minutes(horizon);
  const std::int64_t start = parse_timestamp_minutes(start_iso);
  out << "timestamp,zone,price_per_mwh\n";
  for (int t = 0; t < panel.steps(); ++t) {
    const std::string ts = format_timestamp_minutes(start + static_cast<std::int64_t>(t) * dt_min);
    for (int l = 0; l < kNumLocations; ++l) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f", panel.series[l].values[t] * 1000.0);
      out << ts << ',' << zones[l] << ',' << buf << '\n';
    }
  }
}

int minutes_to_steps(double minutes, double dt_hours) {
  if (!(minutes > 0.0)) throw DataError("non-positive travel duration");
  const double steps = minutes / (60.0 * dt_hours);
  // The epsilon keeps exact multiples such as 30 min / 15 min at 2 steps.
  return std::max(1, static_cast<int>(std::ceil(steps - 1e-9)));
}

TravelTimeTable::TravelTimeTable(const DistanceTable& distances_mi, const Horizon& horizon)
    : steps_per_day_(horizon.steps_per_day) {
  for (int i = 0; i < kNumLocations; ++i) {
    for (int j = 0; j < kNumLocations; ++j) {
      // 60 mi/h means one minute per mile.
      defaults_[i][j] = i == j ? 1 : minutes_to_steps(distances_mi[i][j], horizon.dt_hours);
    }
  }
}

int TravelTimeTable::steps(Location from, Location to, int step) const {
  auto it = profiles_.find({index_of(from), index_of(to)});
  if (it == profiles_.end()) return defaults_[index_of(from)][index_of(to)];
  const int sod = ((step % steps_per_day_) + steps_per_day_) % steps_per_day_;
  return it->second[static_cast<std::size_t>(sod)];
}

int TravelTimeTable::max_steps(Location from, Location to) const {
  auto it = profiles_.find({index_of(from), index_of(to)});
  if (it == profiles_.end()) return defaults_[index_of(from)][index_of(to)];
  return *std::max_element(it->second.begin(), it->second.end());
}

void TravelTimeTable::set_constant(Location from, Location to, int steps) {
  if (steps < 1) throw DataError("travel steps must be >= 1");
  defaults_[index_of(from)][index_of(to)] = steps;
  profiles_.erase({index_of(from), index_of(to)});
}

void TravelTimeTable::set_profile(Location from, Location to, std::vector<int> per_step_of_day) {
  if (static_cast<int>(per_step_of_day.size()) != steps_per_day_) {
    throw DataError("travel profile length must equal steps_per_day");
  }
  for (int s : per_step_of_day) {
    if (s < 1) throw DataError("travel steps must be >= 1");
  }
  profiles_[{index_of(from), index_of(to)}] = std::move(per_step_of_day);
}

TravelTimeTable load_travel_times(std::istream& csv, const Horizon& horizon,
                                  const DistanceTable& distances_mi, const ZoneNames& zones) {
  TravelTimeTable table(distances_mi, horizon);
  std::string line;
  if (!std::getline(csv, line)) return table;
  auto header = split_csv(line);
  if (header.size() != 4 || header[0] != "origin" || header[1] != "destination" ||
      header[2] != "depart_hhmm" || header[3] != "minutes") {
    throw DataError("traffic header must be 'origin,destination,depart_hhmm,minutes'");
  }
  const double step_min = horizon.dt_hours * 60.0;
  std::map<std::pair<int, int>, std::map<int, int>> entries;
  int line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (f.size() != 4) throw DataError(where() + "expected 4 fields");
    const int o = zone_index(f[0], zones);
    const int d = zone_index(f[1], zones);
    if (o < 0 || d < 0) throw DataError(where() + "unknown zone");
    if (o == d) throw DataError(where() + "origin equals destination");
    std::string clock(f[2]);
    if (clock.size() == 5 && clock[2] == ':') clock.erase(2, 1);
    auto hhmm = clock.find_first_not_of("0123456789") == std::string::npos ? parse_int(clock)
                                                                           : std::nullopt;
    if (!hhmm || *hhmm < 0 || *hhmm % 100 > 59 || *hhmm / 100 > 23) {
      throw DataError(where() + "bad depart_hhmm '" + std::string(f[2]) + "'");
    }
    auto minutes = parse_double(f[3]);
    if (!minutes) throw DataError(where() + "non-numeric minutes");
    if (!(*minutes > 0.0)) throw DataError(where() + "non-positive travel duration");
    const double minute_of_day = static_cast<double>(*hhmm / 100 * 60 + *hhmm % 100);
    const int sod = static_cast<int>(std::floor(minute_of_day / step_min + 1e-9));
    entries[{o, d}][sod % horizon.steps_per_day] = minutes_to_steps(*minutes, horizon.dt_hours);
  }
  for (const auto& [pair, by_step] : entries) {
    std::vector<int> profile(static_cast<std::size_t>(horizon.steps_per_day));
    int current = by_step.rbegin()->second;  // wraps from the previous day
    for (int s = 0; s < horizon.steps_per_day; ++s) {
      if (auto it = by_step.find(s); it != by_step.end()) current = it->second;
      profile[static_cast<std::size_t>(s)] = current;
    }
    table.set_profile(kAllLocations[pair.first], kAllLocations[pair.second], std::move(profile));
  }
  return table;
}

TravelTimeTable load_travel_times_file(const std::string& path, const Horizon& horizon,
                                       const DistanceTable& distances_mi, const ZoneNames& zones) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open traffic file '" + path + "'");
  return load_travel_times(in, horizon, distances_mi, zones);
}

SyntheticMarket synthetic_market(const SyntheticMarketOptions& o) {
  const int spd = o.horizon.steps_per_day;
  const int steps = o.horizon.total_steps();
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Fixed location offsets: B sits between A and C.
  const std::array<double, kNumLocations> offset = {-0.5 * o.spread, 0.0, 0.5 * o.spread};
  // Each location peaks at a slightly different hour so the spread changes sign.
  const std::array<double, kNumLocations> phase = {0.0, 0.04, 0.08};

  SyntheticMarket m{PricePanel(steps), PricePanel(steps)};
  std::array<double, kNumLocations> ar = {0.0, 0.0, 0.0};
  double common = 0.0;
  for (int t = 0; t < steps; ++t) {
    const double day_frac = static_cast<double>(t % spd) / spd;
    common = 0.7 * common + o.noise * gauss(rng);
    const bool spike = unit(rng) < o.spikes_per_day / spd;
    const int spike_loc = static_cast<int>(unit(rng) * kNumLocations) % kNumLocations;
    for (int l = 0; l < kNumLocations; ++l) {
      // Low overnight, peak around 17:00.
      const double shape =
          -std::cos(2.0 * std::numbers::pi * (day_frac - 0.21 - phase[l]));
      const double expected = o.base + o.daily_amplitude * shape + offset[l];
      ar[l] = 0.6 * ar[l] + 0.5 * o.spread * gauss(rng);
      double rt = expected + common + ar[l];
      if (spike && l == spike_loc) rt += o.spike_height;
      m.real_time.series[l].values[t] = rt;
      m.day_ahead.series[l].values[t] = expected;
    }
  }
  return m;
}

}  // namespace fleetarb
