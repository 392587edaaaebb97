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

#include "fleetarb/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "fleetarb/errors.hpp"
#include "fleetarb/text_util.hpp"

namespace fleetarb {

namespace {

double energy_change(const StepPlan& s, const VehicleSpec& v, double dt) {
  double change = s.driving() ? -v.p_drive_kw : 0.0;
  for (int l = 0; l < kNumLocations; ++l) {
    change += v.eta_c * s.charge_kw[l] - s.discharge_kw[l] / v.eta_d;
  }
  return change * dt;
}

std::string tag(const VehicleSpec& v, int step) {
  return "_n" + std::to_string(v.id) + "_t" + std::to_string(step);
}

void check_shape(const FleetSchedule& schedule, const FleetConfig& config) {
  if (schedule.num_vehicles() != config.num_vehicles()) {
    throw ScheduleError("schedule has " + std::to_string(schedule.num_vehicles()) +
                        " vehicles but the fleet has " + std::to_string(config.num_vehicles()));
  }
  for (const auto& row : schedule.steps) {
    if (static_cast<int>(row.size()) != schedule.num_steps()) {
      throw ScheduleError("vehicles have schedules of different lengths");
    }
  }
}

}  // namespace

FleetSchedule extract_schedule(const FleetConfig& config, const BuiltModel& model,
                               std::span<const double> x) {
  const ColumnLayout& lay = model.layout;
  if (static_cast<int>(x.size()) != lay.num_columns()) {
    throw std::invalid_argument("solution length does not match the model");
  }
  FleetSchedule out;
  out.dt_hours = config.horizon.dt_hours;
  const int T = lay.num_steps();
  out.steps.assign(static_cast<std::size_t>(lay.num_vehicles()), std::vector<StepPlan>(T));
  for (int n = 0; n < lay.num_vehicles(); ++n) {
    const VehicleSpec& v = config.vehicles[n];
    double soc = v.e_init_kwh;
    for (int t = 0; t < T; ++t) {
      StepPlan& s = out.steps[n][t];
      for (Location l : kAllLocations) {
        const int i = index_of(l);
        s.at[i] = x[lay.column({ind_kind(l), n, t})] > 0.5;
        if (!s.at[i]) continue;
        s.charge_kw[i] = std::clamp(x[lay.column({charge_kind(l), n, t})], 0.0,
                                    config.charger.p_c_max_kw);
        s.discharge_kw[i] = std::clamp(x[lay.column({discharge_kind(l), n, t})], 0.0,
                                       config.charger.p_d_max_kw);
      }
      soc += energy_change(s, v, out.dt_hours);
      s.soc_kwh = soc;
    }
  }
  return out;
}

FleetSchedule concatenate(std::span<const FleetSchedule> days) {
  FleetSchedule out;
  if (days.empty()) return out;
  out.dt_hours = days.front().dt_hours;
  out.steps.resize(days.front().steps.size());
  for (const FleetSchedule& d : days) {
    if (d.steps.size() != out.steps.size()) {
      throw ScheduleError("day schedules disagree on the number of vehicles");
    }
    for (std::size_t n = 0; n < d.steps.size(); ++n) {
      out.steps[n].insert(out.steps[n].end(), d.steps[n].begin(), d.steps[n].end());
    }
  }
  return out;
}

void cancel_overlap(FleetSchedule& schedule, const FleetConfig& config) {
  check_shape(schedule, config);
  for (int n = 0; n < schedule.num_vehicles(); ++n) {
    const VehicleSpec& v = config.vehicles[n];
    for (StepPlan& s : schedule.steps[n]) {
      for (int l = 0; l < kNumLocations; ++l) {
        double& c = s.charge_kw[l];
        double& d = s.discharge_kw[l];
        if (c <= 0.0 || d <= 0.0) continue;
        const double stored = v.eta_c * c - d / v.eta_d;
        if (stored >= 0.0) {
          c = stored / v.eta_c;
          d = 0.0;
        } else {
          d = -stored * v.eta_d;
          c = 0.0;
        }
      }
    }
  }
}

double evaluate_cost(const FleetSchedule& schedule, const PricePanel& prices) {
  if (prices.steps() != schedule.num_steps()) {
    throw DataError("price panel has " + std::to_string(prices.steps()) +
                    " steps but the schedule has " + std::to_string(schedule.num_steps()));
  }
  double total = 0.0;
  for (const auto& row : schedule.steps) {
    for (int t = 0; t < static_cast<int>(row.size()); ++t) {
      for (Location l : kAllLocations) {
        const int i = index_of(l);
        total += prices.price(l, t) * (row[t].charge_kw[i] - row[t].discharge_kw[i]);
      }
    }
  }
  return total * schedule.dt_hours;
}

double net_grid_energy(const FleetSchedule& schedule) {
  double total = 0.0;
  for (const auto& row : schedule.steps) {
    for (const StepPlan& s : row) {
      for (int l = 0; l < kNumLocations; ++l) total += s.charge_kw[l] - s.discharge_kw[l];
    }
  }
  return total * schedule.dt_hours;
}

namespace {

int site_of(const StepPlan& s) {
  for (int l = 0; l < kNumLocations; ++l) {
    if (s.at[l]) return l;
  }
  return -1;
}

}  // namespace

std::vector<Trip> detect_trips(const FleetSchedule& schedule) {
  std::vector<Trip> trips;
  for (int n = 0; n < schedule.num_vehicles(); ++n) {
    const auto& row = schedule.steps[n];
    int last_site = -1;
    int last_step = -1;
    for (int t = 0; t < static_cast<int>(row.size()); ++t) {
      const int site = site_of(row[t]);
      if (site < 0) continue;
      if (last_site >= 0 && t > last_step + 1 && site != last_site) {
        trips.push_back({n, static_cast<Location>(last_site), static_cast<Location>(site),
                         last_step + 1, t});
      }
      last_site = site;
      last_step = t;
    }
  }
  return trips;
}

TripMatrix count_trips(const FleetSchedule& schedule) {
  TripMatrix m{};
  for (const Trip& trip : detect_trips(schedule)) ++m[index_of(trip.from)][index_of(trip.to)];
  return m;
}

std::vector<Metrics> account_by_day(const FleetSchedule& schedule, const FleetConfig& config,
                                    const TravelTimeTable& travel, const PricePanel& prices) {
  check_shape(schedule, config);
  const int spd = config.horizon.steps_per_day;
  const int T = schedule.num_steps();
  const int days = (T + spd - 1) / spd;
  std::vector<Metrics> out(static_cast<std::size_t>(days));

  for (int k = 0; k < days; ++k) {
    out[k].cost = evaluate_cost(
        [&] {
          FleetSchedule day;
          day.dt_hours = schedule.dt_hours;
          for (const auto& row : schedule.steps) {
            day.steps.emplace_back(row.begin() + k * spd, row.begin() + std::min(T, (k + 1) * spd));
          }
          return day;
        }(),
        slice(prices, k * spd, std::min(T, (k + 1) * spd) - k * spd));
  }

  for (const Trip& trip : detect_trips(schedule)) {
    const int depart = trip.first_transit_step - 1;
    const int needed = travel.steps(trip.from, trip.to, depart);
    if (trip.arrival_step - trip.first_transit_step < needed) {
      throw ScheduleError("vehicle " + std::to_string(config.vehicles[trip.vehicle].id) +
                          " reaches " + location_letter(trip.to) + " at step " +
                          std::to_string(trip.arrival_step) + " after " +
                          std::to_string(trip.arrival_step - trip.first_transit_step) +
                          " steps in transit; the trip takes " + std::to_string(needed));
    }
    out[trip.first_transit_step / spd].distance_mi += config.distance(trip.from, trip.to);
  }

  for (int n = 0; n < schedule.num_vehicles(); ++n) {
    const VehicleSpec& v = config.vehicles[n];
    for (int t = 0; t < T; ++t) {
      const StepPlan& s = schedule.steps[n][t];
      double energy = s.driving() ? v.p_drive_kw : 0.0;
      for (int l = 0; l < kNumLocations; ++l) {
        energy += v.eta_c * s.charge_kw[l] + s.discharge_kw[l] / v.eta_d;
      }
      out[t / spd].throughput_kwh += energy * schedule.dt_hours;
    }
  }
  return out;
}

Metrics account(const FleetSchedule& schedule, const FleetConfig& config,
                const TravelTimeTable& travel, const PricePanel& prices) {
  Metrics total;
  for (const Metrics& m : account_by_day(schedule, config, travel, prices)) {
    total.cost += m.cost;
    total.distance_mi += m.distance_mi;
    total.throughput_kwh += m.throughput_kwh;
  }
  return total;
}

std::vector<Violation> audit(const FleetSchedule& schedule, const FleetConfig& config,
                             const TravelTimeTable& travel, const AuditOptions& options) {
  check_shape(schedule, config);
  std::vector<Violation> out;
  auto flag = [&](std::string row, std::string detail) {
    out.push_back({std::move(row), std::move(detail)});
  };
  const Horizon& h = config.horizon;
  const int T = schedule.num_steps();
  const double dt = schedule.dt_hours;
  const double tol = options.soc_tol_kwh;
  const double ptol = 1e-6;
  const bool spatial = options.mode == BuildMode::Spatial;
  if (T != h.total_steps()) {
    flag("horizon", "schedule has " + std::to_string(T) + " steps, horizon has " +
                        std::to_string(h.total_steps()));
    return out;
  }

  for (int n = 0; n < schedule.num_vehicles(); ++n) {
    const VehicleSpec& v = config.vehicles[n];
    const auto& row = schedule.steps[n];
    double prev = v.e_init_kwh;
    for (int t = 0; t < T; ++t) {
      const StepPlan& s = row[t];
      const std::string sfx = tag(v, t);
      const int sites = static_cast<int>(s.at[0]) + s.at[1] + s.at[2];
      if (sites > 1) flag("oneloc" + sfx, std::to_string(sites) + " sites at once");
      for (Location l : kAllLocations) {
        const int i = index_of(l);
        const std::string L(1, location_letter(l));
        const double c = s.charge_kw[i];
        const double d = s.discharge_kw[i];
        if (c < -ptol) flag("c_" + L + sfx, "negative charge " + format_double(c));
        if (d < -ptol) flag("d_" + L + sfx, "negative discharge " + format_double(d));
        if (c > ptol && !s.at[i]) flag("gate_c_" + L + sfx, "charging away from " + L);
        if (d > ptol && !s.at[i]) flag("gate_d_" + L + sfx, "discharging away from " + L);
        if (c > config.charger.p_c_max_kw + ptol) flag("gate_c_" + L + sfx, "above charger rating");
        if (d > config.charger.p_d_max_kw + ptol) flag("gate_d_" + L + sfx, "above charger rating");
      }
      const double expected = prev + energy_change(s, v, dt);
      if (std::abs(s.soc_kwh - expected) > tol) {
        flag("socdyn" + sfx, "energy " + format_double(s.soc_kwh) + " but recursion gives " +
                                 format_double(expected));
      }
      if (s.soc_kwh < v.e_min_kwh - tol || s.soc_kwh > v.capacity_kwh + tol) {
        flag("soc" + sfx, "energy " + format_double(s.soc_kwh) + " outside [" +
                              format_double(v.e_min_kwh) + ", " + format_double(v.capacity_kwh) +
                              "]");
      }
      prev = s.soc_kwh;

      if (!spatial) {
        if (!s.at[index_of(options.warehouse)] || sites != 1) {
          flag("stationary" + sfx, std::string("not parked at ") +
                                       location_letter(options.warehouse));
        }
        continue;
      }
      for (Location from : kAllLocations) {
        if (!s.at[index_of(from)]) continue;
        for (Location to : kAllLocations) {
          if (to == from) continue;
          const int steps = travel.steps(from, to, t);
          for (int tau = 1; tau <= steps && t + tau < T; ++tau) {
            if (row[t + tau].at[index_of(to)]) {
              flag(std::string("travel_") + location_letter(from) + location_letter(to) + sfx +
                       "_k" + std::to_string(tau),
                   "at " + std::string(1, location_letter(to)) + " " + std::to_string(tau) +
                       " steps after leaving " + location_letter(from) + "; the trip takes " +
                       std::to_string(steps));
            }
          }
        }
      }
    }

    for (int k = 1; k <= h.num_days; ++k) {
      const double e = row[k * h.steps_per_day - 1].soc_kwh;
      if (std::abs(e - v.e_final_kwh) > tol) {
        flag("eod_n" + std::to_string(v.id) + "_d" + std::to_string(k - 1),
             "day ends at " + format_double(e) + " kWh, required " +
                 format_double(v.e_final_kwh));
      }
    }
    if (!spatial) continue;
    if (options.continue_from_home) {
      for (Location l : kAllLocations) {
        if (l == v.home) continue;
        const int reach = travel.steps(v.home, l, h.steps_per_day - 1);
        for (int t = 0; t < reach && t < T; ++t) {
          if (row[t].at[index_of(l)]) {
            flag("ind_" + std::string(1, location_letter(l)) + "_n" + std::to_string(v.id) +
                     "_t" + std::to_string(t),
                 "cannot reach the site from home by this step");
          }
        }
      }
    } else if (!row[0].at[index_of(v.home)]) {
      flag("start_n" + std::to_string(v.id),
           std::string("not at home site ") + location_letter(v.home) + " on the first step");
    }
    if (config.home_return) {
      for (int k = 1; k <= h.num_days; ++k) {
        if (!row[k * h.steps_per_day - 1].at[index_of(v.home)]) {
          flag("home_n" + std::to_string(v.id) + "_d" + std::to_string(k - 1),
               "not home at the end of the day");
        }
      }
    }
  }

  if (spatial) {
    const int W = num_windows(config);
    for (Location l : kAllLocations) {
      const int need = config.delivery.min_visits[index_of(l)];
      if (need <= 0) continue;
      for (int w = 0; w < W; ++w) {
        int visitors = 0;
        for (const auto& row : schedule.steps) {
          bool seen = false;
          for (int t = 0; t < T && !seen; ++t) {
            seen = window_of(config, t) == w && row[t].at[index_of(l)];
          }
          visitors += seen;
        }
        if (visitors < need) {
          flag(std::string("deliver_") + location_letter(l) + "_d" + std::to_string(w),
               std::to_string(visitors) + " vehicles visited, " + std::to_string(need) +
                   " required");
        }
      }
    }
  }
  return out;
}

void write_schedule_csv(std::ostream& out, const FleetSchedule& schedule,
                        const FleetConfig& config) {
  check_shape(schedule, config);
  out << "vehicle,step,at_A,at_B,at_C,c_A,c_B,c_C,d_A,d_B,d_C,soc\n";
  for (int n = 0; n < schedule.num_vehicles(); ++n) {
    for (int t = 0; t < schedule.num_steps(); ++t) {
      const StepPlan& s = schedule.steps[n][t];
      out << config.vehicles[n].id << ',' << t;
      for (bool a : s.at) out << ',' << (a ? 1 : 0);
      for (double c : s.charge_kw) out << ',' << format_double(c);
      for (double d : s.discharge_kw) out << ',' << format_double(d);
      out << ',' << format_double(s.soc_kwh) << '\n';
    }
  }
}

FleetSchedule read_schedule_csv(std::istream& in, const FleetConfig& config) {
  std::map<int, int> position;
  for (int n = 0; n < config.num_vehicles(); ++n) position[config.vehicles[n].id] = n;
  const int T = config.horizon.total_steps();
  FleetSchedule out;
  out.dt_hours = config.horizon.dt_hours;
  out.steps.assign(static_cast<std::size_t>(config.num_vehicles()), std::vector<StepPlan>(T));
  std::vector<std::vector<char>> seen(out.steps.size(), std::vector<char>(T, 0));

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ScheduleError("schedule line " + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) throw ScheduleError("schedule file is empty");
  ++line_no;
  if (trim(line) != "vehicle,step,at_A,at_B,at_C,c_A,c_B,c_C,d_A,d_B,d_C,soc") {
    fail("unexpected header");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 12) fail("expected 12 fields, found " + std::to_string(f.size()));
    const auto id = parse_int(f[0]);
    const auto step = parse_int(f[1]);
    if (!id || !position.count(static_cast<int>(*id))) fail("unknown vehicle");
    if (!step || *step < 0 || *step >= T) fail("step out of range");
    const int n = position[static_cast<int>(*id)];
    if (seen[n][*step]) fail("duplicate row");
    seen[n][*step] = 1;
    StepPlan& s = out.steps[n][*step];
    for (int l = 0; l < kNumLocations; ++l) {
      const auto a = parse_int(f[2 + l]);
      if (!a || (*a != 0 && *a != 1)) fail("location flags must be 0 or 1");
      s.at[l] = *a == 1;
      const auto c = parse_double(f[5 + l]);
      const auto d = parse_double(f[8 + l]);
      if (!c || !d) fail("non-numeric power");
      s.charge_kw[l] = *c;
      s.discharge_kw[l] = *d;
    }
    const auto soc = parse_double(f[11]);
    if (!soc) fail("non-numeric soc");
    s.soc_kwh = *soc;
  }
  for (int n = 0; n < config.num_vehicles(); ++n) {
    for (int t = 0; t < T; ++t) {
      if (!seen[n][t]) {
        throw ScheduleError("schedule is missing vehicle " + std::to_string(config.vehicles[n].id) +
                            " step " + std::to_string(t));
      }
    }
  }
  return out;
}

}  // namespace fleetarb
