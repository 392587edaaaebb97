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

#include "fleetarb/model_builder.hpp"

#include <stdexcept>
#include <string>

#include "fleetarb/errors.hpp"

namespace fleetarb {

ColumnLayout::ColumnLayout(int vehicles, int steps, int windows,
                           std::array<bool, kNumLocations> has_visits)
    : vehicles_(vehicles), steps_(steps), windows_(windows), has_visits_(has_visits) {
  for (int l = 0; l < kNumLocations; ++l) {
    if (has_visits_[l]) visit_slot_[l] = num_visit_locations_++;
  }
  visit_base_ = vehicles_ * steps_ * kPerStep;
}

int ColumnLayout::find(VarIndex v) const {
  const int kind = static_cast<int>(v.kind);
  if (v.vehicle < 0 || v.vehicle >= vehicles_) return -1;
  if (v.kind == VarKind::VisitA || v.kind == VarKind::VisitB || v.kind == VarKind::VisitC) {
    const int slot = visit_slot_[kind - 9];
    if (slot < 0 || v.step < 0 || v.step >= windows_) return -1;
    return visit_base_ + (v.vehicle * windows_ + v.step) * num_visit_locations_ + slot;
  }
  if (v.step < 0 || v.step >= steps_) return -1;
  const int offset = v.kind == VarKind::Soc ? 9 : kind;
  return (v.vehicle * steps_ + v.step) * kPerStep + offset;
}

int ColumnLayout::column(VarIndex v) const {
  const int j = find(v);
  if (j < 0) throw std::out_of_range("variable not present in layout");
  return j;
}

VarIndex ColumnLayout::decode(int column) const {
  if (column < 0 || column >= num_columns()) throw std::out_of_range("column outside layout");
  if (column >= visit_base_) {
    const int rel = column - visit_base_;
    const int slot = rel % num_visit_locations_;
    const int vw = rel / num_visit_locations_;
    int loc = 0;
    for (int l = 0; l < kNumLocations; ++l) {
      if (visit_slot_[l] == slot) loc = l;
    }
    return {static_cast<VarKind>(9 + loc), vw / windows_, vw % windows_};
  }
  const int offset = column % kPerStep;
  const int vt = column / kPerStep;
  const VarKind kind = offset == 9 ? VarKind::Soc : static_cast<VarKind>(offset);
  return {kind, vt / steps_, vt % steps_};
}

int num_windows(const FleetConfig& config) {
  return config.delivery.window == VisitWindow::PerDay ? config.horizon.num_days : 1;
}

int window_of(const FleetConfig& config, int step) {
  return config.delivery.window == VisitWindow::PerDay ? step / config.horizon.steps_per_day : 0;
}

namespace {

std::string suffix(int vehicle_id, int step) {
  return "_n" + std::to_string(vehicle_id) + "_t" + std::to_string(step);
}

}  // namespace

BuiltModel build_with_prices(const FleetConfig& config, const PricePanel& prices,
                             const TravelTimeTable& travel, BuildOptions options) {
  validate(config);
  validate(prices);
  const Horizon& h = config.horizon;
  const int T = h.total_steps();
  const int N = config.num_vehicles();
  if (prices.steps() != T) {
    throw DataError("price panel has " + std::to_string(prices.steps()) +
                    " steps but the horizon has " + std::to_string(T));
  }
  if (travel.steps_per_day() != h.steps_per_day) {
    throw DataError("travel table built for a different steps_per_day");
  }
  const bool spatial = options.mode == BuildMode::Spatial;
  if (spatial) {
    for (Location l : kAllLocations) {
      if (config.delivery.min_visits[index_of(l)] > N) {
        throw InfeasibleError(std::string("delivery requirement at ") + location_letter(l) +
                              " needs " + std::to_string(config.delivery.min_visits[index_of(l)]) +
                              " vehicles but the fleet has " + std::to_string(N));
      }
    }
  }

  const int W = num_windows(config);
  std::array<bool, kNumLocations> has_visits{};
  for (int l = 0; l < kNumLocations; ++l) {
    has_visits[l] = spatial && config.delivery.min_visits[l] > 0;
  }

  BuiltModel out;
  out.mode = options.mode;
  out.layout = ColumnLayout(N, T, W, has_visits);
  const ColumnLayout& lay = out.layout;
  MilpInstance& m = out.instance;
  const double dt = h.dt_hours;
  const double pc = config.charger.p_c_max_kw;
  const double pd = config.charger.p_d_max_kw;

  // Columns, in layout order.
  for (int n = 0; n < N; ++n) {
    const VehicleSpec& v = config.vehicles[n];
    for (int t = 0; t < T; ++t) {
      const std::string sfx = suffix(v.id, t);
      for (Location l : kAllLocations) {
        const char L = location_letter(l);
        const double price = prices.price(l, t) * dt;
        m.add_column(std::string("c_") + L + sfx, 0.0, pc, price, false);
        m.add_column(std::string("d_") + L + sfx, 0.0, pd, -price, false);
      }
      for (Location l : kAllLocations) {
        double lo = 0.0;
        double up = 1.0;
        if (!spatial) lo = up = (l == options.warehouse) ? 1.0 : 0.0;
        m.add_column(std::string("ind_") + location_letter(l) + sfx, lo, up, 0.0, true);
      }
      m.add_column("soc" + sfx, v.e_min_kwh, v.capacity_kwh, 0.0, false);
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int w = 0; w < W; ++w) {
      for (Location l : kAllLocations) {
        if (!has_visits[index_of(l)]) continue;
        m.add_column(std::string("visit_") + location_letter(l) + "_n" +
                         std::to_string(config.vehicles[n].id) + "_d" + std::to_string(w),
                     0.0, 1.0, 0.0, true);
      }
    }
  }
  if (m.num_columns() != lay.num_columns()) throw std::logic_error("layout size mismatch");

  auto col = [&](VarKind k, int n, int t) { return lay.column({k, n, t}); };
  std::vector<Term> terms;

  for (int n = 0; n < N; ++n) {
    const VehicleSpec& v = config.vehicles[n];
    for (int t = 0; t < T; ++t) {
      const std::string sfx = suffix(v.id, t);

      // Charger gating: power only where the vehicle is parked.
      for (Location l : kAllLocations) {
        const char L = location_letter(l);
        m.add_row(std::string("gate_c_") + L + sfx,
                  {{col(charge_kind(l), n, t), 1.0}, {col(ind_kind(l), n, t), -pc}},
                  RowSense::LessEqual, 0.0);
        m.add_row(std::string("gate_d_") + L + sfx,
                  {{col(discharge_kind(l), n, t), 1.0}, {col(ind_kind(l), n, t), -pd}},
                  RowSense::LessEqual, 0.0);
      }

      // SOC recursion. Driving draw applies whenever no indicator is set:
      // E(t) - E(t-1) - dt*eta_c*sum c + dt/eta_d*sum d - dt*P*sum ind = -dt*P
      terms.clear();
      terms.push_back({col(VarKind::Soc, n, t), 1.0});
      double rhs = -dt * v.p_drive_kw;
      if (t > 0) {
        terms.push_back({col(VarKind::Soc, n, t - 1), -1.0});
      } else {
        rhs += v.e_init_kwh;
      }
      for (Location l : kAllLocations) {
        terms.push_back({col(charge_kind(l), n, t), -dt * v.eta_c});
        terms.push_back({col(discharge_kind(l), n, t), dt / v.eta_d});
        terms.push_back({col(ind_kind(l), n, t), -dt * v.p_drive_kw});
      }
      m.add_row("socdyn" + sfx, terms, RowSense::Equal, rhs);

      m.add_row("oneloc" + sfx,
                {{col(VarKind::IndA, n, t), 1.0},
                 {col(VarKind::IndB, n, t), 1.0},
                 {col(VarKind::IndC, n, t), 1.0}},
                RowSense::LessEqual, 1.0);
    }

    for (int k = 1; k <= h.num_days; ++k) {
      m.add_row("eod_n" + std::to_string(v.id) + "_d" + std::to_string(k - 1),
                {{col(VarKind::Soc, n, k * h.steps_per_day - 1), 1.0}}, RowSense::Equal,
                v.e_final_kwh);
    }

    if (!spatial) continue;

    // A departure from `from` at t keeps `to` empty for the whole transit.
    for (int t = 0; t < T; ++t) {
      for (Location from : kAllLocations) {
        for (Location to : kAllLocations) {
          if (from == to) continue;
          const int steps = travel.steps(from, to, t);
          for (int tau = 1; tau <= steps && t + tau < T; ++tau) {
            m.add_row(std::string("travel_") + location_letter(from) + location_letter(to) +
                          suffix(v.id, t) + "_k" + std::to_string(tau),
                      {{col(ind_kind(from), n, t), 1.0}, {col(ind_kind(to), n, t + tau), 1.0}},
                      RowSense::LessEqual, 1.0);
          }
        }
      }
    }

    for (Location l : kAllLocations) {
      if (!has_visits[index_of(l)]) continue;
      const char L = location_letter(l);
      for (int w = 0; w < W; ++w) {
        const int first = config.delivery.window == VisitWindow::PerDay ? w * h.steps_per_day : 0;
        const int last = config.delivery.window == VisitWindow::PerDay ? first + h.steps_per_day : T;
        const int visit = col(visit_kind(l), n, w);
        terms.clear();
        terms.push_back({visit, 1.0});
        for (int t = first; t < last; ++t) {
          m.add_row(std::string("visitlb_") + L + suffix(v.id, t),
                    {{visit, 1.0}, {col(ind_kind(l), n, t), -1.0}}, RowSense::GreaterEqual, 0.0);
          terms.push_back({col(ind_kind(l), n, t), -1.0});
        }
        m.add_row(std::string("visitub_") + L + "_n" + std::to_string(v.id) + "_d" +
                      std::to_string(w),
                  terms, RowSense::LessEqual, 0.0);
      }
    }

    if (options.continue_from_home) {
      // Home on the step before: other sites stay out of reach until the
      // trip from home could have finished.
      for (Location l : kAllLocations) {
        if (l == v.home) continue;
        const int reach = travel.steps(v.home, l, h.steps_per_day - 1);
        for (int t = 0; t < reach && t < T; ++t) m.set_bounds(col(ind_kind(l), n, t), 0.0, 0.0);
      }
    } else {
      m.add_row("start_n" + std::to_string(v.id), {{col(ind_kind(v.home), n, 0), 1.0}},
                RowSense::Equal, 1.0);
    }
    if (config.home_return) {
      for (int k = 1; k <= h.num_days; ++k) {
        m.add_row("home_n" + std::to_string(v.id) + "_d" + std::to_string(k - 1),
                  {{col(ind_kind(v.home), n, k * h.steps_per_day - 1), 1.0}}, RowSense::Equal,
                  1.0);
      }
    }
  }

  if (spatial) {
    for (Location l : kAllLocations) {
      if (!has_visits[index_of(l)]) continue;
      for (int w = 0; w < W; ++w) {
        terms.clear();
        for (int n = 0; n < N; ++n) terms.push_back({col(visit_kind(l), n, w), 1.0});
        m.add_row(std::string("deliver_") + location_letter(l) + "_d" + std::to_string(w), terms,
                  RowSense::GreaterEqual,
                  static_cast<double>(config.delivery.min_visits[index_of(l)]));
      }
    }
  }
  return out;
}

BuiltModel build(const FleetConfig& config, const ScenarioSet& scenarios,
                 const TravelTimeTable& travel, BuildOptions options) {
  return build_with_prices(config, mean_panel(scenarios), travel, options);
}

BuiltModel build_counterfactual(const FleetConfig& config, const ScenarioSet& scenarios,
                                const TravelTimeTable& travel) {
  return build_with_prices(config, time_only_panel(mean_panel(scenarios)), travel,
                           {BuildMode::Spatial});
}

}  // namespace fleetarb
