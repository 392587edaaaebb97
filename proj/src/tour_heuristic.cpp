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

#include "fleetarb/tour_heuristic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <tuple>

namespace fleetarb {

namespace {

// Site index per step, -1 while driving.
using Sites = std::vector<int>;

constexpr int kFill = -1;  // stay until the latest return that still makes it home

bool respects_travel(const Sites& sites, const TravelTimeTable& travel) {
  const int T = static_cast<int>(sites.size());
  for (int t = 0; t < T; ++t) {
    if (sites[t] < 0) continue;
    const auto from = static_cast<Location>(sites[t]);
    for (Location to : kAllLocations) {
      if (to == from) continue;
      const int steps = travel.steps(from, to, t);
      for (int tau = 1; tau <= steps && t + tau < T; ++tau) {
        if (sites[t + tau] == index_of(to)) return false;
      }
    }
  }
  return true;
}

struct Shape {
  int depart = 0;          // last step at home before driving
  std::vector<int> stays;  // per stop, or kFill for the last one
};

// Rewrites steps first..last of `sites` as home, then the stops in order,
// then home again by `last`. `depart` may be first - 1 when the vehicle is
// known to be home on that step. A kFill stay is replaced by its length.
std::optional<Sites> make_tour(Sites sites, Location home, const std::vector<Location>& stops,
                               Shape& shape, int first, int last,
                               const TravelTimeTable& travel) {
  const int h = index_of(home);
  if (stops.empty()) {
    for (int t = first; t <= last; ++t) sites[t] = h;
    return sites;
  }
  int p = shape.depart;
  for (int t = first; t <= p; ++t) sites[t] = h;
  Location here = home;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const Location stop = stops[i];
    const int arrive = p + travel.steps(here, stop, p) + 1;
    int end = arrive + shape.stays[i] - 1;
    if (shape.stays[i] == kFill) {
      end = -1;
      for (int e = last - 1; e >= arrive; --e) {
        if (e + travel.steps(stop, home, e) + 1 <= last) {
          end = e;
          break;
        }
      }
      if (end < 0) return std::nullopt;
      shape.stays[i] = end - arrive + 1;
    } else if (shape.stays[i] < 1) {
      return std::nullopt;
    }
    if (end > last) return std::nullopt;
    for (int t = p + 1; t < arrive; ++t) sites[t] = -1;
    for (int t = arrive; t <= end; ++t) sites[t] = index_of(stop);
    p = end;
    here = stop;
  }
  const int back = p + travel.steps(here, home, p) + 1;
  if (back > last) return std::nullopt;
  for (int t = p + 1; t < back; ++t) sites[t] = -1;
  for (int t = back; t <= last; ++t) sites[t] = h;
  return sites;
}

// Cost of one vehicle with its locations fixed: its own LP without delivery
// rows. Results are cached per location sequence.
class VehicleCost {
 public:
  VehicleCost(const FleetConfig& config, int n, const PricePanel& prices,
              const TravelTimeTable& travel, const BuildOptions& options,
              const LpOptions& lp_options)
      : model_(single(config, n, prices, travel, options)), lp_(model_.instance, lp_options) {
    const int cols = model_.instance.num_columns();
    lo_.resize(static_cast<std::size_t>(cols));
    up_.resize(lo_.size());
    for (int j = 0; j < cols; ++j) {
      lo_[j] = model_.instance.col_lower(j);
      up_[j] = model_.instance.col_upper(j);
    }
  }

  std::optional<double> operator()(const Sites& sites) {
    if (auto it = cache_.find(sites); it != cache_.end()) return it->second;
    std::optional<double> cost = solve(sites);
    cache_.emplace(sites, cost);
    return cost;
  }

 private:
  static BuiltModel single(FleetConfig config, int n, const PricePanel& prices,
                           const TravelTimeTable& travel, const BuildOptions& options) {
    config.vehicles = {config.vehicles[n]};
    config.delivery.min_visits = {0, 0, 0};
    return build_with_prices(config, prices, travel, options);
  }

  std::optional<double> solve(const Sites& sites) {
    const MilpInstance& inst = model_.instance;
    for (int t = 0; t < static_cast<int>(sites.size()); ++t) {
      for (Location l : kAllLocations) {
        const int j = model_.layout.column({ind_kind(l), 0, t});
        const double v = sites[t] == index_of(l) ? 1.0 : 0.0;
        if (v < inst.col_lower(j) || v > inst.col_upper(j)) return std::nullopt;
        lo_[j] = up_[j] = v;
      }
    }
    LpSolution s = lp_.solve(lo_, up_, basis_.empty() ? nullptr : &basis_);
    if (s.status != LpStatus::Optimal) return std::nullopt;
    basis_ = lp_.basis();
    return s.objective;
  }

  BuiltModel model_;
  LpSolver lp_;
  std::vector<double> lo_, up_;
  Basis basis_;
  std::map<Sites, std::optional<double>> cache_;
};

struct Search {
  const FleetConfig& config;
  const TravelTimeTable& travel;
  const BuildOptions& options;
  std::vector<std::unique_ptr<VehicleCost>> cost;
  std::vector<Sites> plan;
  std::vector<double> plan_cost;

  bool covered() const {
    const int W = num_windows(config);
    for (int w = 0; w < W; ++w) {
      for (Location l : kAllLocations) {
        const int need = config.delivery.min_visits[index_of(l)];
        if (need == 0) continue;
        int have = 0;
        for (const Sites& s : plan) {
          for (int t = 0; t < static_cast<int>(s.size()); ++t) {
            if (s[t] == index_of(l) && window_of(config, t) == w) {
              ++have;
              break;
            }
          }
        }
        if (have < need) return false;
      }
    }
    return true;
  }

  // Best tour of vehicle n through `stops` on steps first..last, other days
  // unchanged. Coarse grid over departure and stays, then single-step
  // improvements.
  using Tour = std::optional<std::pair<Sites, double>>;
  // The answer only depends on the vehicle's other days.
  std::map<std::tuple<int, std::vector<Location>, Sites>, Tour> tours;

  Tour best_tour(int n, const std::vector<Location>& stops, int first, int last) {
    Sites context = plan[n];
    std::fill(context.begin() + first, context.begin() + last + 1, -2);
    auto key = std::make_tuple(n, stops, std::move(context));
    if (auto it = tours.find(key); it != tours.end()) return it->second;
    Tour r = search_tour(n, stops, first, last);
    tours.emplace(std::move(key), r);
    return r;
  }

  Tour search_tour(int n, const std::vector<Location>& stops, int first, int last) {
    const Location home = config.vehicles[n].home;
    auto eval = [&](Shape& shape) -> std::optional<std::pair<Sites, double>> {
      auto sites = make_tour(plan[n], home, stops, shape, first, last, travel);
      if (!sites || !respects_travel(*sites, travel)) return std::nullopt;
      auto c = (*cost[n])(*sites);
      if (!c) return std::nullopt;
      return std::make_pair(std::move(*sites), *c);
    };
    if (stops.empty()) {
      Shape none;
      return eval(none);
    }

    const int spd = config.horizon.steps_per_day;
    const int earliest = first > 0 || options.continue_from_home ? first - 1 : first;
    const int g = std::max(1, spd / 16);
    std::vector<int> grid_stays;
    for (int s : stops.size() > 1 ? std::vector<int>{1, 2, 4, 8, 16} : std::vector<int>{1, 2, 4, 8, 16, 32, 64}) {
      if (s < spd) grid_stays.push_back(s);
    }
    std::vector<int> last_stays = grid_stays;
    last_stays.push_back(kFill);

    std::optional<std::pair<Sites, double>> best;
    Shape best_shape;
    Shape shape;
    shape.stays.assign(stops.size(), 1);
    auto consider = [&](Shape s) {
      auto r = eval(s);
      if (r && (!best || r->second < best->second - 1e-9)) {
        best = std::move(r);
        best_shape = s;
        return true;
      }
      return false;
    };
    // Enumerate the grid; stays of all but the last stop from grid_stays.
    const std::size_t k = stops.size();
    std::vector<std::size_t> idx(k, 0);
    for (int d = earliest; d < last; d += g) {
      shape.depart = d;
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (std::size_t i = 0; i + 1 < k; ++i) shape.stays[i] = grid_stays[idx[i]];
        shape.stays[k - 1] = last_stays[idx[k - 1]];
        consider(shape);
        std::size_t i = 0;
        for (; i < k; ++i) {
          const std::size_t size = i + 1 < k ? grid_stays.size() : last_stays.size();
          if (++idx[i] < size) break;
          idx[i] = 0;
        }
        if (i == k) break;
      }
    }
    if (!best) return std::nullopt;

    // Local moves: shift departure or resize one stay by one step (or g).
    for (int round = 0; round < 200; ++round) {
      bool improved = false;
      Shape base = best_shape;
      for (int delta : {-1, 1, -g, g}) {
        Shape s = base;
        s.depart += delta;
        if (s.depart < earliest) continue;
        if (consider(s)) improved = true;
      }
      for (std::size_t i = 0; i < k; ++i) {
        for (int delta : {-1, 1, -g, g}) {
          Shape s = base;
          s.stays[i] += delta;
          if (consider(s)) improved = true;
          // Keep the arrival of later stops by moving the departure too.
          s.depart -= delta;
          if (s.depart >= earliest && consider(s)) improved = true;
        }
      }
      if (!improved) break;
    }
    return best;
  }
};

std::vector<std::vector<Location>> stop_sequences(Location home) {
  std::vector<Location> others;
  for (Location l : kAllLocations) {
    if (l != home) others.push_back(l);
  }
  std::vector<std::vector<Location>> out = {{}};
  for (Location a : others) out.push_back({a});
  for (Location a : others) {
    for (Location b : others) {
      if (a != b) out.push_back({a, b});
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<double>> tour_start(const FleetConfig& config, const BuiltModel& model,
                                              const PricePanel& prices,
                                              const TravelTimeTable& travel,
                                              const BuildOptions& options,
                                              const LpOptions& lp_options) {
  if (model.mode != BuildMode::Spatial) return std::nullopt;
  const ColumnLayout& lay = model.layout;
  const int N = config.num_vehicles();
  const int T = lay.num_steps();
  const int spd = config.horizon.steps_per_day;
  const int days = T / spd;
  const int W = num_windows(config);

  Search search{config, travel, options, {}, {}, {}, {}};
  for (int n = 0; n < N; ++n) {
    search.cost.push_back(
        std::make_unique<VehicleCost>(config, n, prices, travel, options, lp_options));
    search.plan.emplace_back(T, index_of(config.vehicles[n].home));
    auto c = (*search.cost[n])(search.plan[n]);
    if (!c) return std::nullopt;
    search.plan_cost.push_back(*c);
  }

  // Cover the delivery requirements: each missing visit goes to the eligible
  // vehicle with the fewest stops, on the first day of the window.
  for (int w = 0; w < W; ++w) {
    const int day = config.delivery.window == VisitWindow::PerDay ? w : 0;
    std::vector<std::vector<Location>> stops(static_cast<std::size_t>(N));
    for (Location l : kAllLocations) {
      int need = config.delivery.min_visits[index_of(l)];
      for (const VehicleSpec& v : config.vehicles) need -= v.home == l;
      for (; need > 0; --need) {
        int pick = -1;
        for (int n = 0; n < N; ++n) {
          const auto& s = stops[n];
          if (config.vehicles[n].home == l || std::find(s.begin(), s.end(), l) != s.end()) continue;
          if (pick < 0 || s.size() < stops[pick].size()) pick = n;
        }
        if (pick < 0) return std::nullopt;
        stops[pick].push_back(l);
      }
    }
    for (int n = 0; n < N; ++n) {
      if (stops[n].empty()) continue;
      auto r = search.best_tour(n, stops[n], day * spd, day * spd + spd - 1);
      if (!r) return std::nullopt;
      search.plan[n] = std::move(r->first);
      search.plan_cost[n] = r->second;
    }
  }
  if (!search.covered()) return std::nullopt;

  // Improve one vehicle-day at a time while the requirements stay covered.
  for (int pass = 0; pass < 3; ++pass) {
    bool improved = false;
    for (int d = 0; d < days; ++d) {
      for (int n = 0; n < N; ++n) {
        for (const auto& seq : stop_sequences(config.vehicles[n].home)) {
          auto r = search.best_tour(n, seq, d * spd, d * spd + spd - 1);
          if (!r || r->second >= search.plan_cost[n] - 1e-9) continue;
          Sites keep = std::move(search.plan[n]);
          search.plan[n] = r->first;
          if (search.covered()) {
            search.plan_cost[n] = r->second;
            improved = true;
          } else {
            search.plan[n] = std::move(keep);
          }
        }
      }
    }
    // One vehicle takes over another's stops so the other can stay home.
    for (int d = 0; d < days; ++d) {
      for (int n = 0; n < N; ++n) {
        for (const auto& seq : stop_sequences(config.vehicles[n].home)) {
          if (seq.size() < 2) continue;
          auto r = search.best_tour(n, seq, d * spd, d * spd + spd - 1);
          if (!r) continue;
          for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            auto idle = search.best_tour(m, {}, d * spd, d * spd + spd - 1);
            if (!idle || r->second + idle->second >=
                             search.plan_cost[n] + search.plan_cost[m] - 1e-9) {
              continue;
            }
            Sites keep_n = search.plan[n], keep_m = search.plan[m];
            search.plan[n] = r->first;
            search.plan[m] = idle->first;
            if (search.covered()) {
              search.plan_cost[n] = r->second;
              search.plan_cost[m] = idle->second;
              improved = true;
              break;
            }
            search.plan[n] = std::move(keep_n);
            search.plan[m] = std::move(keep_m);
          }
        }
      }
    }
    if (!improved) break;
  }

  std::vector<double> x(static_cast<std::size_t>(lay.num_columns()), 0.0);
  for (int n = 0; n < N; ++n) {
    const Sites& plan = search.plan[n];
    for (int t = 0; t < T; ++t) {
      if (plan[t] >= 0) x[lay.column({ind_kind(static_cast<Location>(plan[t])), n, t})] = 1.0;
    }
    for (int w = 0; w < W; ++w) {
      for (Location l : kAllLocations) {
        const int j = lay.find({visit_kind(l), n, w});
        if (j < 0) continue;
        for (int t = 0; t < T; ++t) {
          if (window_of(config, t) == w && plan[t] == index_of(l)) x[j] = 1.0;
        }
      }
    }
  }
  return x;
}

}  // namespace fleetarb
