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

#include "fleetarb/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fleetarb/errors.hpp"
#include "fleetarb/milp_instance.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/text_util.hpp"
#include "json.hpp"

namespace fleetarb {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kThroughputNote =
    "throughput_kwh counts charging (eta_c * c), discharging (d / eta_d) and driving energy";
constexpr const char* kCounterfactualNote =
    "counterfactual plans on the per-step mean price across sites and settles on site prices";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::string letter(int l) { return std::string(1, location_letter(static_cast<Location>(l))); }

Json metrics_json(const Metrics& m) {
  Json j;
  j["cost_usd"] = m.cost;
  j["distance_mi"] = m.distance_mi;
  j["throughput_kwh"] = m.throughput_kwh;
  return j;
}

Json report_json(const ScenarioReport& r, const FleetConfig& config) {
  Json j;
  j["scenario"] = to_string(r.scenario);
  Json notes = Json::array({kThroughputNote});
  if (r.scenario == Scenario::Counterfactual) notes.push_back(kCounterfactualNote);
  j["notes"] = notes;
  Json sites;
  for (int l = 0; l < kNumLocations; ++l) sites[letter(l)] = config.location_names[l];
  j["sites"] = sites;
  j["steps_per_day"] = config.horizon.steps_per_day;
  j["dt_hours"] = config.horizon.dt_hours;
  j["vehicles"] = config.num_vehicles();
  j["total"] = metrics_json(r.total);
  Json days = Json::array();
  for (const DayResult& d : r.days) {
    Json dj;
    dj["day"] = d.day;
    dj["cost_usd"] = d.metrics.cost;
    dj["distance_mi"] = d.metrics.distance_mi;
    dj["throughput_kwh"] = d.metrics.throughput_kwh;
    dj["planned_cost_usd"] = d.planned_cost;
    dj["status"] = to_string(d.status);
    dj["gap"] = std::isfinite(d.gap) ? Json(d.gap) : Json(nullptr);
    dj["nodes"] = d.nodes;
    days.push_back(dj);
  }
  j["days"] = days;
  Json trips;
  for (int a = 0; a < kNumLocations; ++a) {
    for (int b = 0; b < kNumLocations; ++b) {
      if (a != b) trips[letter(a) + "->" + letter(b)] = r.trips[a][b];
    }
  }
  j["trips"] = trips;
  Json power = Json::array();
  Json counts = Json::array();
  for (std::size_t t = 0; t < r.net_power_kw.size(); ++t) {
    power.push_back(Json::array({r.net_power_kw[t][0], r.net_power_kw[t][1], r.net_power_kw[t][2]}));
    counts.push_back(
        Json::array({r.vehicle_counts[t][0], r.vehicle_counts[t][1], r.vehicle_counts[t][2]}));
  }
  j["net_power_kw"] = power;
  j["vehicle_counts"] = counts;
  j["fleet_soc_kwh"] = r.fleet_soc_kwh;
  return j;
}

void write_report_files(const ScenarioReport& r, const FleetConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "report.json");
    out << report_json(r, config).dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "metrics.csv");
    out << "# " << kThroughputNote << '\n';
    if (r.scenario == Scenario::Counterfactual) out << "# " << kCounterfactualNote << '\n';
    out << "day,cost_usd,distance_mi,throughput_kwh,planned_cost_usd,status,gap,nodes\n";
    for (const DayResult& d : r.days) {
      out << d.day << ',' << format_double(d.metrics.cost) << ','
          << format_double(d.metrics.distance_mi) << ',' << format_double(d.metrics.throughput_kwh)
          << ',' << format_double(d.planned_cost) << ',' << to_string(d.status) << ','
          << (std::isfinite(d.gap) ? format_double(d.gap) : "") << ',' << d.nodes << '\n';
    }
    out << "total," << format_double(r.total.cost) << ',' << format_double(r.total.distance_mi)
        << ',' << format_double(r.total.throughput_kwh) << ",,,,\n";
  }
  {
    auto out = open_out(dir / "net_power.csv");
    out << "step,location,kw\n";
    for (std::size_t t = 0; t < r.net_power_kw.size(); ++t) {
      for (int l = 0; l < kNumLocations; ++l) {
        out << t << ',' << letter(l) << ',' << format_double(r.net_power_kw[t][l]) << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "vehicle_counts.csv");
    out << "step,location,vehicles\n";
    for (std::size_t t = 0; t < r.vehicle_counts.size(); ++t) {
      for (int l = 0; l < kNumLocations; ++l) {
        out << t << ',' << letter(l) << ',' << r.vehicle_counts[t][l] << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "soc.csv");
    out << "step,fleet_soc_kwh\n";
    for (std::size_t t = 0; t < r.fleet_soc_kwh.size(); ++t) {
      out << t << ',' << format_double(r.fleet_soc_kwh[t]) << '\n';
    }
  }
  {
    auto out = open_out(dir / "trips.csv");
    out << "from,to,trips\n";
    for (int a = 0; a < kNumLocations; ++a) {
      for (int b = 0; b < kNumLocations; ++b) {
        if (a != b) out << letter(a) << ',' << letter(b) << ',' << r.trips[a][b] << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "schedule.csv");
    write_schedule_csv(out, r.schedule, config);
  }
}

const DayResult* worst_day(const ScenarioReport& r) {
  const DayResult* worst = nullptr;
  for (const DayResult& d : r.days) {
    if (!worst || d.gap > worst->gap) worst = &d;
  }
  return worst;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ScheduleError& e) {
    err << "schedule error: " << e.what() << '\n';
    return kExitData;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const LimitReachedError& e) {
    err << "limit reached: " << e.what() << '\n';
    return kExitLimit;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFailed;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kExitData;
  }
}

SolveSettings settings_for(const RunManifest& m) {
  SolveSettings s;
  s.limits = m.limits;
  s.node_log = m.node_log;
  return s;
}

}  // namespace

RunInputs load_inputs(const RunManifest& m) {
  if (m.config_path.empty()) throw ConfigError("no config file given");
  if (!fs::exists(m.config_path)) throw ConfigError("config file '" + m.config_path + "' not found");
  for (const std::string* p : {&m.prices_real_path, &m.prices_dayahead_path, &m.traffic_path}) {
    if (!p->empty() && !fs::exists(*p)) throw DataError("input file '" + *p + "' not found");
  }
  RunInputs in;
  in.config = load_config_file(m.config_path);
  if (m.days < 0) throw ConfigError("days must be positive");
  if (m.days > 0) in.config.horizon.num_days = m.days;
  const Horizon& h = in.config.horizon;
  const ZoneNames& zones = in.config.location_names;

  if (m.prices_real_path.empty()) {
    SyntheticMarketOptions o;
    o.horizon = h;
    o.seed = m.seed;
    SyntheticMarket market = synthetic_market(o);
    in.real_time = std::move(market.real_time);
    in.day_ahead = std::move(market.day_ahead);
  } else {
    in.real_time = load_prices_file(m.prices_real_path, h, zones);
  }
  if (!m.prices_dayahead_path.empty()) {
    in.day_ahead = load_prices_file(m.prices_dayahead_path, h, zones);
  }
  in.travel = m.traffic_path.empty()
                  ? TravelTimeTable(in.config.distances_mi, h)
                  : load_travel_times_file(m.traffic_path, h, in.config.distances_mi, zones);
  return in;
}

RunResult run_manifest(const RunManifest& m, const RunInputs& in) {
  RunResult r;
  const SolveSettings settings = settings_for(m);
  for (Scenario s : m.scenarios) {
    r.reports.push_back(
        run_scenario(in.config, single_scenario(in.real_time), in.travel, s, settings));
  }
  if (in.day_ahead) {
    r.forecast = forecast_replay(in.config, *in.day_ahead, in.real_time, in.travel, settings);
  }
  return r;
}

void write_outputs(const RunResult& result, const RunInputs& in, const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root);
  for (const ScenarioReport& r : result.reports) {
    write_report_files(r, in.config, root / to_string(r.scenario));
  }
  {
    auto out = open_out(root / "summary.csv");
    out << "# " << kThroughputNote << '\n';
    out << "scenario,cost_usd,distance_mi,throughput_kwh,worst_status,worst_gap\n";
    for (const ScenarioReport& r : result.reports) {
      const DayResult* w = worst_day(r);
      out << to_string(r.scenario) << ',' << format_double(r.total.cost) << ','
          << format_double(r.total.distance_mi) << ',' << format_double(r.total.throughput_kwh)
          << ',' << (w ? to_string(w->status) : "") << ','
          << (w && std::isfinite(w->gap) ? format_double(w->gap) : "") << '\n';
    }
  }
  if (result.forecast) {
    auto out = open_out(root / "forecast.csv");
    out << "day,planned_cost_usd,settled_cost_usd,delta_usd,net_energy_kwh\n";
    for (const ForecastDay& d : result.forecast->days) {
      out << d.day << ',' << format_double(d.planned_cost) << ',' << format_double(d.settled_cost)
          << ',' << format_double(d.delta) << ',' << format_double(d.net_energy_kwh) << '\n';
    }
    out << "total," << format_double(result.forecast->planned_cost) << ','
        << format_double(result.forecast->settled_cost) << ','
        << format_double(result.forecast->settled_cost - result.forecast->planned_cost) << ",\n";
  }
}

void print_summary(std::ostream& out, const RunResult& result) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-15s %12s %12s %15s  %s\n", "scenario", "cost_usd",
                "distance_mi", "throughput_kwh", "solve");
  out << line;
  for (const ScenarioReport& r : result.reports) {
    const DayResult* w = worst_day(r);
    std::string solve = "-";
    if (w) {
      solve = w->status == MilpStatus::Optimal ? "optimal" : "feasible, worst gap ";
      if (w->status != MilpStatus::Optimal) {
        char g[32];
        std::snprintf(g, sizeof(g), "%.3g", w->gap);
        solve += g;
      }
    }
    std::snprintf(line, sizeof(line), "%-15s %12.2f %12.1f %15.1f  %s\n", to_string(r.scenario),
                  r.total.cost, r.total.distance_mi, r.total.throughput_kwh, solve.c_str());
    out << line;
  }
  if (result.forecast) {
    std::snprintf(line, sizeof(line), "forecast replay: planned %.2f, settled %.2f, delta %.2f\n",
                  result.forecast->planned_cost, result.forecast->settled_cost,
                  result.forecast->settled_cost - result.forecast->planned_cost);
    out << line;
  }
}

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunInputs in = load_inputs(m);
    const RunResult result = run_manifest(m, in);
    write_outputs(result, in, m.out_dir);
    print_summary(out, result);
    return kExitOk;
  });
}

int cmd_export(const RunManifest& m, int day, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunInputs in = load_inputs(m);
    const DayProblem p = day_problem(in.config, in.real_time, BuildMode::Spatial, day);
    const BuiltModel model = build_with_prices(p.config, p.prices, in.travel, p.options);
    fs::create_directories(m.out_dir);
    const fs::path path = fs::path(m.out_dir) / ("day" + std::to_string(day) + ".mps");
    export_mps(model.instance, path.string());
    out << path.string() << ": " << model.instance.num_columns() << " columns, "
        << model.instance.num_rows() << " rows, " << model.instance.num_integer_columns()
        << " integer\n";
    return kExitOk;
  });
}

int cmd_verify(const RunManifest& m, int max_binaries, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunInputs in = load_inputs(m);
    bool all_pass = true;
    for (int k = 0; k < in.config.horizon.num_days; ++k) {
      const DayProblem p = day_problem(in.config, in.real_time, BuildMode::Spatial, k);
      const BuiltModel model = build_with_prices(p.config, p.prices, in.travel, p.options);
      const int free = model.instance.num_free_integer_columns();
      if (free > max_binaries) {
        throw ConfigError("day " + std::to_string(k) + " has " + std::to_string(free) +
                          " free binaries, more than the oracle limit " +
                          std::to_string(max_binaries));
      }
      MilpOptions mo;
      mo.limits = m.limits;
      const MilpSolution milp = solve_milp(model.instance, mo);
      const MilpSolution oracle = oracle_solve(model.instance, max_binaries);

      char line[200];
      if (!milp.has_solution() || !oracle.has_solution()) {
        const bool agree = milp.status == oracle.status;
        std::snprintf(line, sizeof(line), "day %d: milp %s, oracle %s  %s\n", k,
                      to_string(milp.status), to_string(oracle.status), agree ? "PASS" : "FAIL");
        out << line;
        all_pass = all_pass && agree;
        continue;
      }
      const double diff = std::abs(milp.objective - oracle.objective);
      const bool same = diff <= 1e-6 * std::max(1.0, std::abs(oracle.objective));
      const FleetSchedule schedule = extract_schedule(p.config, model, milp.x);
      const double cost = evaluate_cost(schedule, p.prices);
      const bool consistent = std::abs(cost - milp.objective) <= 1e-6 * std::max(1.0, std::abs(cost));
      AuditOptions ao;
      ao.continue_from_home = p.options.continue_from_home;
      const auto violations = audit(schedule, p.config, in.travel, ao);
      const bool pass = same && consistent && violations.empty();
      std::snprintf(line, sizeof(line),
                    "day %d: milp %.6f oracle %.6f |diff| %.3g, schedule cost %.6f, audit %s  %s\n",
                    k, milp.objective, oracle.objective, diff, cost,
                    violations.empty() ? "clean" : "violations", pass ? "PASS" : "FAIL");
      out << line;
      for (const Violation& v : violations) out << "  " << v.row << ": " << v.detail << '\n';
      all_pass = all_pass && pass;
    }
    out << (all_pass ? "PASS\n" : "FAIL\n");
    return all_pass ? kExitOk : kExitFailed;
  });
}

int cmd_audit(const RunManifest& m, const std::string& schedule_path, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const RunInputs in = load_inputs(m);
    std::ifstream file(schedule_path);
    if (!file) throw DataError("cannot open schedule '" + schedule_path + "'");
    const FleetSchedule schedule = read_schedule_csv(file, in.config);
    const auto violations = audit(schedule, in.config, in.travel);
    for (const Violation& v : violations) out << "FAIL " << v.row << ": " << v.detail << '\n';
    if (violations.empty()) {
      const Metrics metrics = account(schedule, in.config, in.travel, in.real_time);
      char line[160];
      std::snprintf(line, sizeof(line),
                    "PASS cost %.4f USD, distance %.1f mi, throughput %.1f kWh\n", metrics.cost,
                    metrics.distance_mi, metrics.throughput_kwh);
      out << line;
      return kExitOk;
    }
    return kExitFailed;
  });
}

}  // namespace fleetarb
