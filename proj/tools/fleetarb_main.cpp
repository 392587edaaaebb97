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

#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "fleetarb/report.hpp"
#include "fleetarb/scenarios.hpp"

using namespace fleetarb;

int main(int argc, char** argv) {
  CLI::App app{"Plan charging, discharging and travel for an electric truck fleet"};
  app.set_version_flag("--version", "fleetarb 1.0.0");

  RunManifest m;
  std::string scenario = "all";
  double gap = m.limits.gap;
  double time_limit = 0.0;
  long node_limit = 0;
  int export_day = -1;
  int verify_max = -1;
  std::string audit_path;
  std::string node_log_path;

  app.add_option("--config", m.config_path, "fleet configuration file")->required();
  app.add_option("--prices-real", m.prices_real_path,
                 "real-time prices CSV (default: synthetic market from --seed)");
  app.add_option("--prices-dayahead", m.prices_dayahead_path,
                 "day-ahead prices CSV, enables the forecast replay");
  app.add_option("--traffic", m.traffic_path, "travel time CSV (default: 60 mi/h)");
  app.add_option("--scenario", scenario, "spatial, counterfactual, stationary or all")
      ->check(CLI::IsMember({"spatial", "counterfactual", "stationary", "all"}));
  app.add_option("--days", m.days, "number of days to plan (default: from config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", m.seed, "seed for the synthetic market");
  app.add_option("--gap", gap, "relative optimality gap")->check(CLI::NonNegativeNumber);
  app.add_option("--time-limit-s", time_limit, "wall-clock limit per MILP, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--node-limit", node_limit, "branch-and-bound node limit per MILP, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", m.out_dir, "output directory");
  app.add_option("--node-log", node_log_path, "write branch-and-bound progress to this file");
  auto* exp = app.add_option("--export-mps", export_day, "write the MILP of one day as MPS and exit");
  auto* ver = app.add_option("--verify", verify_max,
                             "cross-check each day against exhaustive enumeration of up to N binaries");
  auto* aud = app.add_option("--audit-schedule", audit_path, "check a schedule CSV and exit");
  exp->excludes(ver)->excludes(aud);
  ver->excludes(aud);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (scenario != "all") m.scenarios = {*parse_scenario(scenario)};
  m.limits.gap = gap;
  if (time_limit > 0) m.limits.time_limit_s = time_limit;
  if (node_limit > 0) m.limits.node_limit = node_limit;

  std::ofstream node_log;
  if (!node_log_path.empty()) {
    node_log.open(node_log_path);
    if (!node_log) {
      std::cerr << "data error: cannot write '" << node_log_path << "'\n";
      return kExitData;
    }
    m.node_log = &node_log;
  }

  if (*exp) return cmd_export(m, export_day, std::cout, std::cerr);
  if (*ver) return cmd_verify(m, verify_max, std::cout, std::cerr);
  if (*aud) return cmd_audit(m, audit_path, std::cout, std::cerr);
  return cmd_run(m, std::cout, std::cerr);
}
