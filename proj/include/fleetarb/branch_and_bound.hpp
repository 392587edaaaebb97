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

#include <iosfwd>
#include <limits>
#include <vector>

#include "fleetarb/lp_simplex.hpp"
#include "fleetarb/milp_instance.hpp"

namespace fleetarb {

enum class MilpStatus {
  Optimal,       // gap <= 1e-6
  Feasible,      // incumbent found, gap above 1e-6 (see MilpSolution::gap)
  Infeasible,    // proven
  LimitReached,  // a limit stopped the search before any incumbent was found
};

const char* to_string(MilpStatus status);

struct MilpLimits {
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Relative gap target: (incumbent - bound) / max(1, |incumbent|).
  double gap = 1e-6;
  long node_limit = std::numeric_limits<long>::max();
};

struct MilpOptions {
  MilpLimits limits;
  LpOptions lp;
  double integrality_tol = 1e-6;
  // Run a depth-first dive from the root (and periodically while no
  // incumbent exists) to find a first incumbent.
  bool diving = true;
  // One line per processed node: node,depth,bound,incumbent,gap. `bound` is
  // the global lower bound when the node was selected.
  std::ostream* node_log = nullptr;
  // Optional starting point. Its integer columns are rounded and fixed, the
  // rest is re-solved as an LP; a feasible result seeds the incumbent.
  std::vector<double> start;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
  long lp_iterations = 0;
  // True when the time or node limit ended the search before the gap target.
  bool limit_reached = false;
  double root_lp_objective = -std::numeric_limits<double>::infinity();

  bool has_solution() const { return !x.empty(); }
};

inline constexpr double kOptimalGap = 1e-6;

double relative_gap(double incumbent, double bound);

// Best-first branch-and-bound on the LP bound. Branches on the most
// fractional integer column (ties to the lowest index); children reuse the
// parent's final basis.
MilpSolution solve_milp(const MilpInstance& instance, const MilpOptions& options = {});

// Exhaustive ground truth for small instances: every assignment of the free
// binary columns is enumerated, assignments violating an all-binary row are
// discarded, and the residual LP is solved for the rest. Throws
// std::invalid_argument when more than `max_binaries` binaries are free or a
// free integer column is not binary.
MilpSolution oracle_solve(const MilpInstance& instance, int max_binaries = 24,
                          const LpOptions& lp_options = {});

}  // namespace fleetarb
