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

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fleetarb/milp_instance.hpp"

namespace fleetarb {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  // Smallest pivot magnitude accepted by the ratio test.
  double pivot_tol = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int stall_limit = 200;
  int refactor_interval = 80;
  // 0 picks a limit proportional to the problem size.
  long max_iterations = 0;
};

// Status of every variable: structural columns first, then one logical
// (row activity) variable per row.
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // structural column values
  double objective = 0.0;
  // y = B^-T c_B for the final basis; row activities are r = A x.
  std::vector<double> duals;
  std::vector<double> reduced_costs;  // per structural column
  long iterations = 0;
  // Largest violation of a row or column bound by the returned point.
  double primal_residual = 0.0;
  // Largest wrong-signed reduced cost at the returned point.
  double dual_residual = 0.0;
};

// Bounded-variable revised primal simplex. The constraint matrix is prepared
// once; solve() accepts per-call column bounds and an optional starting basis,
// which is how branch-and-bound warm starts child nodes.
class LpSolver {
 public:
  explicit LpSolver(const MilpInstance& instance, LpOptions options = {});
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  LpSolution solve(std::span<const double> lower, std::span<const double> upper,
                   const Basis* warm_start = nullptr);

  // Basis at the end of the last solve().
  const Basis& basis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Solves the continuous relaxation with the instance's own bounds.
LpSolution solve_lp(const MilpInstance& instance, const LpOptions& options = {});

}  // namespace fleetarb
