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

#include "fleetarb/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "fleetarb/errors.hpp"

namespace fleetarb {

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Feasible: return "feasible";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::LimitReached: return "limit-reached";
  }
  return "?";
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return std::numeric_limits<double>::infinity();
  if (!std::isfinite(bound)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

namespace {

struct BoundChange {
  int column;
  double lower;
  double upper;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInfinity;  // parent's LP objective
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> warm;
};

struct NodeOrder {
  // Lowest bound first, then lowest id.
  bool operator()(const Node* a, const Node* b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

class Search {
 public:
  Search(const MilpInstance& inst, const MilpOptions& opt)
      : inst_(inst), opt_(opt), lp_(inst, opt.lp), start_(std::chrono::steady_clock::now()) {
    const int n = inst.num_columns();
    root_lo_.resize(static_cast<std::size_t>(n));
    root_up_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      root_lo_[j] = inst.col_lower(j);
      root_up_[j] = inst.col_upper(j);
      if (inst.is_integer(j)) {
        root_lo_[j] = std::ceil(root_lo_[j] - opt.integrality_tol);
        root_up_[j] = std::floor(root_up_[j] + opt.integrality_tol);
        integer_columns_.push_back(j);
      }
    }
  }

  MilpSolution run();

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void apply(const std::vector<BoundChange>& changes) {
    lo_ = root_lo_;
    up_ = root_up_;
    for (const auto& c : changes) {
      lo_[c.column] = c.lower;
      up_[c.column] = c.upper;
    }
  }

  LpSolution solve_node(const Basis* warm) {
    LpSolution s = lp_.solve(lo_, up_, warm);
    if (s.status == LpStatus::IterationLimit && warm != nullptr) {
      s = lp_.solve(lo_, up_, nullptr);
    }
    lp_iterations_ += s.iterations;
    if (s.status == LpStatus::IterationLimit) {
      throw NumericalError("LP iteration limit at a branch-and-bound node");
    }
    return s;
  }

  // Most fractional integer column, ties to the lowest index; -1 if integral.
  int branching_column(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 0.0;
    for (int j : integer_columns_) {
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= opt_.integrality_tol) continue;
      if (dist > best_frac + 1e-12) {
        best_frac = dist;
        best = j;
      }
    }
    return best;
  }

  // Least fractional column, for diving.
  int diving_column(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 1.0;
    for (int j : integer_columns_) {
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= opt_.integrality_tol) continue;
      if (dist < best_frac - 1e-12) {
        best_frac = dist;
        best = j;
      }
    }
    return best;
  }

  void offer_incumbent(const LpSolution& s) {
    if (s.objective < incumbent_obj_) {
      incumbent_obj_ = s.objective;
      incumbent_ = s.x;
    }
  }

  bool limits_hit(long nodes) const {
    return nodes >= opt_.limits.node_limit || elapsed() >= opt_.limits.time_limit_s;
  }

  double prune_threshold() const {
    if (!std::isfinite(incumbent_obj_)) return kInfinity;
    return incumbent_obj_ - opt_.limits.gap * std::max(1.0, std::abs(incumbent_obj_));
  }

  void try_start() {
    if (opt_.start.size() != root_lo_.size()) {
      throw std::invalid_argument("start point has the wrong number of columns");
    }
    std::vector<BoundChange> fixed;
    for (int j : integer_columns_) {
      const double r = std::clamp(std::round(opt_.start[j]), root_lo_[j], root_up_[j]);
      fixed.push_back({j, r, r});
    }
    apply(fixed);
    LpSolution s = solve_node(nullptr);
    if (s.status == LpStatus::Optimal) offer_incumbent(s);
  }

  // Re-solves the incumbent with its integer columns fixed at exact integers
  // so the continuous part is consistent with the rounded values.
  void polish() {
    std::vector<BoundChange> fixed;
    for (int j : integer_columns_) {
      const double r = std::round(incumbent_[j]);
      fixed.push_back({j, r, r});
    }
    apply(fixed);
    LpSolution s = solve_node(nullptr);
    if (s.status == LpStatus::Optimal) {
      incumbent_ = std::move(s.x);
      incumbent_obj_ = s.objective;
    }
  }

  void dive(const std::vector<BoundChange>& start, const LpSolution& start_lp,
            const Basis& start_basis);

  const MilpInstance& inst_;
  const MilpOptions& opt_;
  LpSolver lp_;
  std::chrono::steady_clock::time_point start_;
  std::vector<double> root_lo_, root_up_, lo_, up_;
  std::vector<int> integer_columns_;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInfinity;
  long lp_iterations_ = 0;
};

void Search::dive(const std::vector<BoundChange>& start, const LpSolution& start_lp,
                  const Basis& start_basis) {
  std::vector<BoundChange> changes = start;
  LpSolution lp = start_lp;
  Basis basis = start_basis;
  const long budget = 2 * static_cast<long>(integer_columns_.size()) + 50;
  long solves = 0;
  while (solves < budget) {
    if (lp.objective >= prune_threshold()) return;
    const int j = diving_column(lp.x);
    if (j < 0) {
      offer_incumbent(lp);
      return;
    }
    const double v = lp.x[j];
    const double nearest = std::round(v);
    const double other = nearest > v ? std::floor(v) : std::ceil(v);

    // Integer columns the LP already has integral are fixed along with the
    // rounded one; that keeps the dive short. Retried without them, then
    // with the opposite rounding, before giving up.
    std::vector<BoundChange> integral;
    for (int k : integer_columns_) {
      if (k == j || lo_[k] == up_[k]) continue;
      const double r = std::round(lp.x[k]);
      if (std::abs(lp.x[k] - r) <= opt_.integrality_tol) integral.push_back({k, r, r});
    }
    struct Attempt {
      double target;
      bool with_integral;
    };
    bool advanced = false;
    for (Attempt a : {Attempt{nearest, true}, Attempt{nearest, false}, Attempt{other, false}}) {
      if (a.with_integral && integral.empty()) continue;
      const std::size_t mark = changes.size();
      changes.push_back({j, a.target, a.target});
      if (a.with_integral) changes.insert(changes.end(), integral.begin(), integral.end());
      apply(changes);
      LpSolution next = solve_node(&basis);
      ++solves;
      if (next.status == LpStatus::Optimal) {
        lp = std::move(next);
        basis = lp_.basis();
        advanced = true;
        break;
      }
      changes.resize(mark);
      if (elapsed() >= opt_.limits.time_limit_s) return;
    }
    if (!advanced) return;
  }
}

MilpSolution Search::run() {
  MilpSolution out;
  for (int j : integer_columns_) {
    if (root_lo_[j] > root_up_[j]) {
      out.status = MilpStatus::Infeasible;
      return out;
    }
  }

  std::priority_queue<Node*, std::vector<Node*>, NodeOrder> frontier;
  std::vector<std::unique_ptr<Node>> storage;
  auto push = [&](Node node) {
    storage.push_back(std::make_unique<Node>(std::move(node)));
    frontier.push(storage.back().get());
  };
  long next_id = 0;
  push(Node{next_id++, 0, -kInfinity, {}, nullptr});

  if (!opt_.start.empty()) try_start();

  long nodes = 0;
  double global_bound = -kInfinity;
  bool stopped = false;
  bool root = true;

  while (!frontier.empty()) {
    // Global bound: lowest open bound, capped by the incumbent.
    const double open_bound = frontier.top()->bound;
    global_bound = std::max(global_bound, std::min(open_bound, incumbent_obj_));
    if (std::isfinite(incumbent_obj_) &&
        relative_gap(incumbent_obj_, global_bound) <= opt_.limits.gap) {
      break;
    }
    if (limits_hit(nodes)) {
      stopped = true;
      break;
    }

    Node* node = frontier.top();
    frontier.pop();
    if (node->bound >= prune_threshold()) continue;
    ++nodes;

    apply(node->changes);
    LpSolution lp = solve_node(node->warm.get());
    auto basis = std::make_shared<const Basis>(lp_.basis());
    const double bound = std::max(node->bound, lp.objective);

    if (root) {
      root = false;
      if (lp.status == LpStatus::Infeasible) {
        if (opt_.node_log) *opt_.node_log << "1,0," << kInfinity << ',' << kInfinity << ",inf\n";
        out.status = MilpStatus::Infeasible;
        out.nodes = nodes;
        out.lp_iterations = lp_iterations_;
        return out;
      }
      if (lp.status == LpStatus::Unbounded) {
        throw std::invalid_argument("MILP relaxation is unbounded");
      }
      out.root_lp_objective = lp.objective;
    }

    int branch = -1;
    double branch_lo = 0.0, branch_up = 0.0;
    if (lp.status == LpStatus::Optimal && bound < prune_threshold()) {
      branch = branching_column(lp.x);
      if (branch >= 0) {
        // The dive overwrites lo_/up_.
        branch_lo = lo_[branch];
        branch_up = up_[branch];
      }
      if (branch < 0) {
        offer_incumbent(lp);
      } else if (opt_.diving && (nodes == 1 || nodes % (std::isfinite(incumbent_obj_) ? 200 : 50) == 0)) {
        dive(node->changes, lp, *basis);
      }
    }

    if (opt_.node_log) {
      const double shown = std::isfinite(incumbent_obj_) ? incumbent_obj_ : kInfinity;
      *opt_.node_log << nodes << ',' << node->depth << ',' << global_bound << ',' << shown << ','
                     << relative_gap(incumbent_obj_, global_bound) << '\n';
    }

    if (branch >= 0 && bound < prune_threshold()) {
      const double v = lp.x[branch];
      Node down{next_id++, node->depth + 1, bound, node->changes, basis};
      down.changes.push_back({branch, branch_lo, std::floor(v)});
      Node up{next_id++, node->depth + 1, bound, node->changes, basis};
      up.changes.push_back({branch, std::ceil(v), branch_up});
      push(std::move(down));
      push(std::move(up));
    }
    // Processed nodes only keep memory alive through their children.
    node->changes.clear();
    node->changes.shrink_to_fit();
    node->warm.reset();
  }

  out.nodes = nodes;
  out.lp_iterations = lp_iterations_;
  if (frontier.empty() && !stopped) {
    global_bound = std::isfinite(incumbent_obj_) ? incumbent_obj_ : kInfinity;
  } else if (!frontier.empty()) {
    global_bound = std::max(global_bound, std::min(frontier.top()->bound, incumbent_obj_));
  }
  out.bound = global_bound;
  if (!std::isfinite(incumbent_obj_)) {
    out.status = stopped ? MilpStatus::LimitReached : MilpStatus::Infeasible;
    out.limit_reached = stopped;
    return out;
  }
  polish();
  out.x = incumbent_;
  out.objective = incumbent_obj_;
  out.gap = relative_gap(incumbent_obj_, global_bound);
  out.status = out.gap <= kOptimalGap ? MilpStatus::Optimal : MilpStatus::Feasible;
  out.limit_reached = stopped && out.gap > opt_.limits.gap;
  return out;
}

}  // namespace

MilpSolution solve_milp(const MilpInstance& instance, const MilpOptions& options) {
  instance.check();
  Search search(instance, options);
  return search.run();
}

MilpSolution oracle_solve(const MilpInstance& inst, int max_binaries,
                          const LpOptions& lp_options) {
  const int n = inst.num_columns();
  std::vector<double> lo(static_cast<std::size_t>(n)), up(static_cast<std::size_t>(n));
  std::vector<int> free_binaries;
  std::vector<char> binary(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    lo[j] = inst.col_lower(j);
    up[j] = inst.col_upper(j);
    if (!inst.is_integer(j)) continue;
    lo[j] = std::ceil(lo[j] - 1e-9);
    up[j] = std::floor(up[j] + 1e-9);
    if (lo[j] > up[j]) {
      MilpSolution s;
      s.status = MilpStatus::Infeasible;
      return s;
    }
    if (lo[j] == up[j]) {
      binary[j] = lo[j] == 0.0 || lo[j] == 1.0;
      continue;
    }
    if (lo[j] != 0.0 || up[j] != 1.0) {
      throw std::invalid_argument("oracle_solve supports binary integer columns only");
    }
    binary[j] = 1;
    free_binaries.push_back(j);
  }
  if (static_cast<int>(free_binaries.size()) > max_binaries) {
    throw std::invalid_argument("too many binaries for the oracle: " +
                                std::to_string(free_binaries.size()) + " > " +
                                std::to_string(max_binaries));
  }
  const int k = static_cast<int>(free_binaries.size());
  std::vector<int> order_of(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < k; ++p) order_of[free_binaries[p]] = p;

  // All-binary rows, grouped by the depth at which their last free binary is
  // assigned (0 for rows without free binaries).
  std::vector<std::vector<int>> rows_at(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < inst.num_rows(); ++i) {
    bool pure = true;
    int last = 0;
    for (const Term& t : inst.row(i)) {
      if (!binary[t.column]) {
        pure = false;
        break;
      }
      if (order_of[t.column] >= 0) last = std::max(last, order_of[t.column] + 1);
    }
    if (pure) rows_at[last].push_back(i);
  }

  std::vector<double> value(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    if (binary[j] && order_of[j] < 0) value[j] = lo[j];
  }
  auto row_ok = [&](int i) {
    double act = 0.0;
    for (const Term& t : inst.row(i)) act += t.coefficient * value[t.column];
    switch (inst.row_sense(i)) {
      case RowSense::LessEqual: return act <= inst.rhs(i) + 1e-9;
      case RowSense::GreaterEqual: return act >= inst.rhs(i) - 1e-9;
      case RowSense::Equal: return std::abs(act - inst.rhs(i)) <= 1e-9;
    }
    return false;
  };

  MilpSolution best;
  best.status = MilpStatus::Infeasible;
  LpSolver lp(inst, lp_options);
  Basis basis;
  long solves = 0;
  long iterations = 0;

  // Iterative depth-first enumeration over 0/1 values in column order.
  std::vector<int> choice(static_cast<std::size_t>(k), -1);
  int depth = 0;
  for (int i : rows_at[0]) {
    if (!row_ok(i)) {
      best.nodes = 0;
      return best;
    }
  }
  while (depth >= 0) {
    if (depth == k) {
      std::vector<double> flo = lo, fup = up;
      for (int p = 0; p < k; ++p) flo[free_binaries[p]] = fup[free_binaries[p]] = value[free_binaries[p]];
      LpSolution s = lp.solve(flo, fup, basis.empty() ? nullptr : &basis);
      if (s.status == LpStatus::IterationLimit) s = lp.solve(flo, fup, nullptr);
      ++solves;
      iterations += s.iterations;
      if (s.status == LpStatus::Optimal) {
        basis = lp.basis();
        if (s.objective < best.objective - 1e-9) {
          best.objective = s.objective;
          best.x = s.x;
          best.status = MilpStatus::Optimal;
        }
      } else if (s.status == LpStatus::Unbounded) {
        throw std::invalid_argument("residual LP is unbounded");
      }
      --depth;
      continue;
    }
    int& c = choice[depth];
    if (c == 1) {
      c = -1;
      --depth;
      continue;
    }
    ++c;
    value[free_binaries[depth]] = static_cast<double>(c);
    bool ok = true;
    for (int i : rows_at[depth + 1]) {
      if (!row_ok(i)) {
        ok = false;
        break;
      }
    }
    if (ok) ++depth;
  }

  best.nodes = solves;
  best.lp_iterations = iterations;
  if (best.status == MilpStatus::Optimal) {
    best.bound = best.objective;
    best.gap = 0.0;
  }
  return best;
}

}  // namespace fleetarb
