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

#include "fleetarb/lp_simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fleetarb/errors.hpp"

namespace fleetarb {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

// Product-form update for one basis change at position `row`.
struct Eta {
  int row = 0;
  double pivot = 1.0;
  std::vector<int> index;  // positions other than `row`
  std::vector<double> value;
};

}  // namespace

struct LpSolver::Impl {
  LpOptions opt;
  int n = 0;  // structural columns
  int m = 0;  // rows, one logical variable each
  std::vector<int> col_start;
  std::vector<int> col_row;
  std::vector<double> col_val;
  std::vector<double> cost;
  std::vector<double> row_lo;
  std::vector<double> row_hi;

  // Working state for the current solve.
  std::vector<double> lo, hi, x;
  std::vector<VarStatus> status;
  std::vector<int> basic;  // variable at each basis position
  std::vector<int> pos;    // basis position of each variable, or -1
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<Eta> etas;
  Basis last_basis;

  Impl(const MilpInstance& inst, LpOptions o) : opt(o) {
    n = inst.num_columns();
    m = inst.num_rows();
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < m; ++i) {
      for (const Term& t : inst.row(i)) ++count[t.column + 1];
    }
    col_start.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 0; j < n; ++j) col_start[j + 1] = col_start[j] + count[j + 1];
    col_row.resize(static_cast<std::size_t>(col_start[n]));
    col_val.resize(static_cast<std::size_t>(col_start[n]));
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (int i = 0; i < m; ++i) {
      for (const Term& t : inst.row(i)) {
        col_row[fill[t.column]] = i;
        col_val[fill[t.column]] = t.coefficient;
        ++fill[t.column];
      }
    }
    cost.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) cost[j] = inst.cost(j);
    row_lo.resize(static_cast<std::size_t>(m));
    row_hi.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      switch (inst.row_sense(i)) {
        case RowSense::LessEqual: row_lo[i] = -kInfinity; row_hi[i] = inst.rhs(i); break;
        case RowSense::GreaterEqual: row_lo[i] = inst.rhs(i); row_hi[i] = kInfinity; break;
        case RowSense::Equal: row_lo[i] = row_hi[i] = inst.rhs(i); break;
      }
    }
  }

  int total() const { return n + m; }

  // Column of [A  -I] for variable j, accumulated into v with factor s.
  void add_column(int j, double s, Vector& v) const {
    if (j < n) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k) v[col_row[k]] += s * col_val[k];
    } else {
      v[j - n] -= s;
    }
  }

  double dot_column(int j, const Vector& y) const {
    if (j >= n) return -y[j - n];
    double s = 0.0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) s += col_val[k] * y[col_row[k]];
    return s;
  }

  bool factorize() {
    etas.clear();
    if (m == 0) return true;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 3);
    for (int k = 0; k < m; ++k) {
      const int j = basic[k];
      if (j < n) {
        for (int p = col_start[j]; p < col_start[j + 1]; ++p) {
          trip.emplace_back(col_row[p], k, col_val[p]);
        }
      } else {
        trip.emplace_back(j - n, k, -1.0);
      }
    }
    SparseMatrix b(m, m);
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    lu.analyzePattern(b);
    lu.factorize(b);
    return lu.info() == Eigen::Success;
  }

  void ftran(Vector& v) const {
    if (m == 0) return;
    v = lu.solve(v);
    for (const Eta& e : etas) {
      const double xr = v[e.row] / e.pivot;
      v[e.row] = xr;
      if (xr == 0.0) continue;
      for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * xr;
    }
  }

  void btran(Vector& v) {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v[it->row];
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->row] = s / it->pivot;
    }
    v = lu.transpose().solve(v);
  }

  double nonbasic_value(int j) const {
    switch (status[j]) {
      case VarStatus::AtLower: return lo[j];
      case VarStatus::AtUpper: return hi[j];
      default: return 0.0;
    }
  }

  // Recomputes basic values from the nonbasic ones: B x_B = -N x_N.
  void compute_basic_values() {
    if (m == 0) return;
    Vector rhs = Vector::Zero(m);
    for (int j = 0; j < total(); ++j) {
      if (status[j] == VarStatus::Basic) continue;
      x[j] = nonbasic_value(j);
      if (x[j] != 0.0) add_column(j, -x[j], rhs);
    }
    ftran(rhs);
    for (int k = 0; k < m; ++k) x[basic[k]] = rhs[k];
  }

  VarStatus resting_status(int j) const {
    if (std::isfinite(lo[j])) return VarStatus::AtLower;
    if (std::isfinite(hi[j])) return VarStatus::AtUpper;
    return VarStatus::Free;
  }

  void slack_basis() {
    basic.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < n; ++j) status[j] = resting_status(j);
    for (int i = 0; i < m; ++i) {
      status[n + i] = VarStatus::Basic;
      basic[i] = n + i;
    }
  }

  bool load_basis(const Basis& b) {
    if (static_cast<int>(b.status.size()) != total()) return false;
    int count = 0;
    for (VarStatus s : b.status) count += s == VarStatus::Basic;
    if (count != m) return false;
    status = b.status;
    basic.clear();
    for (int j = 0; j < total(); ++j) {
      if (status[j] == VarStatus::Basic) {
        basic.push_back(j);
        continue;
      }
      // Bounds may have moved since the basis was saved.
      if (status[j] == VarStatus::AtLower && !std::isfinite(lo[j])) status[j] = resting_status(j);
      if (status[j] == VarStatus::AtUpper && !std::isfinite(hi[j])) status[j] = resting_status(j);
      if (status[j] == VarStatus::Free && (std::isfinite(lo[j]) || std::isfinite(hi[j]))) {
        status[j] = resting_status(j);
      }
      if (lo[j] == hi[j]) status[j] = VarStatus::AtLower;
    }
    return true;
  }

  void save_basis() { last_basis.status = status; }

  LpSolution solve(std::span<const double> lower, std::span<const double> upper,
                   const Basis* warm) {
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
      throw std::invalid_argument("bound vectors do not match the column count");
    }
    const int nt = total();
    lo.assign(static_cast<std::size_t>(nt), 0.0);
    hi.assign(static_cast<std::size_t>(nt), 0.0);
    for (int j = 0; j < n; ++j) {
      lo[j] = lower[j];
      hi[j] = upper[j];
    }
    for (int i = 0; i < m; ++i) {
      lo[n + i] = row_lo[i];
      hi[n + i] = row_hi[i];
    }
    LpSolution sol;
    for (int j = 0; j < n; ++j) {
      if (lo[j] > hi[j]) {
        sol.status = LpStatus::Infeasible;
        sol.x.assign(static_cast<std::size_t>(n), 0.0);
        return sol;
      }
    }
    x.assign(static_cast<std::size_t>(nt), 0.0);
    status.assign(static_cast<std::size_t>(nt), VarStatus::AtLower);
    if (!(warm && load_basis(*warm))) slack_basis();
    pos.assign(static_cast<std::size_t>(nt), -1);
    for (int k = 0; k < m; ++k) pos[basic[k]] = k;
    if (!factorize()) {
      slack_basis();
      for (int k = 0; k < m; ++k) pos[basic[k]] = k;
      if (!factorize()) throw NumericalError("slack basis failed to factorize");
    }
    compute_basic_values();
    return iterate();
  }

  LpSolution iterate() {
    const int nt = total();
    const double ftol = opt.feasibility_tol;
    const double dtol = opt.optimality_tol;
    const long max_iter = opt.max_iterations > 0
                              ? opt.max_iterations
                              : std::max<long>(20000, 50L * static_cast<long>(nt));
    LpSolution sol;
    long iter = 0;
    int degenerate_run = 0;
    bool bland = false;
    bool fresh = true;  // basic values recomputed since the last refactor
    Vector y(m), alpha(m);
    std::vector<double> d(static_cast<std::size_t>(nt), 0.0);

    while (true) {
      if (static_cast<int>(etas.size()) >= opt.refactor_interval) {
        if (!factorize()) {
          slack_basis();
          for (int k = 0; k < nt; ++k) pos[k] = -1;
          for (int k = 0; k < m; ++k) pos[basic[k]] = k;
          if (!factorize()) throw NumericalError("slack basis failed to factorize");
        }
        compute_basic_values();
        fresh = true;
      }

      // Phase selection: any basic variable outside its bounds puts the
      // iteration in phase 1 (minimize the sum of infeasibilities).
      bool phase1 = false;
      y.setZero();
      for (int k = 0; k < m; ++k) {
        const int j = basic[k];
        if (x[j] < lo[j] - ftol) {
          y[k] = -1.0;
          phase1 = true;
        } else if (x[j] > hi[j] + ftol) {
          y[k] = 1.0;
          phase1 = true;
        }
      }
      if (!phase1) {
        for (int k = 0; k < m; ++k) {
          const int j = basic[k];
          y[k] = j < n ? cost[j] : 0.0;
        }
      }
      btran(y);

      // Pricing.
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < nt; ++j) {
        const VarStatus s = status[j];
        if (s == VarStatus::Basic) continue;
        if (lo[j] == hi[j]) continue;
        const double cj = (!phase1 && j < n) ? cost[j] : 0.0;
        const double dj = cj - dot_column(j, y);
        d[j] = dj;
        double score = 0.0;
        if (s == VarStatus::AtLower && dj < -dtol) score = -dj;
        else if (s == VarStatus::AtUpper && dj > dtol) score = dj;
        else if (s == VarStatus::Free && std::abs(dj) > dtol) score = std::abs(dj);
        if (score == 0.0) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
        }
      }

      if (enter < 0) {
        if (!fresh) {
          // Confirm on a clean factorization before concluding.
          if (!factorize()) throw NumericalError("basis became singular");
          compute_basic_values();
          fresh = true;
          continue;
        }
        sol.status = phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
        break;
      }
      if (++iter > max_iter) {
        sol.status = LpStatus::IterationLimit;
        break;
      }

      const double dq = d[enter];
      const double dir = (status[enter] == VarStatus::AtUpper || (status[enter] == VarStatus::Free && dq > 0)) ? -1.0 : 1.0;
      alpha.setZero();
      add_column(enter, 1.0, alpha);
      ftran(alpha);

      // Ratio test. Basic value k moves at rate[k] = -dir * alpha[k].
      auto bounds_of = [&](int k, double& lb, double& ub) {
        const int j = basic[k];
        lb = lo[j];
        ub = hi[j];
        if (phase1) {
          if (x[j] < lo[j] - ftol) {
            lb = -kInfinity;
            ub = lo[j];
          } else if (x[j] > hi[j] + ftol) {
            lb = hi[j];
            ub = kInfinity;
          }
        }
      };
      const double range = hi[enter] - lo[enter];
      int leave = -1;
      double theta = kInfinity;
      if (bland) {
        for (int k = 0; k < m; ++k) {
          const double a = alpha[k];
          if (std::abs(a) <= opt.pivot_tol) continue;
          const double rate = -dir * a;
          double lb, ub;
          bounds_of(k, lb, ub);
          double t;
          if (rate < 0) {
            if (!std::isfinite(lb)) continue;
            t = (x[basic[k]] - lb) / -rate;
          } else {
            if (!std::isfinite(ub)) continue;
            t = (ub - x[basic[k]]) / rate;
          }
          t = std::max(t, 0.0);
          if (t < theta - 1e-12 || (t <= theta + 1e-12 && leave >= 0 && basic[k] < basic[leave])) {
            theta = t;
            leave = k;
          }
        }
      } else {
        // Harris pass 1: largest step with bounds relaxed by the tolerance.
        double relaxed = kInfinity;
        for (int k = 0; k < m; ++k) {
          const double a = alpha[k];
          if (std::abs(a) <= opt.pivot_tol) continue;
          const double rate = -dir * a;
          double lb, ub;
          bounds_of(k, lb, ub);
          if (rate < 0) {
            if (std::isfinite(lb)) relaxed = std::min(relaxed, (x[basic[k]] - lb + ftol) / -rate);
          } else {
            if (std::isfinite(ub)) relaxed = std::min(relaxed, (ub - x[basic[k]] + ftol) / rate);
          }
        }
        // Pass 2: among blocking rows within that step, the largest pivot.
        double best_pivot = 0.0;
        for (int k = 0; k < m; ++k) {
          const double a = alpha[k];
          if (std::abs(a) <= opt.pivot_tol) continue;
          const double rate = -dir * a;
          double lb, ub;
          bounds_of(k, lb, ub);
          double t;
          if (rate < 0) {
            if (!std::isfinite(lb)) continue;
            t = (x[basic[k]] - lb) / -rate;
          } else {
            if (!std::isfinite(ub)) continue;
            t = (ub - x[basic[k]]) / rate;
          }
          if (t <= relaxed && std::abs(a) > best_pivot) {
            best_pivot = std::abs(a);
            leave = k;
            theta = std::max(t, 0.0);
          }
        }
      }

      if (range <= theta) {
        // Bound flip: the entering variable reaches its other bound first.
        if (!std::isfinite(range)) {
          if (phase1) throw NumericalError("unbounded ray during phase 1");
          sol.status = LpStatus::Unbounded;
          break;
        }
        const double step = range;
        for (int k = 0; k < m; ++k) x[basic[k]] += -dir * alpha[k] * step;
        status[enter] = status[enter] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
        x[enter] = nonbasic_value(enter);
        degenerate_run = 0;
        bland = false;
        fresh = false;
        continue;
      }
      if (leave < 0) {
        if (phase1) throw NumericalError("no blocking row during phase 1");
        sol.status = LpStatus::Unbounded;
        break;
      }

      // Pivot.
      const int out = basic[leave];
      const double rate_out = -dir * alpha[leave];
      double lb, ub;
      bounds_of(leave, lb, ub);
      const double target = rate_out < 0 ? lb : ub;
      for (int k = 0; k < m; ++k) {
        if (alpha[k] != 0.0) x[basic[k]] += -dir * alpha[k] * theta;
      }
      x[enter] += dir * theta;
      x[out] = target;
      if (lo[out] == hi[out]) {
        status[out] = VarStatus::AtLower;
      } else if (target == lo[out]) {
        status[out] = VarStatus::AtLower;
      } else {
        status[out] = VarStatus::AtUpper;
      }
      status[enter] = VarStatus::Basic;
      pos[out] = -1;
      pos[enter] = leave;
      basic[leave] = enter;

      Eta eta;
      eta.row = leave;
      eta.pivot = alpha[leave];
      for (int k = 0; k < m; ++k) {
        if (k != leave && std::abs(alpha[k]) > 1e-14) {
          eta.index.push_back(k);
          eta.value.push_back(alpha[k]);
        }
      }
      etas.push_back(std::move(eta));
      fresh = false;

      if (theta <= 1e-11) {
        if (++degenerate_run > opt.stall_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }

    sol.iterations = iter;
    sol.x.assign(x.begin(), x.begin() + n);
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += cost[j] * sol.x[j];
    sol.objective = obj;

    // Residuals at the returned point.
    double pres = 0.0;
    for (int j = 0; j < n; ++j) {
      pres = std::max(pres, lo[j] - sol.x[j]);
      pres = std::max(pres, sol.x[j] - hi[j]);
    }
    std::vector<double> act(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < n; ++j) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k) act[col_row[k]] += col_val[k] * sol.x[j];
    }
    for (int i = 0; i < m; ++i) {
      pres = std::max(pres, row_lo[i] - act[i]);
      pres = std::max(pres, act[i] - row_hi[i]);
    }
    sol.primal_residual = std::max(pres, 0.0);

    if (sol.status == LpStatus::Optimal) {
      y.setZero();
      for (int k = 0; k < m; ++k) {
        const int j = basic[k];
        y[k] = j < n ? cost[j] : 0.0;
      }
      btran(y);
      sol.duals.assign(y.data(), y.data() + m);
      sol.reduced_costs.assign(static_cast<std::size_t>(n), 0.0);
      double dres = 0.0;
      for (int j = 0; j < nt; ++j) {
        if (status[j] == VarStatus::Basic) continue;
        const double dj = (j < n ? cost[j] : 0.0) - dot_column(j, y);
        if (j < n) sol.reduced_costs[j] = dj;
        if (lo[j] == hi[j]) continue;
        if (status[j] == VarStatus::AtLower) dres = std::max(dres, -dj);
        else if (status[j] == VarStatus::AtUpper) dres = std::max(dres, dj);
        else dres = std::max(dres, std::abs(dj));
      }
      sol.dual_residual = dres;
    }
    save_basis();
    return sol;
  }
};

LpSolver::LpSolver(const MilpInstance& instance, LpOptions options)
    : impl_(std::make_unique<Impl>(instance, options)) {}
LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

LpSolution LpSolver::solve(std::span<const double> lower, std::span<const double> upper,
                           const Basis* warm_start) {
  return impl_->solve(lower, upper, warm_start);
}

const Basis& LpSolver::basis() const { return impl_->last_basis; }

LpSolution solve_lp(const MilpInstance& instance, const LpOptions& options) {
  std::vector<double> lo(static_cast<std::size_t>(instance.num_columns()));
  std::vector<double> up(lo.size());
  for (int j = 0; j < instance.num_columns(); ++j) {
    lo[j] = instance.col_lower(j);
    up[j] = instance.col_upper(j);
  }
  LpSolver solver(instance, options);
  return solver.solve(lo, up);
}

}  // namespace fleetarb
