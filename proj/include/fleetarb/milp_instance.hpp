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
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fleetarb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct Term {
  int column = 0;
  double coefficient = 0.0;

  bool operator==(const Term&) const = default;
};

// A minimization MILP with row-wise sparse constraints. Columns carry their
// own bounds, objective coefficient and integrality flag.
class MilpInstance {
 public:
  int add_column(std::string name, double lower, double upper, double cost, bool integer);
  // Terms must reference existing columns; duplicate columns are merged.
  int add_row(std::string name, std::span<const Term> terms, RowSense sense, double rhs);
  int add_row(std::string name, std::initializer_list<Term> terms, RowSense sense, double rhs) {
    return add_row(std::move(name), std::span<const Term>(terms.begin(), terms.size()), sense,
                   rhs);
  }

  int num_columns() const { return static_cast<int>(col_lower_.size()); }
  int num_rows() const { return static_cast<int>(row_sense_.size()); }
  int num_integer_columns() const;
  // Integer columns whose bounds do not already fix them.
  int num_free_integer_columns() const;

  double col_lower(int j) const { return col_lower_[j]; }
  double col_upper(int j) const { return col_upper_[j]; }
  double cost(int j) const { return cost_[j]; }
  bool is_integer(int j) const { return is_integer_[j] != 0; }
  const std::string& col_name(int j) const { return col_names_[j]; }

  RowSense row_sense(int i) const { return row_sense_[i]; }
  double rhs(int i) const { return rhs_[i]; }
  const std::string& row_name(int i) const { return row_names_[i]; }
  std::span<const Term> row(int i) const {
    return {terms_.data() + row_start_[i],
            static_cast<std::size_t>(row_start_[i + 1] - row_start_[i])};
  }
  int num_nonzeros() const { return static_cast<int>(terms_.size()); }

  void set_bounds(int j, double lower, double upper);
  void set_cost(int j, double cost) { cost_[j] = cost; }
  void set_integer(int j, bool integer) { is_integer_[j] = integer ? 1 : 0; }

  // Lookup by name; -1 when absent. Linear scan, intended for tests and tools.
  int find_column(const std::string& name) const;
  int find_row(const std::string& name) const;

  double objective_value(std::span<const double> x) const;
  double row_activity(int i, std::span<const double> x) const;

  // Throws std::invalid_argument if an index or bound is invalid.
  void check() const;

  bool operator==(const MilpInstance&) const = default;

 private:
  std::vector<double> col_lower_;
  std::vector<double> col_upper_;
  std::vector<double> cost_;
  std::vector<char> is_integer_;
  std::vector<std::string> col_names_;

  std::vector<int> row_start_ = {0};
  std::vector<Term> terms_;
  std::vector<RowSense> row_sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

// Exact text dump (every double printed with round-trip precision). Two
// instances serialize identically iff they compare equal.
std::string serialize(const MilpInstance& instance);

// Fixed-column MPS with MARKER INTORG/INTEND around integer columns and an
// explicit OBJSENSE MIN section.
void write_mps(std::ostream& out, const MilpInstance& instance,
               const std::string& name = "FLEETARB");
void export_mps(const MilpInstance& instance, const std::string& path,
                const std::string& name = "FLEETARB");

// Reads the subset of MPS that write_mps produces (plus RANGES-free fixed or
// free spacing). Used to check exports.
MilpInstance read_mps(std::istream& in);

}  // namespace fleetarb
