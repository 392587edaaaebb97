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

#include "fleetarb/milp_instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fleetarb/text_util.hpp"

namespace fleetarb {

int MilpInstance::add_column(std::string name, double lower, double upper, double cost,
                             bool integer) {
  if (lower > upper) throw std::invalid_argument("column " + name + ": lower > upper");
  col_lower_.push_back(lower);
  col_upper_.push_back(upper);
  cost_.push_back(cost);
  is_integer_.push_back(integer ? 1 : 0);
  col_names_.push_back(std::move(name));
  return num_columns() - 1;
}

int MilpInstance::add_row(std::string name, std::span<const Term> terms, RowSense sense,
                          double rhs) {
  const std::size_t first = terms_.size();
  for (const Term& t : terms) {
    if (t.column < 0 || t.column >= num_columns()) {
      terms_.resize(first);
      throw std::invalid_argument("row " + name + " references an unknown column");
    }
    auto it = std::find_if(terms_.begin() + static_cast<std::ptrdiff_t>(first), terms_.end(),
                           [&](const Term& u) { return u.column == t.column; });
    if (it != terms_.end()) {
      it->coefficient += t.coefficient;
    } else {
      terms_.push_back(t);
    }
  }
  row_start_.push_back(static_cast<int>(terms_.size()));
  row_sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

int MilpInstance::num_integer_columns() const {
  return static_cast<int>(std::count(is_integer_.begin(), is_integer_.end(), 1));
}

int MilpInstance::num_free_integer_columns() const {
  int n = 0;
  for (int j = 0; j < num_columns(); ++j) {
    if (is_integer(j) && col_lower_[j] < col_upper_[j]) ++n;
  }
  return n;
}

void MilpInstance::set_bounds(int j, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column " + col_names_[j] + ": lower > upper");
  col_lower_[j] = lower;
  col_upper_[j] = upper;
}

int MilpInstance::find_column(const std::string& name) const {
  auto it = std::find(col_names_.begin(), col_names_.end(), name);
  return it == col_names_.end() ? -1 : static_cast<int>(it - col_names_.begin());
}

int MilpInstance::find_row(const std::string& name) const {
  auto it = std::find(row_names_.begin(), row_names_.end(), name);
  return it == row_names_.end() ? -1 : static_cast<int>(it - row_names_.begin());
}

double MilpInstance::objective_value(std::span<const double> x) const {
  double sum = 0.0;
  for (int j = 0; j < num_columns(); ++j) sum += cost_[j] * x[j];
  return sum;
}

double MilpInstance::row_activity(int i, std::span<const double> x) const {
  double sum = 0.0;
  for (const Term& t : row(i)) sum += t.coefficient * x[t.column];
  return sum;
}

void MilpInstance::check() const {
  for (int j = 0; j < num_columns(); ++j) {
    if (!(col_lower_[j] <= col_upper_[j])) {
      throw std::invalid_argument("column " + col_names_[j] + " has lower > upper");
    }
  }
  for (const Term& t : terms_) {
    if (t.column < 0 || t.column >= num_columns()) {
      throw std::invalid_argument("row references an unknown column");
    }
  }
}

std::string serialize(const MilpInstance& m) {
  std::ostringstream out;
  out << "columns " << m.num_columns() << "\n";
  for (int j = 0; j < m.num_columns(); ++j) {
    out << m.col_name(j) << ' ' << format_double(m.col_lower(j)) << ' '
        << format_double(m.col_upper(j)) << ' ' << format_double(m.cost(j)) << ' '
        << (m.is_integer(j) ? 'I' : 'C') << '\n';
  }
  out << "rows " << m.num_rows() << "\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    const char sense = m.row_sense(i) == RowSense::LessEqual      ? 'L'
                       : m.row_sense(i) == RowSense::GreaterEqual ? 'G'
                                                                  : 'E';
    out << m.row_name(i) << ' ' << sense << ' ' << format_double(m.rhs(i));
    for (const Term& t : m.row(i)) out << ' ' << t.column << ':' << format_double(t.coefficient);
    out << '\n';
  }
  return out.str();
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

constexpr const char* kObjectiveRow = "COST";

}  // namespace

void write_mps(std::ostream& out, const MilpInstance& m, const std::string& name) {
  std::vector<std::vector<std::pair<int, double>>> by_column(
      static_cast<std::size_t>(m.num_columns()));
  for (int i = 0; i < m.num_rows(); ++i) {
    for (const Term& t : m.row(i)) {
      if (t.coefficient != 0.0) by_column[t.column].emplace_back(i, t.coefficient);
    }
  }

  out << "NAME          " << name << "\n";
  out << "OBJSENSE\n    MIN\n";
  out << "ROWS\n";
  out << " N  " << kObjectiveRow << "\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    const char* sense = m.row_sense(i) == RowSense::LessEqual      ? " L  "
                        : m.row_sense(i) == RowSense::GreaterEqual ? " G  "
                                                                   : " E  ";
    out << sense << m.row_name(i) << "\n";
  }

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  auto emit = [&](const std::string& col, const std::string& row, double value) {
    out << "    " << pad(col, 8) << "  " << pad(row, 8) << "  " << format_double(value) << "\n";
  };
  for (int j = 0; j < m.num_columns(); ++j) {
    if (m.is_integer(j) != in_integer_block) {
      out << "    MARKER" << marker++ << "                 'MARKER'                 "
          << (m.is_integer(j) ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer_block = m.is_integer(j);
    }
    if (m.cost(j) != 0.0 || by_column[j].empty()) emit(m.col_name(j), kObjectiveRow, m.cost(j));
    for (auto [row, value] : by_column[j]) emit(m.col_name(j), m.row_name(row), value);
  }
  if (in_integer_block) {
    out << "    MARKER" << marker++ << "                 'MARKER'                 'INTEND'\n";
  }

  out << "RHS\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    if (m.rhs(i) != 0.0) {
      out << "    " << pad("RHS", 8) << "  " << pad(m.row_name(i), 8) << "  "
          << format_double(m.rhs(i)) << "\n";
    }
  }

  out << "BOUNDS\n";
  auto bound = [&](const char* kind, int j, const std::string* value) {
    out << ' ' << kind << ' ' << pad("BND", 8) << "  " << pad(m.col_name(j), 8);
    if (value) out << "  " << *value;
    out << "\n";
  };
  for (int j = 0; j < m.num_columns(); ++j) {
    const double lo = m.col_lower(j);
    const double up = m.col_upper(j);
    if (lo == up) {
      const std::string v = format_double(lo);
      bound("FX", j, &v);
      continue;
    }
    if (lo == -kInfinity) {
      bound("MI", j, nullptr);
    } else if (lo != 0.0) {
      const std::string v = format_double(lo);
      bound("LO", j, &v);
    }
    if (up == kInfinity) {
      // Integer columns without an upper bound are read as binary by some
      // solvers, so make the infinite bound explicit.
      if (m.is_integer(j)) bound("PL", j, nullptr);
    } else {
      const std::string v = format_double(up);
      bound("UP", j, &v);
    }
  }
  out << "ENDATA\n";
}

void export_mps(const MilpInstance& instance, const std::string& path, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write MPS file '" + path + "'");
  write_mps(out, instance, name);
  if (!out) throw std::runtime_error("I/O failure writing '" + path + "'");
}

MilpInstance read_mps(std::istream& in) {
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
  Section section = Section::None;
  std::string objective_row;
  bool maximize = false;

  struct RowDef {
    std::string name;
    RowSense sense;
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  std::vector<RowDef> rows;
  std::unordered_map<std::string, int> row_index;
  struct ColDef {
    std::string name;
    bool integer = false;
    double cost = 0.0;
    double lower = 0.0;
    double upper = kInfinity;
    bool upper_set = false;
  };
  std::vector<ColDef> cols;
  std::unordered_map<std::string, int> col_index;
  bool integer_block = false;

  auto fail = [](const std::string& what) -> void {
    throw std::runtime_error("MPS: " + what);
  };
  auto number = [&](const std::string& s) {
    auto v = parse_double(s);
    if (!v) fail("bad number '" + s + "'");
    return *v;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    if (line[0] != ' ') {
      const std::string& head = f[0];
      if (head == "NAME") section = Section::Name;
      else if (head == "OBJSENSE") {
        section = Section::ObjSense;
        if (f.size() > 1) maximize = f[1] == "MAX" || f[1] == "MAXIMIZE";
      } else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") { section = Section::End; break; }
      else fail("unsupported section '" + head + "'");
      continue;
    }
    switch (section) {
      case Section::ObjSense:
        maximize = f[0] == "MAX" || f[0] == "MAXIMIZE";
        break;
      case Section::Rows: {
        if (f.size() != 2) fail("bad ROWS line");
        if (f[0] == "N") {
          if (objective_row.empty()) objective_row = f[1];
          break;
        }
        RowSense sense = f[0] == "L"   ? RowSense::LessEqual
                         : f[0] == "G" ? RowSense::GreaterEqual
                                       : RowSense::Equal;
        if (f[0] != "L" && f[0] != "G" && f[0] != "E") fail("bad row type " + f[0]);
        row_index[f[1]] = static_cast<int>(rows.size());
        rows.push_back({f[1], sense, 0.0, {}});
        break;
      }
      case Section::Columns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") integer_block = true;
          else if (f[2] == "'INTEND'") integer_block = false;
          break;
        }
        if (f.size() != 3 && f.size() != 5) fail("bad COLUMNS line");
        auto [it, fresh] = col_index.try_emplace(f[0], static_cast<int>(cols.size()));
        if (fresh) {
          cols.push_back({f[0], integer_block});
          if (integer_block) cols.back().upper = 1.0;
        }
        const int j = it->second;
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const double v = number(f[k + 1]);
          if (f[k] == objective_row) {
            cols[j].cost += v;
          } else {
            auto r = row_index.find(f[k]);
            if (r == row_index.end()) fail("unknown row '" + f[k] + "'");
            rows[r->second].terms.push_back({j, v});
          }
        }
        break;
      }
      case Section::Rhs: {
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          if (f[k] == objective_row) continue;
          auto r = row_index.find(f[k]);
          if (r == row_index.end()) fail("unknown row '" + f[k] + "'");
          rows[r->second].rhs = number(f[k + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (f.size() < 3) fail("bad BOUNDS line");
        auto c = col_index.find(f[2]);
        if (c == col_index.end()) fail("unknown column '" + f[2] + "'");
        ColDef& col = cols[c->second];
        const std::string& kind = f[0];
        const double v = f.size() > 3 ? number(f[3]) : 0.0;
        if (kind == "UP") { col.upper = v; col.upper_set = true; }
        else if (kind == "LO") col.lower = v;
        else if (kind == "FX") { col.lower = col.upper = v; }
        else if (kind == "MI") col.lower = -kInfinity;
        else if (kind == "PL") col.upper = kInfinity;
        else if (kind == "BV") { col.lower = 0.0; col.upper = 1.0; col.integer = true; }
        else fail("unsupported bound type " + kind);
        break;
      }
      default:
        fail("data outside of a section");
    }
  }
  if (section != Section::End) fail("missing ENDATA");

  MilpInstance m;
  for (const ColDef& c : cols) {
    m.add_column(c.name, c.lower, c.upper, maximize ? -c.cost : c.cost, c.integer);
  }
  for (const RowDef& r : rows) m.add_row(r.name, r.terms, r.sense, r.rhs);
  return m;
}

}  // namespace fleetarb
