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

#include "fleetarb/fleet_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fleetarb/errors.hpp"
#include "fleetarb/text_util.hpp"

namespace fleetarb {

char location_letter(Location loc) { return "ABC"[index_of(loc)]; }

std::optional<Location> location_from_letter(std::string_view s) {
  if (s == "A") return Location::A;
  if (s == "B") return Location::B;
  if (s == "C") return Location::C;
  return std::nullopt;
}

DistanceTable default_distances() {
  // A = San Antonio, B = San Marcos, C = Austin.
  DistanceTable d{};
  d[0][1] = d[1][0] = 50.0;
  d[1][2] = d[2][1] = 31.0;
  d[0][2] = d[2][0] = 81.0;
  return d;
}

void validate(const VehicleSpec& v) {
  auto fail = [&](const std::string& what) {
    throw ConfigError("vehicle " + std::to_string(v.id) + ": " + what);
  };
  if (!(v.capacity_kwh > 0.0)) fail("capacity must be positive");
  if (v.e_min_kwh < 0.0) fail("minimum energy is negative");
  if (v.e_min_kwh > v.capacity_kwh) fail("minimum energy exceeds capacity");
  if (v.e_init_kwh > v.capacity_kwh) fail("initial energy exceeds capacity");
  if (v.e_init_kwh < v.e_min_kwh) fail("initial energy below minimum energy");
  if (v.e_final_kwh > v.capacity_kwh) fail("final energy exceeds capacity");
  if (v.e_final_kwh < v.e_min_kwh) fail("final energy below minimum energy");
  if (!(v.eta_c > 0.0 && v.eta_c <= 1.0)) fail("charge efficiency outside (0, 1]");
  if (!(v.eta_d > 0.0 && v.eta_d <= 1.0)) fail("discharge efficiency outside (0, 1]");
  if (v.p_drive_kw < 0.0) fail("drive power is negative");
}

void validate(const FleetConfig& c) {
  if (c.horizon.steps_per_day < 1) throw ConfigError("steps_per_day must be positive");
  if (c.horizon.num_days < 1) throw ConfigError("num_days must be positive");
  if (!(c.horizon.dt_hours > 0.0)) throw ConfigError("dt_hours must be positive");
  if (!(c.charger.p_c_max_kw > 0.0)) throw ConfigError("charge limit must be positive");
  if (!(c.charger.p_d_max_kw > 0.0)) throw ConfigError("discharge limit must be positive");
  if (c.vehicles.empty()) throw ConfigError("fleet has no vehicles");
  std::set<int> ids;
  for (const auto& v : c.vehicles) {
    validate(v);
    if (!ids.insert(v.id).second) {
      throw ConfigError("duplicate vehicle id " + std::to_string(v.id));
    }
  }
  for (int l = 0; l < kNumLocations; ++l) {
    if (c.delivery.min_visits[l] < 0) throw ConfigError("min_visits is negative");
    if (c.location_names[l].empty()) throw ConfigError("location name is empty");
    for (int k = 0; k < kNumLocations; ++k) {
      if (l == k) continue;
      if (!(c.distances_mi[l][k] > 0.0)) throw ConfigError("distances must be positive");
      if (c.distances_mi[l][k] != c.distances_mi[k][l]) {
        throw ConfigError("distances must be symmetric");
      }
    }
  }
  std::set<std::string> names(c.location_names.begin(), c.location_names.end());
  if (names.size() != kNumLocations) throw ConfigError("location names must be distinct");
}

namespace {

struct Value {
  enum class Kind { Number, String, Bool } kind = Kind::Number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  int line = 0;
  int column = 0;
};

using Table = std::map<std::string, Value>;

[[noreturn]] void syntax_error(int line, int column, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": " + what);
}

struct Document {
  std::map<std::string, Table> sections;
  std::vector<Table> vehicles;
};

Document tokenize(std::string_view text) {
  static const std::set<std::string> kSections = {"horizon", "locations", "charger",
                                                  "delivery", "distances", "fleet"};
  Document doc;
  Table* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    // Strip comments that are not inside a string literal.
    bool in_string = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') in_string = !in_string;
      if (raw[i] == '#' && !in_string) {
        cut = i;
        break;
      }
    }
    std::string_view line = raw.substr(0, cut);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    const int col0 = static_cast<int>(first) + 1;
    std::string_view body = trim(line);

    if (body.starts_with("[[")) {
      if (!body.ends_with("]]")) syntax_error(line_no, col0, "unterminated table header");
      std::string name(trim(body.substr(2, body.size() - 4)));
      if (name != "vehicle") syntax_error(line_no, col0 + 2, "unknown array table '" + name + "'");
      doc.vehicles.emplace_back();
      current = &doc.vehicles.back();
      continue;
    }
    if (body.starts_with("[")) {
      if (!body.ends_with("]")) syntax_error(line_no, col0, "unterminated section header");
      std::string name(trim(body.substr(1, body.size() - 2)));
      if (!kSections.contains(name)) syntax_error(line_no, col0 + 1, "unknown section '" + name + "'");
      if (doc.sections.contains(name)) syntax_error(line_no, col0, "duplicate section '" + name + "'");
      current = &doc.sections[name];
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) syntax_error(line_no, col0, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) syntax_error(line_no, col0, "missing key");
    for (char ch : key) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) {
        syntax_error(line_no, col0, "invalid key '" + key + "'");
      }
    }
    if (current == nullptr) syntax_error(line_no, col0, "key outside of any section");

    std::string_view rest = line.substr(eq + 1);
    std::size_t vstart = rest.find_first_not_of(" \t");
    const int vcol = static_cast<int>(eq + 1 + (vstart == std::string_view::npos ? 0 : vstart)) + 1;
    std::string_view vtext = trim(rest);
    if (vtext.empty()) syntax_error(line_no, vcol, "missing value");

    Value v;
    v.line = line_no;
    v.column = vcol;
    if (vtext.front() == '"') {
      if (vtext.size() < 2 || vtext.back() != '"') syntax_error(line_no, vcol, "unterminated string");
      v.kind = Value::Kind::String;
      v.text = std::string(vtext.substr(1, vtext.size() - 2));
      if (v.text.find('"') != std::string::npos) syntax_error(line_no, vcol, "stray quote in string");
    } else if (vtext == "true" || vtext == "false") {
      v.kind = Value::Kind::Bool;
      v.flag = vtext == "true";
    } else {
      auto parsed = parse_double(vtext);
      if (!parsed) syntax_error(line_no, vcol, "expected a number, string or boolean");
      v.kind = Value::Kind::Number;
      v.number = *parsed;
    }
    if (current->contains(key)) syntax_error(line_no, col0, "duplicate key '" + key + "'");
    (*current)[key] = v;
    if (pos > text.size()) break;
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(const Table& table, std::string section)
      : table_(table), section_(std::move(section)) {}

  std::optional<double> number(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::Number) syntax_error(v->line, v->column, key + " must be a number");
    return v->number;
  }

  std::optional<int> integer(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::Number || v->number != std::floor(v->number) ||
        std::abs(v->number) > 1e9) {
      syntax_error(v->line, v->column, key + " must be an integer");
    }
    return static_cast<int>(v->number);
  }

  std::optional<std::string> string(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::String) syntax_error(v->line, v->column, key + " must be a string");
    return v->text;
  }

  std::optional<bool> boolean(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::Bool) syntax_error(v->line, v->column, key + " must be true or false");
    return v->flag;
  }

  std::optional<Location> location(const std::string& key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::String) syntax_error(v->line, v->column, key + " must be a string");
    auto loc = location_from_letter(v->text);
    if (!loc) syntax_error(v->line, v->column, key + " must be \"A\", \"B\" or \"C\"");
    return loc;
  }

  // Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, v] : table_) {
      if (!used_.contains(key)) {
        syntax_error(v.line, v.column, "unknown key '" + key + "' in [" + section_ + "]");
      }
    }
  }

 private:
  const Value* take(const std::string& key) {
    auto it = table_.find(key);
    if (it == table_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  const Table& table_;
  std::string section_;
  std::set<std::string> used_;
};

template <typename T>
std::optional<T> take_or(std::optional<T> value, T fallback) {
  return value ? value : std::optional<T>(fallback);
}

}  // namespace

FleetConfig parse_config(std::string_view text) {
  Document doc = tokenize(text);
  FleetConfig config;
  const Table empty;
  auto section = [&](const std::string& name) -> const Table& {
    auto it = doc.sections.find(name);
    return it == doc.sections.end() ? empty : it->second;
  };

  {
    Reader r(section("horizon"), "horizon");
    if (auto v = r.integer("steps_per_day")) config.horizon.steps_per_day = *v;
    if (auto v = r.integer("num_days")) config.horizon.num_days = *v;
    if (auto v = r.number("dt_hours")) config.horizon.dt_hours = *v;
    r.finish();
  }
  {
    Reader r(section("locations"), "locations");
    for (Location loc : kAllLocations) {
      if (auto v = r.string(std::string(1, location_letter(loc)))) {
        config.location_names[index_of(loc)] = *v;
      }
    }
    r.finish();
  }
  {
    Reader r(section("charger"), "charger");
    if (auto v = r.number("p_c_max_kw")) config.charger.p_c_max_kw = *v;
    if (auto v = r.number("p_d_max_kw")) config.charger.p_d_max_kw = *v;
    r.finish();
  }
  {
    Reader r(section("delivery"), "delivery");
    for (Location loc : kAllLocations) {
      if (auto v = r.integer(std::string("min_visits_") + location_letter(loc))) {
        config.delivery.min_visits[index_of(loc)] = *v;
      }
    }
    if (auto v = r.string("window")) {
      if (*v == "per_day") {
        config.delivery.window = VisitWindow::PerDay;
      } else if (*v == "whole_horizon") {
        config.delivery.window = VisitWindow::WholeHorizon;
      } else {
        throw ConfigError("window must be \"per_day\" or \"whole_horizon\"");
      }
    }
    if (auto v = r.boolean("home_return")) config.home_return = *v;
    r.finish();
  }
  {
    Reader r(section("distances"), "distances");
    const std::pair<Location, Location> pairs[] = {
        {Location::A, Location::B}, {Location::A, Location::C}, {Location::B, Location::C}};
    for (auto [from, to] : pairs) {
      const int i = index_of(from);
      const int j = index_of(to);
      std::string fwd = std::string(1, location_letter(from)) + "_" + location_letter(to);
      std::string rev = std::string(1, location_letter(to)) + "_" + location_letter(from);
      auto a = r.number(fwd);
      auto b = r.number(rev);
      if (a && b && *a != *b) throw ConfigError("distances must be symmetric");
      if (a || b) config.distances_mi[i][j] = config.distances_mi[j][i] = a ? *a : *b;
    }
    r.finish();
  }

  if (doc.sections.contains("fleet")) {
    Reader r(section("fleet"), "fleet");
    auto n = r.integer("sample");
    auto seed = r.integer("seed");
    auto home = r.location("home");
    r.finish();
    if (!n || *n < 1) throw ConfigError("[fleet] needs sample >= 1");
    config.vehicles = sample_fleet(static_cast<std::uint64_t>(seed.value_or(1)), *n,
                                   home.value_or(Location::A));
  }

  int next_id = static_cast<int>(config.vehicles.size()) + 1;
  for (const Table& t : doc.vehicles) {
    Reader r(t, "vehicle");
    VehicleSpec v;
    v.id = r.integer("id").value_or(next_id);
    next_id = std::max(next_id, v.id) + 1;
    auto cap = r.number("capacity_kwh");
    if (!cap) throw ConfigError("vehicle " + std::to_string(v.id) + ": capacity_kwh is required");
    v.capacity_kwh = *cap;
    auto init = r.number("e_init_kwh");
    if (!init) throw ConfigError("vehicle " + std::to_string(v.id) + ": e_init_kwh is required");
    v.e_init_kwh = *init;
    v.e_min_kwh = r.number("e_min_kwh").value_or(0.10 * v.capacity_kwh);
    v.e_final_kwh = r.number("e_final_kwh").value_or(v.e_init_kwh);
    v.eta_c = r.number("eta_c").value_or(1.0);
    v.eta_d = r.number("eta_d").value_or(1.0);
    v.p_drive_kw = r.number("p_drive_kw").value_or(0.0);
    v.home = r.location("home").value_or(Location::A);
    r.finish();
    config.vehicles.push_back(v);
  }

  validate(config);
  return config;
}

FleetConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const FleetConfig& c) {
  std::ostringstream out;
  out << "[horizon]\n"
      << "steps_per_day = " << c.horizon.steps_per_day << "\n"
      << "num_days = " << c.horizon.num_days << "\n"
      << "dt_hours = " << format_double(c.horizon.dt_hours) << "\n\n";
  out << "[locations]\n";
  for (Location loc : kAllLocations) {
    out << location_letter(loc) << " = \"" << c.location_names[index_of(loc)] << "\"\n";
  }
  out << "\n[charger]\n"
      << "p_c_max_kw = " << format_double(c.charger.p_c_max_kw) << "\n"
      << "p_d_max_kw = " << format_double(c.charger.p_d_max_kw) << "\n\n";
  out << "[delivery]\n";
  for (Location loc : kAllLocations) {
    out << "min_visits_" << location_letter(loc) << " = " << c.delivery.min_visits[index_of(loc)]
        << "\n";
  }
  out << "window = \""
      << (c.delivery.window == VisitWindow::PerDay ? "per_day" : "whole_horizon") << "\"\n"
      << "home_return = " << (c.home_return ? "true" : "false") << "\n\n";
  out << "[distances]\n"
      << "A_B = " << format_double(c.distances_mi[0][1]) << "\n"
      << "A_C = " << format_double(c.distances_mi[0][2]) << "\n"
      << "B_C = " << format_double(c.distances_mi[1][2]) << "\n";
  for (const auto& v : c.vehicles) {
    out << "\n[[vehicle]]\n"
        << "id = " << v.id << "\n"
        << "capacity_kwh = " << format_double(v.capacity_kwh) << "\n"
        << "e_min_kwh = " << format_double(v.e_min_kwh) << "\n"
        << "e_init_kwh = " << format_double(v.e_init_kwh) << "\n"
        << "e_final_kwh = " << format_double(v.e_final_kwh) << "\n"
        << "eta_c = " << format_double(v.eta_c) << "\n"
        << "eta_d = " << format_double(v.eta_d) << "\n"
        << "p_drive_kw = " << format_double(v.p_drive_kw) << "\n"
        << "home = \"" << location_letter(v.home) << "\"\n";
  }
  return out.str();
}

std::vector<VehicleSpec> sample_fleet(std::uint64_t seed, int n, Location home) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  std::vector<VehicleSpec> fleet;
  fleet.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    VehicleSpec v;
    v.id = i + 1;
    v.capacity_kwh = draw(630.0, 770.0);
    const double roundtrip = draw(0.90, 1.00);
    v.eta_c = v.eta_d = std::sqrt(roundtrip);
    v.e_init_kwh = draw(420.0, 490.0);
    v.p_drive_kw = draw(63.0, 77.0);
    v.e_min_kwh = 0.10 * v.capacity_kwh;
    v.e_final_kwh = v.e_init_kwh;
    v.home = home;
    fleet.push_back(v);
  }
  return fleet;
}

}  // namespace fleetarb
