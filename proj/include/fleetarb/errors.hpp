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

#include <stdexcept>
#include <string>

namespace fleetarb {

// Malformed or invalid configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Price or traffic input that cannot be used (gaps, unknown zones, bad numbers,
// horizon mismatches).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model has no feasible point. Raised both for pigeonhole checks before a
// solve and for proven infeasibility after one.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, int day = -1)
      : std::runtime_error(what), day_(day) {}
  // Day index of the offending per-day solve, or -1 when not day specific.
  int day() const { return day_; }

 private:
  int day_;
};

// A solver limit (time or nodes) ended the search before any incumbent or
// before the gap target was met.
class LimitReachedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A schedule that breaks the model's rules (too-short trips, shape mismatch,
// unreadable schedule file).
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simplex could not restore feasibility to tolerance after refactoring.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fleetarb
