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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fleetarb {

std::string_view trim(std::string_view s);

// Whole-string parse; rejects trailing garbage, NaN and infinities.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest text that reads back to the same double.
std::string format_double(double value);

// Splits one CSV record on commas. Fields are trimmed; quoting is not
// supported because none of the input formats need it.
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace fleetarb
