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
#include <vector>

#include "fleetarb/fleet_model.hpp"
#include "fleetarb/lp_simplex.hpp"
#include "fleetarb/model_builder.hpp"
#include "fleetarb/price_data.hpp"

namespace fleetarb {

// Builds a feasible starting point for a spatial model out of daily round
// trips from home. Delivery visits are handed out first; then each vehicle's
// day is replaced by the best trip through at most two other sites (or none)
// while the requirements stay covered, and a vehicle may take over another's
// stops so that one stays home. With locations fixed the vehicles decouple,
// so a trip is scored by solving the vehicle's own LP. Returns the location
// and visit indicators as a full column vector (continuous entries are zero),
// or nothing when no trip fits. `model` must come from build_with_prices on
// the same config, prices, travel table and options.
std::optional<std::vector<double>> tour_start(const FleetConfig& config, const BuiltModel& model,
                                              const PricePanel& prices,
                                              const TravelTimeTable& travel,
                                              const BuildOptions& options,
                                              const LpOptions& lp_options = {});

}  // namespace fleetarb
