// Copyright 2026 The uavplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVPLAN_BENCHMARKS_HPP_
#define UAVPLAN_BENCHMARKS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "uavplan/planner.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

class DetourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constant-speed chord from start to finish. May cross a no-fly zone.
Trajectory straight_trajectory(const Scenario& scenario);

// Piecewise-straight path that bends around every zone blocking the chord
// through the intersection of the two tangent lines to the zone disk
// (radius inflated by 1e-2 m), on the shorter side; exact ties go left of
// the travel direction. Resampled at constant speed. Throws DetourError when
// the path is longer than N * V or cannot be built.
Trajectory detour_tangent_trajectory(const Scenario& scenario);

// Polyline waypoints of the detour before resampling.
std::vector<Point> detour_waypoints(const Scenario& scenario);

enum class Strategy { kProposed, kNoNfz, kDetour, kStraight };
Strategy parse_strategy(const std::string& name);
const char* to_string(Strategy strategy);
inline constexpr Strategy kAllStrategies[] = {Strategy::kProposed, Strategy::kNoNfz,
                                              Strategy::kDetour, Strategy::kStraight};

// Runs one strategy end to end. A detour that cannot be built is reported
// as infeasible.
SolveReport run_strategy(const Scenario& scenario, Strategy strategy,
                         const PlannerOptions& options);

}  // namespace uavplan

#endif  // UAVPLAN_BENCHMARKS_HPP_
