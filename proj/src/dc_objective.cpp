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

#include "uavplan/dc_objective.hpp"

namespace uavplan {

PenaltyForm parse_penalty_form(const std::string& name) {
  if (name == "clipped") return PenaltyForm::kClipped;
  if (name == "linear") return PenaltyForm::kLinear;
  throw std::invalid_argument("unknown penalty form '" + name + "' (expected clipped|linear)");
}

const char* to_string(PenaltyForm form) {
  return form == PenaltyForm::kLinear ? "linear" : "clipped";
}

TrajectoryVars tight_vars(const Scenario& scenario, const Trajectory& traj) {
  TrajectoryVars vars{traj, SlotUserMatrix(scenario.num_slots(), scenario.num_users())};
  for (int s = 0; s < scenario.num_slots(); ++s) {
    const Point p = traj.row(s + 1).transpose();
    for (int k = 0; k < scenario.num_users(); ++k) {
      vars.slack(s, k) = squared_distance(p, scenario.users()[k], scenario.uav().altitude);
    }
  }
  return vars;
}

double penalized_objective(const Scenario& scenario, const Trajectory& traj,
                           const AllocationPlan& plan, const PenaltyConfig& penalties) {
  return true_penalized_objective(tight_vars(scenario, traj), plan, scenario, penalties);
}

}  // namespace uavplan
