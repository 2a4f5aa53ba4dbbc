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

#ifndef UAVPLAN_EXPORT_HPP_
#define UAVPLAN_EXPORT_HPP_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavplan/planner.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

// Fixed 9-significant-digit formatting shared by every CSV writer.
std::string format_number(double value);

// Columns: n, time_s, x_m, y_m, step_m, min_nfz_clearance_m.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Scenario& scenario);

// Reads the x_m / y_m columns back. Throws std::runtime_error on malformed
// input; the row count is not checked against any scenario.
Trajectory read_trajectory_csv(std::istream& in);

nlohmann::json constraints_to_json(const ConstraintVerdict& verdict);
nlohmann::json report_to_json(const SolveReport& report, const Scenario& scenario,
                              const PlannerOptions& options);

struct SweepRow {
  double power_dbm = 0.0;
  std::string strategy;
  double throughput = 0.0;
  bool feasible = false;
};

// Columns: power_dbm, strategy, throughput_bpshz, feasible.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace uavplan

#endif  // UAVPLAN_EXPORT_HPP_
