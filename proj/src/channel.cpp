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

#include "uavplan/channel.hpp"

#include <stdexcept>

namespace uavplan {

RateTable build_rate_table(const Scenario& scenario, const Trajectory& traj) {
  const int n_slots = scenario.num_slots();
  if (traj.rows() != n_slots + 1) {
    throw std::invalid_argument("trajectory must have N + 1 points");
  }
  const double altitude = scenario.uav().altitude;
  const double gamma0 = scenario.channel().gamma0;
  const double power = scenario.uav().power_w;
  RateTable table(n_slots, scenario.num_users());
  for (int s = 0; s < n_slots; ++s) {
    const Point p = traj.row(s + 1).transpose();
    for (int k = 0; k < scenario.num_users(); ++k) {
      table(s, k) = per_subcarrier_rate(squared_distance(p, scenario.users()[k], altitude),
                                        gamma0, power);
    }
  }
  return table;
}

}  // namespace uavplan
