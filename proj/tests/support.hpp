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

#ifndef UAVPLAN_TESTS_SUPPORT_HPP_
#define UAVPLAN_TESTS_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "uavplan/allocation.hpp"
#include "uavplan/dc_objective.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(UAVPLAN_SCENARIO_DIR) + "/" + name;
}

// Single user at (800, 800), one zone at (450, 450) with radius 150, 50 s of
// one-second slots from (0, 0) to (0, 1000).
inline Scenario reference_scenario(double power_dbm = 10.0) {
  UavConfig uav;
  uav.altitude = 100.0;
  uav.v_max = 50.0;
  uav.start = Point(0.0, 0.0);
  uav.finish = Point(0.0, 1000.0);
  uav.power_w = 1.0;
  return Scenario::create({UserNode{1, Point(800.0, 800.0), 3.0}},
                          {NoFlyZone{Point(450.0, 450.0), 150.0, 200.0}}, uav, -50.0, -100.0,
                          16, 50.0, 50)
      .with_power_dbm(power_dbm);
}

// Random valid scenario inside a 1 km square. Zones are kept apart from each
// other and from the endpoints; the horizon leaves slack in the reach budget.
inline Scenario random_scenario(std::mt19937_64& rng, int n_users, int n_slots, int n_zones,
                                int n_subcarriers = 16) {
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::uniform_real_distribution<double> rmin(0.5, 3.0);
  std::uniform_real_distribution<double> radius(40.0, 150.0);
  std::uniform_real_distribution<double> power(5.0, 20.0);

  std::vector<UserNode> users;
  for (int k = 0; k < n_users; ++k) {
    users.push_back(UserNode{k + 1, Point(coord(rng), coord(rng)), rmin(rng)});
  }
  UavConfig uav;
  uav.altitude = 100.0;
  uav.start = Point(coord(rng), coord(rng));
  uav.finish = Point(coord(rng), coord(rng));
  const double span = (uav.finish - uav.start).norm();
  uav.v_max = std::max(10.0, 1.6 * span / n_slots);
  uav.power_w = 1.0;

  std::vector<NoFlyZone> zones;
  for (int attempt = 0; static_cast<int>(zones.size()) < n_zones && attempt < 1000; ++attempt) {
    const NoFlyZone z{Point(coord(rng), coord(rng)), radius(rng), 200.0};
    bool ok = (uav.start - z.center).norm() > z.radius + 5.0 &&
              (uav.finish - z.center).norm() > z.radius + 5.0;
    for (const NoFlyZone& other : zones) {
      ok = ok && (other.center - z.center).norm() > other.radius + z.radius + 5.0;
    }
    if (ok) zones.push_back(z);
  }
  return Scenario::create(users, zones, uav, -50.0, -100.0, n_subcarriers,
                          static_cast<double>(n_slots), n_slots)
      .with_power_dbm(power(rng));
}

// Random subcarrier counts with at most N_F per slot (C1 not enforced).
inline AllocationPlan random_plan(std::mt19937_64& rng, const Scenario& s) {
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Zero(s.num_slots(), s.num_users());
  const int nf = s.channel().n_subcarriers;
  for (int n = 0; n < s.num_slots(); ++n) {
    int left = nf;
    for (int k = 0; k < s.num_users(); ++k) {
      std::uniform_int_distribution<int> take(0, left);
      plan.counts(n, k) = take(rng);
      left -= plan.counts(n, k);
    }
  }
  return plan;
}

// Random positions in a 1.4 km square with endpoints pinned and slacks
// inflated up to 3x above the squared distances.
inline TrajectoryVars random_vars(std::mt19937_64& rng, const Scenario& s) {
  std::uniform_real_distribution<double> coord(-200.0, 1200.0);
  std::uniform_real_distribution<double> inflate(0.0, 2.0);
  TrajectoryVars v{Trajectory(s.num_slots() + 1, 2), SlotUserMatrix(s.num_slots(), s.num_users())};
  for (int n = 0; n <= s.num_slots(); ++n) v.points.row(n) << coord(rng), coord(rng);
  v.points.row(0) = s.uav().start.transpose();
  v.points.row(s.num_slots()) = s.uav().finish.transpose();
  for (int n = 0; n < s.num_slots(); ++n) {
    const Point p = v.points.row(n + 1).transpose();
    for (int k = 0; k < s.num_users(); ++k) {
      v.slack(n, k) = squared_distance(p, s.users()[k], s.uav().altitude) * (1.0 + inflate(rng));
    }
  }
  return v;
}

}  // namespace uavplan::testing

#endif  // UAVPLAN_TESTS_SUPPORT_HPP_
