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

#ifndef UAVPLAN_CHANNEL_HPP_
#define UAVPLAN_CHANNEL_HPP_

#include <cmath>

#include "uavplan/scenario.hpp"
#include "uavplan/types.hpp"

namespace uavplan {

template <typename Scalar>
inline constexpr Scalar kLn2 = Scalar(0.693147180559945309417232121458176568L);

// d_k^2[n] for a UAV at ground position (x, y) and constant altitude H.
template <typename Scalar>
Scalar squared_distance(Scalar x, Scalar y, Scalar user_x, Scalar user_y,
                        Scalar altitude) {
  const Scalar dx = x - user_x;
  const Scalar dy = y - user_y;
  return dx * dx + dy * dy + altitude * altitude;
}

inline double squared_distance(const Point& uav, const UserNode& user, double altitude) {
  return squared_distance(uav.x(), uav.y(), user.position.x(), user.position.y(), altitude);
}

// Free-space LoS rate of one subcarrier, bps/Hz.
template <typename Scalar>
Scalar per_subcarrier_rate(Scalar d2, Scalar gamma0, Scalar power) {
  using std::log1p;
  return log1p(gamma0 * power / d2) / kLn2<Scalar>;
}

// table(s, k) = per-subcarrier rate of user k in time slot n = s + 1.
// Frequency-flat, so one entry serves every subcarrier.
using RateTable = SlotUserMatrix;

RateTable build_rate_table(const Scenario& scenario, const Trajectory& traj);

}  // namespace uavplan

#endif  // UAVPLAN_CHANNEL_HPP_
