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

#ifndef UAVPLAN_TYPES_HPP_
#define UAVPLAN_TYPES_HPP_

#include <Eigen/Core>

namespace uavplan {

using Point = Eigen::Vector2d;

// Ground-projected UAV positions, one row per slot boundary n = 0..N.
// Row 0 is the departure point and row N the final location.
template <typename Scalar>
using TrajectoryT = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
using Trajectory = TrajectoryT<double>;

// Per-slot, per-user quantities. Row s holds time slot n = s + 1, so a table
// for N slots has N rows; slot 0 carries no communication.
template <typename Scalar>
using SlotUserMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using SlotUserMatrix = SlotUserMatrixT<double>;
using SlotUserCounts = Eigen::MatrixXi;

}  // namespace uavplan

#endif  // UAVPLAN_TYPES_HPP_
