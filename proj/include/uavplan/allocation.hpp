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

#ifndef UAVPLAN_ALLOCATION_HPP_
#define UAVPLAN_ALLOCATION_HPP_

#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "uavplan/channel.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

// Subcarrier assignment for every time slot. counts is canonical; assignment
// is derived from it (subcarrier identity is irrelevant on flat channels).
struct AllocationPlan {
  SlotUserCounts counts;                     // N x K, N_k[n]
  std::vector<std::vector<int>> assignment;  // N x N_F user index, -1 = idle
};

struct AllocationResult {
  std::optional<AllocationPlan> plan;
  int infeasible_slot = -1;  // 1-based slot n of the first failure

  bool feasible() const noexcept { return plan.has_value(); }
};

// argmax_k rate_k; ties go to the smallest index.
int strongest_user(const Eigen::Ref<const Eigen::VectorXd>& rates);

// Smallest m with m * rate >= r_min - 1e-9.
int min_subcarriers(double r_min, double rate);

// Greedy-optimal allocation for one slot: every user except the strongest
// gets its minimum count, the strongest takes the remainder. Returns nullopt
// when no allocation meets the per-user minimum rates.
std::optional<Eigen::VectorXi> allocate_slot(const Eigen::Ref<const Eigen::VectorXd>& rates,
                                             int n_subcarriers,
                                             const Eigen::Ref<const Eigen::VectorXd>& r_mins);

// Exhaustive search over all count vectors with sum <= N_F. Desk scale only
// (K <= 4, N_F <= 16); used as a test oracle for allocate_slot.
std::optional<Eigen::VectorXi> brute_force_slot_oracle(
    const Eigen::Ref<const Eigen::VectorXd>& rates, int n_subcarriers,
    const Eigen::Ref<const Eigen::VectorXd>& r_mins);

AllocationResult allocate_all(const RateTable& rates, const Scenario& scenario);

// Best-effort allocation that never fails: feasible slots use allocate_slot,
// infeasible ones spread subcarriers to minimise the worst relative
// shortfall. Used to seed trajectory optimisation when the initial path
// cannot meet every minimum rate.
AllocationPlan allocate_best_effort(const RateTable& rates, const Scenario& scenario);

// Builds the subcarrier map: users in ascending index order take consecutive
// subcarriers, the strongest user of the slot fills the rest.
AllocationPlan make_plan(SlotUserCounts counts, const RateTable& rates, int n_subcarriers);

double plan_throughput(const AllocationPlan& plan, const RateTable& rates);

Eigen::VectorXd user_min_rates(const Scenario& scenario);

// CSV columns: slot, user, count, rate, user_rate_total.
void write_allocation_csv(std::ostream& out, const AllocationPlan& plan, const RateTable& rates,
                          const Scenario& scenario);

}  // namespace uavplan

#endif  // UAVPLAN_ALLOCATION_HPP_
