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

#ifndef UAVPLAN_PLANNER_HPP_
#define UAVPLAN_PLANNER_HPP_

#include <string>
#include <vector>

#include "uavplan/allocation.hpp"
#include "uavplan/channel.hpp"
#include "uavplan/dc_objective.hpp"
#include "uavplan/inner_solver.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

struct PlannerOptions {
  PenaltyConfig penalties;
  SolverOptions solver;
  int l_max_sca = 50;
  int l_max_outer = 30;
  double sca_tol = 1e-6;    // relative change of the penalised objective
  double outer_tol = 1e-6;
  // Step-length headroom (m) kept by the optimiser so that trajectories
  // rounded to 9 significant digits still pass the speed check.
  double speed_margin = 2e-6;

  void validate() const;
};

// One successive-convex-approximation iterate. Entry 0 of a trace is the
// starting point, where surrogate and true objective coincide.
struct ScaStep {
  double surrogate = 0.0;
  double true_objective = 0.0;
  double max_change = 0.0;  // largest coordinate move of x, y, t
  int inner_iterations = 0;
  InnerStatus inner_status = InnerStatus::kConverged;
};

struct ScaResult {
  TrajectoryVars vars;
  std::vector<ScaStep> trace;
  bool converged = false;
  InnerStatus status = InnerStatus::kConverged;  // worst inner status seen
};

// Re-anchors the surrogate at each intermediate solution until the penalised
// objective changes by less than `tol` (relative) or `l_max` solves ran.
ScaResult optimize_trajectory(const AllocationPlan& plan, const Scenario& scenario,
                              const PenaltyConfig& penalties, const SolverOptions& opts,
                              int l_max, const TrajectoryVars& start, double tol = 1e-6);

struct ConstraintVerdict {
  bool qos_ok = true;        // C1: count * rate >= r_min - 1e-9
  bool capacity_ok = true;   // C2: sum of counts <= N_F
  bool nfz_ok = true;        // C4: d_nf^2 >= Q^2 - 1e-3
  bool speed_ok = true;      // C5: step <= V + 1e-6
  bool endpoints_ok = true;  // bit-exact start / finish

  double qos_residual = 0.0;    // max(r_min - count * rate), bps/Hz
  double nfz_residual = 0.0;    // max(Q^2 - d_nf^2), m^2
  double speed_residual = 0.0;  // max(step - V), m
  double min_nfz_clearance = 0.0;  // min(d_nf - Q), m; +inf without zones

  int qos_slot = -1;  // 1-based slot of the worst QoS residual
  int qos_user = -1;
  int nfz_slot = -1;  // 0-based trajectory index of the deepest incursion
  int nfz_zone = -1;
  int speed_slot = -1;

  bool all_ok() const noexcept {
    return qos_ok && capacity_ok && nfz_ok && speed_ok && endpoints_ok;
  }
};

ConstraintVerdict validate_hard_constraints(const Trajectory& traj, const AllocationPlan& plan,
                                            const Scenario& scenario);

enum class PlanStatus { kConverged, kConvergedEarly, kMaxIters, kInfeasible, kEvaluated };
const char* to_string(PlanStatus status);

struct SolveReport {
  PlanStatus status = PlanStatus::kInfeasible;
  std::vector<double> objective_trace;  // penalised objective per accepted outer iteration
  std::vector<std::vector<ScaStep>> sca_traces;
  double final_throughput = 0.0;
  int iterations_outer = 0;
  ConstraintVerdict constraints;
  Trajectory trajectory;
  SlotUserMatrix slack;
  AllocationPlan plan;
  RateTable rates;
  int infeasible_slot = -1;
  std::string message;

  bool feasible() const noexcept { return status != PlanStatus::kInfeasible; }
};

// Alternates trajectory optimisation for a fixed allocation with optimal
// reallocation for the new trajectory, starting from the constant-speed chord.
SolveReport alternating_optimize(const Scenario& scenario, const PlannerOptions& options);

// Same procedure on a copy of the scenario with every no-fly zone removed.
SolveReport no_nfz_plan(const Scenario& scenario, const PlannerOptions& options);

// Scores a fixed trajectory: optimal allocation per slot, all-or-nothing
// feasibility. Status is kEvaluated or kInfeasible.
SolveReport evaluate_fixed_trajectory(const Scenario& scenario, const Trajectory& traj,
                                      const PenaltyConfig& penalties);

}  // namespace uavplan

#endif  // UAVPLAN_PLANNER_HPP_
