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

#ifndef UAVPLAN_INNER_SOLVER_HPP_
#define UAVPLAN_INNER_SOLVER_HPP_

#include "uavplan/allocation.hpp"
#include "uavplan/dc_objective.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

struct LineSearchOptions {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
};

struct SolverOptions {
  int max_iters = 200;       // Newton steps per centering stage
  double kkt_tol = 1e-5;     // barrier stops once (#barrier terms) * mu < kkt_tol
  double obj_tol = 1e-6;     // relative surrogate gain below which the anchor is kept
  double barrier_mu = 0.2;   // mu reduction factor between stages
  double initial_mu = 1.0;  // floor; the first stage uses max(initial_mu, |f(anchor)| / m)
  LineSearchOptions line_search;

  void validate() const;
};

enum class InnerStatus { kConverged, kMaxIters, kInfeasibleInput };
const char* to_string(InnerStatus status);

struct InnerSolution {
  TrajectoryVars vars;
  double objective = 0.0;  // surrogate_objective(vars, anchor)
  double residual = 0.0;   // max violation of C5 / C6, m^2
  int iterations = 0;      // Newton steps over all barrier stages
  InnerStatus status = InnerStatus::kConverged;
};

// Tolerance on C5/C6 violations, m^2.
inline constexpr double kFeasibilityTol = 1e-6;

// Maximises the concave surrogate built at `anchor` subject to
//   C5: |p_n - p_{n-1}|^2 <= V^2            n = 1..N
//   C6: |p_n - q_k|^2 + H^2 <= t(n, k)      n = 1..N, every user
// with a log-barrier interior method. Endpoints are never moved. The result
// never scores below the anchor on the surrogate.
InnerSolution solve_surrogate(const TrajectoryVars& anchor, const AllocationPlan& plan,
                              const Scenario& scenario, const PenaltyConfig& penalties,
                              const SolverOptions& opts);

// Constant-speed chord from start to finish with slacks inflated by 1e-3.
// Throws ScenarioValidationError when the chord is not strictly inside C5.
TrajectoryVars initial_interior_point(const Scenario& scenario);

// Largest C5 / C6 violation in m^2 (0 when feasible).
double constraint_residual(const TrajectoryVars& vars, const Scenario& scenario);

// Pulls a (near-)feasible point strictly inside C5 / C6 by blending the path
// toward the chord and inflating slacks. Endpoints are untouched.
TrajectoryVars make_strictly_interior(TrajectoryVars vars, const Scenario& scenario);

}  // namespace uavplan

#endif  // UAVPLAN_INNER_SOLVER_HPP_
