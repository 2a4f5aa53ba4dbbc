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

#include "uavplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace uavplan {
namespace {

double max_change(const TrajectoryVars& a, const TrajectoryVars& b) {
  const double dp = (a.points - b.points).cwiseAbs().maxCoeff();
  const double dt = a.slack.size() ? (a.slack - b.slack).cwiseAbs().maxCoeff() : 0.0;
  return std::max(dp, dt);
}

bool relative_change_below(double previous, double current, double tol) {
  return std::abs(current - previous) < tol * std::max(1.0, std::abs(previous));
}

InnerStatus worse(InnerStatus a, InnerStatus b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

// Same instance with the per-slot step cap lowered by `margin` metres.
Scenario with_step_headroom(const Scenario& scenario, double margin) {
  if (margin <= 0.0) return scenario;
  UavConfig uav = scenario.uav();
  const double span = (uav.finish - uav.start).norm();
  const double floor_step = span / scenario.num_slots();
  const double step = std::max(floor_step, scenario.grid().max_step - margin);
  uav.v_max = step / scenario.grid().dt;
  const ChannelConfig& c = scenario.channel();
  return Scenario::create(scenario.users(), scenario.nfzs(), uav, c.beta0_db, c.noise_dbm,
                          c.n_subcarriers, scenario.grid().horizon, scenario.num_slots());
}

void finish_report(SolveReport& report, const Scenario& scenario) {
  report.rates = build_rate_table(scenario, report.trajectory);
  report.final_throughput = plan_throughput(report.plan, report.rates);
  report.constraints = validate_hard_constraints(report.trajectory, report.plan, scenario);
}

}  // namespace

void PlannerOptions::validate() const {
  penalties.validate();
  solver.validate();
  if (l_max_sca < 1) throw std::invalid_argument("l_max_sca must be >= 1");
  if (l_max_outer < 1) throw std::invalid_argument("l_max_outer must be >= 1");
  if (!(sca_tol > 0.0) || !(outer_tol > 0.0)) {
    throw std::invalid_argument("convergence tolerances must be positive");
  }
  if (!(speed_margin >= 0.0) || !std::isfinite(speed_margin)) {
    throw std::invalid_argument("speed_margin must be finite and >= 0");
  }
}

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kConverged:
      return "converged";
    case PlanStatus::kConvergedEarly:
      return "converged-early";
    case PlanStatus::kMaxIters:
      return "max-iters";
    case PlanStatus::kInfeasible:
      return "infeasible";
    case PlanStatus::kEvaluated:
      return "evaluated";
  }
  return "unknown";
}

ScaResult optimize_trajectory(const AllocationPlan& plan, const Scenario& scenario,
                              const PenaltyConfig& penalties, const SolverOptions& opts,
                              int l_max, const TrajectoryVars& start, double tol) {
  ScaResult result;
  result.vars = start;
  double current = true_penalized_objective(start, plan, scenario, penalties);
  result.trace.push_back(ScaStep{current, current, 0.0, 0, InnerStatus::kConverged});

  for (int l = 0; l < l_max; ++l) {
    InnerSolution inner = solve_surrogate(result.vars, plan, scenario, penalties, opts);
    result.status = worse(result.status, inner.status);
    if (inner.status == InnerStatus::kInfeasibleInput) {
      throw std::runtime_error("trajectory optimisation started from an infeasible point");
    }
    const double next = true_penalized_objective(inner.vars, plan, scenario, penalties);
    result.trace.push_back(ScaStep{inner.objective, next, max_change(inner.vars, result.vars),
                                   inner.iterations, inner.status});
    result.vars = std::move(inner.vars);
    const bool settled = relative_change_below(current, next, tol);
    current = next;
    if (settled) {
      result.converged = true;
      break;
    }
  }
  return result;
}

ConstraintVerdict validate_hard_constraints(const Trajectory& traj, const AllocationPlan& plan,
                                            const Scenario& scenario) {
  const int n_slots = scenario.num_slots();
  if (traj.rows() != n_slots + 1 || plan.counts.rows() != n_slots ||
      plan.counts.cols() != scenario.num_users()) {
    throw std::invalid_argument("validate_hard_constraints: dimension mismatch");
  }
  ConstraintVerdict v;
  const RateTable rates = build_rate_table(scenario, traj);

  v.qos_residual = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_slots; ++s) {
    for (int k = 0; k < scenario.num_users(); ++k) {
      const double shortfall = scenario.users()[k].r_min - plan.counts(s, k) * rates(s, k);
      if (shortfall > v.qos_residual) {
        v.qos_residual = shortfall;
        v.qos_slot = s + 1;
        v.qos_user = k;
      }
    }
    if (plan.counts.row(s).sum() > scenario.channel().n_subcarriers) v.capacity_ok = false;
  }
  v.qos_ok = v.qos_residual <= 1e-9;

  v.nfz_residual = -std::numeric_limits<double>::infinity();
  v.min_nfz_clearance = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= n_slots; ++n) {
    for (std::size_t j = 0; j < scenario.nfzs().size(); ++j) {
      const NoFlyZone& z = scenario.nfzs()[j];
      const double d2 = (traj.row(n).transpose() - z.center).squaredNorm();
      const double incursion = z.radius * z.radius - d2;
      if (incursion > v.nfz_residual) {
        v.nfz_residual = incursion;
        v.nfz_slot = n;
        v.nfz_zone = static_cast<int>(j);
      }
      v.min_nfz_clearance = std::min(v.min_nfz_clearance, std::sqrt(d2) - z.radius);
    }
  }
  if (scenario.nfzs().empty()) v.nfz_residual = 0.0;
  v.nfz_ok = v.nfz_residual <= 1e-3;

  const double step_cap = scenario.grid().max_step;
  v.speed_residual = -step_cap;
  for (int n = 1; n <= n_slots; ++n) {
    const double excess = (traj.row(n) - traj.row(n - 1)).norm() - step_cap;
    if (excess > v.speed_residual) {
      v.speed_residual = excess;
      v.speed_slot = n;
    }
  }
  v.speed_ok = v.speed_residual <= 1e-6;

  v.endpoints_ok = traj(0, 0) == scenario.uav().start.x() &&
                   traj(0, 1) == scenario.uav().start.y() &&
                   traj(n_slots, 0) == scenario.uav().finish.x() &&
                   traj(n_slots, 1) == scenario.uav().finish.y();
  return v;
}

SolveReport alternating_optimize(const Scenario& scenario, const PlannerOptions& options) {
  options.validate();
  const PenaltyConfig& penalties = options.penalties;
  SolveReport report;
  // Trajectories are optimised against a slightly tighter step cap and
  // validated against the real one.
  const Scenario work = with_step_headroom(scenario, options.speed_margin);

  TrajectoryVars vars = initial_interior_point(work);
  RateTable rates = build_rate_table(scenario, vars.points);
  AllocationResult alloc = allocate_all(rates, scenario);

  if (!alloc.feasible()) {
    // The chord cannot serve every user; let the rate penalty steer a
    // trajectory under a best-effort allocation, then try once more.
    const AllocationPlan seed = allocate_best_effort(rates, scenario);
    ScaResult sca = optimize_trajectory(seed, work, penalties, options.solver,
                                        options.l_max_sca, vars, options.sca_tol);
    report.sca_traces.push_back(sca.trace);
    const int first_failure = alloc.infeasible_slot;
    vars = std::move(sca.vars);
    rates = build_rate_table(scenario, vars.points);
    alloc = allocate_all(rates, scenario);
    if (!alloc.feasible()) {
      std::ostringstream msg;
      msg << "minimum rates cannot be met: slot " << first_failure
          << " infeasible on the initial trajectory and slot " << alloc.infeasible_slot
          << " after re-planning, at " << scenario.power_dbm() << " dBm per subcarrier";
      report.status = PlanStatus::kInfeasible;
      report.infeasible_slot = alloc.infeasible_slot;
      report.message = msg.str();
      report.trajectory = vars.points;
      report.slack = vars.slack;
      report.plan = allocate_best_effort(rates, scenario);
      finish_report(report, scenario);
      return report;
    }
  }

  AllocationPlan plan = std::move(*alloc.plan);
  double objective = penalized_objective(scenario, vars.points, plan, penalties);
  report.objective_trace.push_back(objective);
  report.status = PlanStatus::kMaxIters;

  for (int outer = 1; outer <= options.l_max_outer; ++outer) {
    ScaResult sca = optimize_trajectory(plan, work, penalties, options.solver,
                                        options.l_max_sca, vars, options.sca_tol);
    report.sca_traces.push_back(sca.trace);
    report.iterations_outer = outer;

    const RateTable next_rates = build_rate_table(scenario, sca.vars.points);
    AllocationResult next_alloc = allocate_all(next_rates, scenario);
    if (!next_alloc.feasible()) {
      // Keep the last (plan, trajectory) pair that met every minimum rate.
      report.status = PlanStatus::kConvergedEarly;
      break;
    }
    const double next = penalized_objective(scenario, sca.vars.points, *next_alloc.plan, penalties);
    if (next < objective) {
      report.status = PlanStatus::kConverged;
      break;
    }
    const bool settled = relative_change_below(objective, next, options.outer_tol);
    vars = std::move(sca.vars);
    plan = std::move(*next_alloc.plan);
    objective = next;
    report.objective_trace.push_back(objective);
    if (settled) {
      report.status = PlanStatus::kConverged;
      break;
    }
  }

  report.trajectory = vars.points;
  report.slack = vars.slack;
  report.plan = std::move(plan);
  finish_report(report, scenario);
  if (!report.constraints.all_ok()) {
    report.status = PlanStatus::kInfeasible;
    report.message = "optimised trajectory violates a hard constraint";
  }
  return report;
}

SolveReport no_nfz_plan(const Scenario& scenario, const PlannerOptions& options) {
  return alternating_optimize(scenario.without_nfzs(), options);
}

SolveReport evaluate_fixed_trajectory(const Scenario& scenario, const Trajectory& traj,
                                      const PenaltyConfig& penalties) {
  SolveReport report;
  report.trajectory = traj;
  report.slack = tight_vars(scenario, traj).slack;
  const RateTable rates = build_rate_table(scenario, traj);
  AllocationResult alloc = allocate_all(rates, scenario);
  if (alloc.feasible()) {
    report.status = PlanStatus::kEvaluated;
    report.plan = std::move(*alloc.plan);
    report.objective_trace.push_back(penalized_objective(scenario, traj, report.plan, penalties));
  } else {
    report.status = PlanStatus::kInfeasible;
    report.infeasible_slot = alloc.infeasible_slot;
    report.message = "slot " + std::to_string(alloc.infeasible_slot) +
                     " cannot meet the minimum rates on this trajectory";
    report.plan = allocate_best_effort(rates, scenario);
  }
  finish_report(report, scenario);
  return report;
}

}  // namespace uavplan
