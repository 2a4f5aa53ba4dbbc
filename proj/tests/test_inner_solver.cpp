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

#include <doctest.h>

#include <chrono>
#include <random>

#include "grid_oracle.hpp"
#include "support.hpp"
#include "uavplan/allocation.hpp"
#include "uavplan/benchmarks.hpp"
#include "uavplan/inner_solver.hpp"

using namespace uavplan;

TEST_CASE("initial interior point") {
  const Scenario s = testing::reference_scenario();
  const TrajectoryVars v = initial_interior_point(s);
  REQUIRE(v.points.rows() == 51);
  for (int n = 0; n <= 50; ++n) {
    CHECK(v.points(n, 0) == 0.0);
    CHECK(v.points(n, 1) == doctest::Approx(20.0 * n).epsilon(1e-14));
  }
  for (int n = 1; n <= 50; ++n) {
    CHECK((v.points.row(n) - v.points.row(n - 1)).norm() == doctest::Approx(20.0));
    const double d2 = squared_distance(Point(v.points.row(n).transpose()), s.users()[0], 100.0);
    CHECK(v.slack(n - 1, 0) == doctest::Approx(d2 * (1.0 + 1e-3)).epsilon(1e-15));
  }
  CHECK(constraint_residual(v, s) == 0.0);

  UavConfig hover{100.0, 50.0, Point(10.0, 20.0), Point(10.0, 20.0), 0.01};
  const Scenario h =
      Scenario::create({UserNode{1, Point(0, 0), 1.0}}, {}, hover, -50.0, -100.0, 16, 10.0, 10);
  const TrajectoryVars hv = initial_interior_point(h);
  for (int n = 1; n <= 10; ++n) CHECK((hv.points.row(n) - hv.points.row(n - 1)).norm() == 0.0);

  UavConfig tight{100.0, 50.0, Point(0.0, 0.0), Point(0.0, 500.0), 0.01};
  const Scenario t =
      Scenario::create({UserNode{1, Point(0, 0), 1.0}}, {}, tight, -50.0, -100.0, 16, 10.0, 10);
  CHECK_THROWS_AS(initial_interior_point(t), ScenarioValidationError);
}

TEST_CASE("solver options") {
  SolverOptions o;
  CHECK_NOTHROW(o.validate());
  o.line_search.shrink = 1.0;
  CHECK_THROWS(o.validate());
  o = SolverOptions{};
  o.barrier_mu = 0.0;
  CHECK_THROWS(o.validate());
  o = SolverOptions{};
  o.max_iters = 0;
  CHECK_THROWS(o.validate());
}

TEST_CASE("infeasible anchor is rejected") {
  const Scenario s = testing::reference_scenario();
  TrajectoryVars v = initial_interior_point(s);
  v.slack(10, 0) = 1.0;
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(50, 1, 16);
  const InnerSolution sol = solve_surrogate(v, plan, s, PenaltyConfig{}, SolverOptions{});
  CHECK(sol.status == InnerStatus::kInfeasibleInput);
  CHECK(sol.vars.points == v.points);
}

TEST_CASE("far user on the bisector pulls the single free point onto the midline") {
  UavConfig uav{100.0, 50.0, Point(0.0, 0.0), Point(99.0, 0.0), 0.01};
  const Scenario s = Scenario::create({UserNode{1, Point(49.5, 900.0), 0.1}}, {}, uav, -50.0,
                                      -100.0, 16, 2.0, 2);
  const TrajectoryVars anchor = initial_interior_point(s);
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(2, 1, 16);
  const InnerSolution sol = solve_surrogate(anchor, plan, s, PenaltyConfig{}, SolverOptions{});
  CHECK(sol.status == InnerStatus::kConverged);
  const Point p = sol.vars.points.row(1).transpose();
  CHECK(p.x() == doctest::Approx(49.5).epsilon(1e-6));
  CHECK(p.y() > 0.0);
  CHECK(p.norm() == doctest::Approx(50.0).epsilon(1e-6));
  CHECK((p - uav.finish).norm() == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("optimal anchor is returned unchanged") {
  UavConfig uav{100.0, 50.0, Point(300.0, 300.0), Point(300.0, 300.0), 0.01};
  const Scenario s = Scenario::create({UserNode{1, Point(300.0, 300.0), 1.0}}, {}, uav, -50.0,
                                      -100.0, 16, 5.0, 5);
  const TrajectoryVars anchor = tight_vars(s, initial_interior_point(s).points);
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(5, 1, 16);
  const InnerSolution sol = solve_surrogate(anchor, plan, s, PenaltyConfig{}, SolverOptions{});
  CHECK(sol.status == InnerStatus::kConverged);
  CHECK(sol.vars.points == anchor.points);
  CHECK(sol.vars.slack == anchor.slack);
}

TEST_CASE("ascent, feasibility and pinned endpoints on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = testing::random_scenario(rng, 1 + trial % 3, 5 + trial % 11, trial % 3);
    const TrajectoryVars anchor = initial_interior_point(s);
    const RateTable rates = build_rate_table(s, anchor.points);
    const AllocationResult alloc = allocate_all(rates, s);
    const AllocationPlan plan = alloc.plan ? *alloc.plan : allocate_best_effort(rates, s);
    for (PenaltyForm form : {PenaltyForm::kClipped, PenaltyForm::kLinear}) {
      PenaltyConfig pen;
      pen.form = form;
      const InnerSolution sol = solve_surrogate(anchor, plan, s, pen, SolverOptions{});
      const double base = surrogate_objective(anchor, anchor, plan, s, pen);
      CHECK(sol.objective >= base - 1e-9);
      CHECK(sol.residual <= kFeasibilityTol);
      CHECK(constraint_residual(sol.vars, s) <= kFeasibilityTol);
      CHECK(sol.vars.points(0, 0) == s.uav().start.x());
      CHECK(sol.vars.points(0, 1) == s.uav().start.y());
      CHECK(sol.vars.points(s.num_slots(), 0) == s.uav().finish.x());
      CHECK(sol.vars.points(s.num_slots(), 1) == s.uav().finish.y());
    }
  }
}

TEST_CASE("iteration cap is reported") {
  const Scenario s = load_scenario(testing::scenario_path("five_user.json"));
  const TrajectoryVars anchor = initial_interior_point(s);
  const RateTable rates = build_rate_table(s, anchor.points);
  const AllocationPlan plan = *allocate_all(rates, s).plan;
  SolverOptions o;
  o.max_iters = 1;
  const InnerSolution sol = solve_surrogate(anchor, plan, s, PenaltyConfig{}, o);
  CHECK(sol.status == InnerStatus::kMaxIters);
  CHECK(sol.residual <= kFeasibilityTol);
}

TEST_CASE("two-slot instances agree with exhaustive grid search") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const testing::TwoSlotInstance in = testing::random_two_slot_instance(rng);
    const auto t0 = std::chrono::steady_clock::now();
    const InnerSolution sol =
        solve_surrogate(in.anchor, in.plan, in.scenario, in.penalties, SolverOptions{});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double oracle = testing::grid_oracle(in);
    CAPTURE(trial);
    CAPTURE(to_string(in.penalties.form));
    CHECK(std::abs(sol.objective - oracle) <= 1e-3);
    CHECK(sol.residual <= 1e-6);
    CHECK(seconds < 10.0);
  }
}
