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

#include <cmath>
#include <random>

#include "quad.hpp"
#include "support.hpp"
#include "uavplan/benchmarks.hpp"
#include "uavplan/dc_objective.hpp"

using namespace uavplan;
using testing::Quad;

namespace {

struct Instance {
  Scenario scenario;
  AllocationPlan plan;
  TrajectoryVars vars;
};

Instance random_instance(std::mt19937_64& rng, int max_slots = 10, int max_users = 3,
                         int max_zones = 2) {
  std::uniform_int_distribution<int> slots(1, max_slots);
  std::uniform_int_distribution<int> users(1, max_users);
  std::uniform_int_distribution<int> zones(0, max_zones);
  Scenario s = testing::random_scenario(rng, users(rng), slots(rng), zones(rng));
  AllocationPlan plan = testing::random_plan(rng, s);
  TrajectoryVars vars = testing::random_vars(rng, s);
  return {std::move(s), std::move(plan), std::move(vars)};
}

PenaltyConfig random_penalties(std::mt19937_64& rng, PenaltyForm form) {
  std::uniform_real_distribution<double> exponent(0.0, 4.0);
  PenaltyConfig p;
  p.lambda = std::pow(10.0, exponent(rng));
  p.eta = std::pow(10.0, exponent(rng));
  p.form = form;
  return p;
}

TrajectoryVars midpoint(const TrajectoryVars& a, const TrajectoryVars& b) {
  return {0.5 * (a.points + b.points), 0.5 * (a.slack + b.slack)};
}

Scenario one_slot_scenario() {
  UavConfig uav{100.0, 50.0, Point(0.0, 0.0), Point(0.0, 0.0), 0.01};
  return Scenario::create({UserNode{1, Point(0.0, 0.0), 3.0}}, {}, uav, -50.0, -100.0, 16, 1.0,
                          1);
}

}  // namespace

TEST_CASE("F on a one-slot instance") {
  const Scenario s = one_slot_scenario();
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(1, 1, 16);
  TrajectoryVars v{Trajectory::Zero(2, 2), SlotUserMatrix::Constant(1, 1, 10000.0)};
  PenaltyConfig p;
  p.lambda = 1000.0;
  p.eta = 0.0;
  // -3000 + 1001 * 16 * log2(1 010 000), to 20 digits.
  const double expected = 316453.91657861672596;
  CHECK(std::abs(eval_F(v, plan, s, p) - expected) <= 1e-12 * expected);
}

TEST_CASE("G term isolation") {
  std::mt19937_64 rng(5);
  Instance in = random_instance(rng, 6, 3, 0);
  PenaltyConfig p;
  p.lambda = 0.0;
  double expected = 0.0;
  for (int n = 0; n < in.vars.slack.rows(); ++n) {
    for (int k = 0; k < in.vars.slack.cols(); ++k) {
      expected += in.plan.counts(n, k) * std::log2(in.vars.slack(n, k));
    }
  }
  CHECK(eval_G(in.vars, in.plan, in.scenario, p) == doctest::Approx(expected).epsilon(1e-12));

  // Sitting on a zone centre removes the quadratic terms.
  const Scenario s = testing::reference_scenario();
  TrajectoryVars v = tight_vars(s, straight_trajectory(s));
  for (int n = 1; n <= s.num_slots(); ++n) v.points.row(n) << 450.0, 450.0;
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(s.num_slots(), 1, 16);
  PenaltyConfig with_eta;
  with_eta.lambda = 0.0;
  with_eta.eta = 1e3;
  PenaltyConfig without_eta = with_eta;
  without_eta.eta = 0.0;
  CHECK(eval_G(v, plan, s, with_eta) == eval_G(v, plan, s, without_eta));
  const GradientT<double> g = grad_G(v, plan, s, with_eta);
  CHECK(g.x.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spatial gradient vanishes without the zone penalty") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    Instance in = random_instance(rng);
    PenaltyConfig p = random_penalties(rng, PenaltyForm::kLinear);
    p.eta = 0.0;
    const GradientT<double> g = grad_G(in.vars, in.plan, in.scenario, p);
    CHECK(g.x.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.y.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gradient of G against central differences") {
  std::mt19937_64 rng(17);
  const Quad h = Quad(1e-4);
  int checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = random_instance(rng);
    const PenaltyConfig p = random_penalties(rng, PenaltyForm::kLinear);
    const TrajectoryVarsT<Quad> v = in.vars.cast<Quad>();
    const GradientT<Quad> g = grad_G(v, in.plan, in.scenario, p);
    auto partial = [&](auto&& perturb) {
      TrajectoryVarsT<Quad> plus = v;
      TrajectoryVarsT<Quad> minus = v;
      perturb(plus, h);
      perturb(minus, -h);
      return (eval_G(plus, in.plan, in.scenario, p) - eval_G(minus, in.plan, in.scenario, p)) /
             (2 * h);
    };
    auto check = [&](const Quad& analytic, const Quad& numeric) {
      const double a = analytic.convert_to<double>();
      const double err = abs(numeric - analytic).convert_to<double>();
      const double rel = a == 0.0 ? err : err / std::abs(a);
      worst = std::max(worst, rel);
      CHECK(rel < 1e-6);
      ++checked;
    };
    const int last = in.scenario.num_slots();
    for (int n = 1; n < last; ++n) {
      check(g.x(n), partial([&](TrajectoryVarsT<Quad>& w, const Quad& d) { w.points(n, 0) += d; }));
      check(g.y(n), partial([&](TrajectoryVarsT<Quad>& w, const Quad& d) { w.points(n, 1) += d; }));
    }
    for (int s = 0; s < v.slack.rows(); ++s) {
      for (int k = 0; k < v.slack.cols(); ++k) {
        check(g.t(s, k),
              partial([&](TrajectoryVarsT<Quad>& w, const Quad& d) { w.slack(s, k) += d; }));
      }
    }
  }
  MESSAGE("partials checked: " << checked << ", worst relative error " << worst);
  CHECK(checked > 1000);
}

TEST_CASE("linearisation of G is an upper estimator, tight at the anchor") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    Instance in = random_instance(rng);
    const PenaltyConfig p = random_penalties(rng, PenaltyForm::kLinear);
    const TrajectoryVars anchor = testing::random_vars(rng, in.scenario);
    const double g = eval_G(in.vars, in.plan, in.scenario, p);
    CHECK(g <= linearized_G(in.vars, anchor, in.plan, in.scenario, p) + 1e-9);
    CHECK(std::abs(linearized_G(anchor, anchor, in.plan, in.scenario, p) -
                   eval_G(anchor, in.plan, in.scenario, p)) <= 1e-9);
  }
}

TEST_CASE("surrogates are tight minorants of the true objective") {
  std::mt19937_64 rng(29);
  for (PenaltyForm form : {PenaltyForm::kLinear, PenaltyForm::kClipped}) {
    CAPTURE(to_string(form));
    for (int trial = 0; trial < 500; ++trial) {
      Instance in = random_instance(rng);
      const PenaltyConfig p = random_penalties(rng, form);
      const TrajectoryVars anchor = testing::random_vars(rng, in.scenario);
      const double truth = true_penalized_objective(in.vars, in.plan, in.scenario, p);
      const double surrogate = surrogate_objective(in.vars, anchor, in.plan, in.scenario, p);
      CHECK(surrogate <= truth + 1e-9 * std::max(1.0, std::abs(truth)));

      // Tangency, evaluated in quad precision so the absolute bound is meaningful.
      const TrajectoryVarsT<Quad> aq = anchor.cast<Quad>();
      const Quad at = true_penalized_objective(aq, in.plan, in.scenario, p);
      const Quad as = surrogate_objective(aq, aq, in.plan, in.scenario, p);
      CHECK(abs(at - as).convert_to<double>() <= 1e-9);
    }
  }
}

TEST_CASE("concavity midpoint certificates") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    Instance in = random_instance(rng);
    const TrajectoryVars b = testing::random_vars(rng, in.scenario);
    const TrajectoryVars anchor = testing::random_vars(rng, in.scenario);
    const TrajectoryVars m = midpoint(in.vars, b);
    for (PenaltyForm form : {PenaltyForm::kLinear, PenaltyForm::kClipped}) {
      const PenaltyConfig p = random_penalties(rng, form);
      auto concave = [&](auto&& f) {
        const double fa = f(in.vars);
        const double fb = f(b);
        const double fm = f(m);
        const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
        CHECK(fm >= 0.5 * (fa + fb) - 1e-12 * scale);
      };
      concave([&](const TrajectoryVars& v) { return eval_F(v, in.plan, in.scenario, p); });
      concave([&](const TrajectoryVars& v) { return eval_G(v, in.plan, in.scenario, p); });
      concave([&](const TrajectoryVars& v) {
        return surrogate_objective(v, anchor, in.plan, in.scenario, p);
      });
    }
  }
}

TEST_CASE("regrouped objective") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    Instance in = random_instance(rng);
    const PenaltyConfig p = random_penalties(rng, PenaltyForm::kLinear);
    const TrajectoryVarsT<Quad> v = in.vars.cast<Quad>();
    const Scenario& s = in.scenario;
    const Quad a = Quad(s.channel().gamma0) * Quad(s.uav().power_w);
    const Quad ln2 = log(Quad(2));
    Quad rates = 0;
    Quad qos = 0;
    for (int n = 0; n < s.num_slots(); ++n) {
      Quad slot = 0;
      Quad need = 0;
      for (int k = 0; k < s.num_users(); ++k) {
        slot += in.plan.counts(n, k) * log(1 + a / v.slack(n, k)) / ln2;
        need += Quad(s.users()[k].r_min);
      }
      rates += slot;
      qos += slot - need;
    }
    Quad nfz = 0;
    for (int n = 1; n <= s.num_slots(); ++n) {
      for (const NoFlyZone& z : s.nfzs()) {
        const Quad dx = v.points(n, 0) - Quad(z.center.x());
        const Quad dy = v.points(n, 1) - Quad(z.center.y());
        nfz += dx * dx + dy * dy - Quad(z.radius) * Quad(z.radius);
      }
    }
    const Quad regrouped = rates + Quad(p.lambda) * qos + Quad(p.eta) * nfz;
    const Quad direct = true_penalized_objective(v, in.plan, s, p);
    CHECK(abs(regrouped - direct).convert_to<double>() <= 1e-9);
  }
}

TEST_CASE("tight slacks give the rate objective; larger slack lowers it") {
  const Scenario s = testing::reference_scenario();
  const Trajectory traj = straight_trajectory(s);
  const RateTable rates = build_rate_table(s, traj);
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(s.num_slots(), 1, 16);
  PenaltyConfig p;
  p.lambda = 0.0;
  p.eta = 0.0;
  p.form = PenaltyForm::kLinear;
  const TrajectoryVars v = tight_vars(s, traj);
  CHECK(true_penalized_objective(v, plan, s, p) ==
        doctest::Approx(16.0 * rates.sum()).epsilon(1e-12));
  TrajectoryVars bigger = v;
  bigger.slack(7, 0) *= 1.5;
  CHECK(true_penalized_objective(bigger, plan, s, p) < true_penalized_objective(v, plan, s, p));
}

TEST_CASE("surrogate in t alone is F minus the tangent of the log term") {
  const Scenario s = one_slot_scenario();
  AllocationPlan plan;
  plan.counts = SlotUserCounts::Constant(1, 1, 16);
  PenaltyConfig p;
  p.lambda = 1000.0;
  p.eta = 0.0;
  p.form = PenaltyForm::kLinear;
  const double t0 = 40000.0;
  const TrajectoryVars anchor{Trajectory::Zero(2, 2), SlotUserMatrix::Constant(1, 1, t0)};
  for (double t : {10000.0, 25000.0, 40000.0, 90000.0}) {
    const TrajectoryVars v{Trajectory::Zero(2, 2), SlotUserMatrix::Constant(1, 1, t)};
    const double tangent = 1001.0 * 16.0 * (std::log2(t0) + (t - t0) / (t0 * std::log(2.0)));
    CHECK(surrogate_objective(v, anchor, plan, s, p) ==
          doctest::Approx(eval_F(v, plan, s, p) - tangent).epsilon(1e-12));
  }
}

TEST_CASE("penalty configuration") {
  CHECK(parse_penalty_form("clipped") == PenaltyForm::kClipped);
  CHECK(parse_penalty_form("linear") == PenaltyForm::kLinear);
  CHECK_THROWS(parse_penalty_form("quadratic"));
  PenaltyConfig p;
  CHECK_NOTHROW(p.validate());
  p.lambda = 0.5;
  CHECK_THROWS(p.validate());
  p.lambda = 1.0;
  p.eta = NAN;
  CHECK_THROWS(p.validate());
}
