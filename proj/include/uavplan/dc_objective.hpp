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

#ifndef UAVPLAN_DC_OBJECTIVE_HPP_
#define UAVPLAN_DC_OBJECTIVE_HPP_

// Penalised trajectory objective written as a difference of two concave
// functions F - G, the gradient of G, and the concave first-order surrogate
// obtained by linearising G. Everything is templated on the scalar type so
// tests can evaluate in extended precision.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "uavplan/allocation.hpp"
#include "uavplan/channel.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/types.hpp"

namespace uavplan {

// How the rate (C1) and no-fly-zone (C4) constraints enter the objective.
//  kLinear:  lambda * (rate - r_min) + eta * (d_nf^2 - Q^2), summed as is.
//            This is the plain D.C. form F - G; it also rewards slack.
//  kClipped: lambda * min(0, rate - r_min) + eta * min(0, d_nf^2 - Q^2),
//            an exact penalty that only charges violations. Its surrogate
//            clips the same linearised terms, so it stays a tight minorant.
enum class PenaltyForm { kLinear, kClipped };

struct PenaltyConfig {
  double lambda = 1e3;
  double eta = 1e3;
  PenaltyForm form = PenaltyForm::kClipped;

  void validate() const {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("penalty lambda must be finite and >= 1");
    }
    if (!(eta >= 1.0) || !std::isfinite(eta)) {
      throw std::invalid_argument("penalty eta must be finite and >= 1");
    }
  }
};

PenaltyForm parse_penalty_form(const std::string& name);
const char* to_string(PenaltyForm form);

// Decision variables of the trajectory subproblem: positions for n = 0..N
// (rows 0 and N pinned to the endpoints) and slacks t(s, k) >= d_k^2 for
// slot n = s + 1.
template <typename Scalar>
struct TrajectoryVarsT {
  TrajectoryT<Scalar> points;
  SlotUserMatrixT<Scalar> slack;

  template <typename Other>
  TrajectoryVarsT<Other> cast() const {
    return {points.template cast<Other>(), slack.template cast<Other>()};
  }
};
using TrajectoryVars = TrajectoryVarsT<double>;

// Gradient over (x, y, t). x and y have N + 1 entries; entry 0 is zero since
// the departure point does not appear in the objective.
template <typename Scalar>
struct GradientT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y;
  SlotUserMatrixT<Scalar> t;
};

// Slacks pinned to the squared distances of a trajectory.
TrajectoryVars tight_vars(const Scenario& scenario, const Trajectory& traj);

namespace detail {

template <typename Scalar>
Scalar log2_of(Scalar v) {
  using std::log;
  return log(v) / kLn2<Scalar>;
}

// Keeps logarithms finite if a line search overshoots below the altitude floor.
template <typename Scalar>
Scalar clamp_slack(Scalar t, const Scenario& scenario) {
  const Scalar h = Scalar(scenario.uav().altitude);
  return std::max(t, h * h + Scalar(1e-9));
}

template <typename Scalar>
void check_dims(const TrajectoryVarsT<Scalar>& vars, const AllocationPlan& plan,
                const Scenario& scenario) {
  const int n = scenario.num_slots();
  if (vars.points.rows() != n + 1 || vars.slack.rows() != n ||
      vars.slack.cols() != scenario.num_users() || plan.counts.rows() != n ||
      plan.counts.cols() != scenario.num_users()) {
    throw std::invalid_argument("dc_objective: dimension mismatch");
  }
}

template <typename Scalar>
Scalar nfz_sq_distance(Scalar x, Scalar y, const NoFlyZone& z) {
  const Scalar dx = x - Scalar(z.center.x());
  const Scalar dy = y - Scalar(z.center.y());
  return dx * dx + dy * dy;
}

template <typename Scalar>
Scalar sum_r_min(const Scenario& scenario) {
  Scalar sum(0);
  for (const UserNode& u : scenario.users()) sum += Scalar(u.r_min);
  return sum;
}

template <typename Scalar>
Scalar sum_sq_radius(const Scenario& scenario) {
  Scalar sum(0);
  for (const NoFlyZone& z : scenario.nfzs()) sum += Scalar(z.radius) * Scalar(z.radius);
  return sum;
}

}  // namespace detail

// F = -lambda N sum R_min - eta N sum Q^2 + (1 + lambda) sum c log2(t + gamma0 P)
template <typename Scalar>
Scalar eval_F(const TrajectoryVarsT<Scalar>& vars, const AllocationPlan& plan,
              const Scenario& scenario, const PenaltyConfig& penalties) {
  detail::check_dims(vars, plan, scenario);
  const Scalar lambda(penalties.lambda);
  const Scalar eta(penalties.eta);
  const Scalar n_slots(scenario.num_slots());
  const Scalar snr = Scalar(scenario.channel().gamma0) * Scalar(scenario.uav().power_w);
  Scalar rate_sum(0);
  for (int s = 0; s < vars.slack.rows(); ++s) {
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const int c = plan.counts(s, k);
      if (c == 0) continue;
      rate_sum += Scalar(c) * detail::log2_of(detail::clamp_slack(vars.slack(s, k), scenario) + snr);
    }
  }
  return -lambda * n_slots * detail::sum_r_min<Scalar>(scenario) -
         eta * n_slots * detail::sum_sq_radius<Scalar>(scenario) + (Scalar(1) + lambda) * rate_sum;
}

// G = (1 + lambda) sum c log2 t - eta sum_n sum_j |p_n - c_j|^2
template <typename Scalar>
Scalar eval_G(const TrajectoryVarsT<Scalar>& vars, const AllocationPlan& plan,
              const Scenario& scenario, const PenaltyConfig& penalties) {
  detail::check_dims(vars, plan, scenario);
  const Scalar lambda(penalties.lambda);
  const Scalar eta(penalties.eta);
  Scalar log_sum(0);
  for (int s = 0; s < vars.slack.rows(); ++s) {
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const int c = plan.counts(s, k);
      if (c == 0) continue;
      log_sum += Scalar(c) * detail::log2_of(detail::clamp_slack(vars.slack(s, k), scenario));
    }
  }
  Scalar nfz_sum(0);
  for (int n = 1; n < vars.points.rows(); ++n) {
    for (const NoFlyZone& z : scenario.nfzs()) {
      nfz_sum += detail::nfz_sq_distance(vars.points(n, 0), vars.points(n, 1), z);
    }
  }
  return (Scalar(1) + lambda) * log_sum - eta * nfz_sum;
}

template <typename Scalar>
GradientT<Scalar> grad_G(const TrajectoryVarsT<Scalar>& vars, const AllocationPlan& plan,
                         const Scenario& scenario, const PenaltyConfig& penalties) {
  detail::check_dims(vars, plan, scenario);
  const Scalar lambda(penalties.lambda);
  const Scalar eta(penalties.eta);
  const int n_points = static_cast<int>(vars.points.rows());
  GradientT<Scalar> g;
  g.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_points);
  g.y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_points);
  g.t = SlotUserMatrixT<Scalar>::Zero(vars.slack.rows(), vars.slack.cols());
  for (int s = 0; s < vars.slack.rows(); ++s) {
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const Scalar t = detail::clamp_slack(vars.slack(s, k), scenario);
      g.t(s, k) = (Scalar(1) + lambda) * Scalar(plan.counts(s, k)) / (t * kLn2<Scalar>);
    }
  }
  for (int n = 1; n < n_points; ++n) {
    for (const NoFlyZone& z : scenario.nfzs()) {
      g.x(n) -= Scalar(2) * eta * (vars.points(n, 0) - Scalar(z.center.x()));
      g.y(n) -= Scalar(2) * eta * (vars.points(n, 1) - Scalar(z.center.y()));
    }
  }
  return g;
}

// First-order expansion of G at the anchor; an upper bound since G is concave.
template <typename Scalar>
Scalar linearized_G(const TrajectoryVarsT<Scalar>& vars, const TrajectoryVarsT<Scalar>& anchor,
                    const AllocationPlan& plan, const Scenario& scenario,
                    const PenaltyConfig& penalties) {
  const GradientT<Scalar> g = grad_G(anchor, plan, scenario, penalties);
  const auto dp = (vars.points - anchor.points).eval();
  return eval_G(anchor, plan, scenario, penalties) + g.x.dot(dp.col(0)) + g.y.dot(dp.col(1)) +
         (g.t.array() * (vars.slack - anchor.slack).array()).sum();
}

// Penalised objective in the configured form, evaluated at the given slacks.
template <typename Scalar>
Scalar true_penalized_objective(const TrajectoryVarsT<Scalar>& vars, const AllocationPlan& plan,
                                const Scenario& scenario, const PenaltyConfig& penalties) {
  if (penalties.form == PenaltyForm::kLinear) {
    return eval_F(vars, plan, scenario, penalties) - eval_G(vars, plan, scenario, penalties);
  }
  detail::check_dims(vars, plan, scenario);
  using std::log1p;
  using std::min;
  const Scalar lambda(penalties.lambda);
  const Scalar eta(penalties.eta);
  const Scalar snr = Scalar(scenario.channel().gamma0) * Scalar(scenario.uav().power_w);
  Scalar total(0);
  for (int s = 0; s < vars.slack.rows(); ++s) {
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const Scalar t = detail::clamp_slack(vars.slack(s, k), scenario);
      const Scalar rate = Scalar(plan.counts(s, k)) * log1p(snr / t) / kLn2<Scalar>;
      total += rate + lambda * min(Scalar(0), rate - Scalar(scenario.users()[k].r_min));
    }
  }
  for (int n = 1; n < vars.points.rows(); ++n) {
    for (const NoFlyZone& z : scenario.nfzs()) {
      const Scalar d2 = detail::nfz_sq_distance(vars.points(n, 0), vars.points(n, 1), z);
      total += eta * min(Scalar(0), d2 - Scalar(z.radius) * Scalar(z.radius));
    }
  }
  return total;
}

// Concave minorant of true_penalized_objective, tight at the anchor.
template <typename Scalar>
Scalar surrogate_objective(const TrajectoryVarsT<Scalar>& vars,
                           const TrajectoryVarsT<Scalar>& anchor, const AllocationPlan& plan,
                           const Scenario& scenario, const PenaltyConfig& penalties) {
  if (penalties.form == PenaltyForm::kLinear) {
    return eval_F(vars, plan, scenario, penalties) -
           linearized_G(vars, anchor, plan, scenario, penalties);
  }
  detail::check_dims(vars, plan, scenario);
  detail::check_dims(anchor, plan, scenario);
  using std::min;
  const Scalar lambda(penalties.lambda);
  const Scalar eta(penalties.eta);
  const Scalar snr = Scalar(scenario.channel().gamma0) * Scalar(scenario.uav().power_w);
  Scalar total(0);
  for (int s = 0; s < vars.slack.rows(); ++s) {
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const Scalar t = detail::clamp_slack(vars.slack(s, k), scenario);
      const Scalar t0 = detail::clamp_slack(anchor.slack(s, k), scenario);
      // log2(1 + snr/t) >= log2(t + snr) - [log2 t0 + (t - t0) / (t0 ln 2)]
      const Scalar lower = detail::log2_of(t + snr) - detail::log2_of(t0) -
                           (t - t0) / (t0 * kLn2<Scalar>);
      const Scalar rate = Scalar(plan.counts(s, k)) * lower;
      total += rate + lambda * min(Scalar(0), rate - Scalar(scenario.users()[k].r_min));
    }
  }
  for (int n = 1; n < vars.points.rows(); ++n) {
    const Scalar x0 = anchor.points(n, 0);
    const Scalar y0 = anchor.points(n, 1);
    for (const NoFlyZone& z : scenario.nfzs()) {
      const Scalar ex = x0 - Scalar(z.center.x());
      const Scalar ey = y0 - Scalar(z.center.y());
      const Scalar lin = ex * ex + ey * ey + Scalar(2) * ex * (vars.points(n, 0) - x0) +
                         Scalar(2) * ey * (vars.points(n, 1) - y0);
      total += eta * min(Scalar(0), lin - Scalar(z.radius) * Scalar(z.radius));
    }
  }
  return total;
}

// Penalised objective of a trajectory with slacks pinned to d^2.
double penalized_objective(const Scenario& scenario, const Trajectory& traj,
                           const AllocationPlan& plan, const PenaltyConfig& penalties);

}  // namespace uavplan

#endif  // UAVPLAN_DC_OBJECTIVE_HPP_
