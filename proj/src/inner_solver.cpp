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

#include "uavplan/inner_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace uavplan {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCenteringTol = 1e-10;  // half squared Newton decrement

// One user-slot pair that carries subcarriers (count > 0).
struct RateTerm {
  int slot;   // n = slot + 1
  int user;
  int t_idx;
  int u_idx;  // -1 unless clipped
  double count;
  double t0;
  double log2_t0;
  Point q;
  double r_min;
};

// One (free slot, zone) pair.
struct NfzTerm {
  int n;
  int v_idx;  // -1 unless clipped
  double ex;  // anchor offset from the zone centre
  double ey;
  double d0sq;
  double qsq;
  Point anchor;
};

// Collects Hessian triplets for a barrier or objective term.
class HessianBuilder {
 public:
  explicit HessianBuilder(std::vector<Triplet>& trips) : trips_(trips) {}

  // scale * v v^T restricted to the listed indices (negative indices skipped).
  template <std::size_t M>
  void outer(const std::array<int, M>& idx, const std::array<double, M>& v, double scale) {
    for (std::size_t i = 0; i < M; ++i) {
      if (idx[i] < 0) continue;
      for (std::size_t j = 0; j < M; ++j) {
        if (idx[j] < 0) continue;
        trips_.emplace_back(idx[i], idx[j], scale * v[i] * v[j]);
      }
    }
  }

  void add(int i, int j, double value) {
    if (i >= 0 && j >= 0) trips_.emplace_back(i, j, value);
  }

 private:
  std::vector<Triplet>& trips_;
};

class BarrierProblem {
 public:
  BarrierProblem(const TrajectoryVars& anchor, const AllocationPlan& plan,
                 const Scenario& scenario, const PenaltyConfig& penalties)
      : scenario_(scenario),
        anchor_(anchor),
        clipped_(penalties.form == PenaltyForm::kClipped),
        lambda_(penalties.lambda),
        eta_(penalties.eta),
        n_slots_(scenario.num_slots()),
        snr_(scenario.snr_numerator()),
        v2_(scenario.grid().max_step * scenario.grid().max_step),
        h2_(scenario.uav().altitude * scenario.uav().altitude) {
    rate_weight_ = clipped_ ? 1.0 : 1.0 + lambda_;
    n_pos_ = 2 * (n_slots_ - 1);
    int next = n_pos_;
    for (int s = 0; s < n_slots_; ++s) {
      for (int k = 0; k < scenario.num_users(); ++k) {
        if (plan.counts(s, k) <= 0) continue;
        const double t0 = detail::clamp_slack(anchor.slack(s, k), scenario);
        rates_.push_back(RateTerm{s, k, next++, -1, static_cast<double>(plan.counts(s, k)), t0,
                                  detail::log2_of(t0), scenario.users()[k].position,
                                  scenario.users()[k].r_min});
      }
    }
    if (clipped_) {
      for (RateTerm& r : rates_) r.u_idx = next++;
    }
    for (int n = 1; n < n_slots_; ++n) {
      for (const NoFlyZone& z : scenario.nfzs()) {
        const Point a = anchor.points.row(n).transpose();
        const double ex = a.x() - z.center.x();
        const double ey = a.y() - z.center.y();
        nfz_.push_back(NfzTerm{n, clipped_ ? next++ : -1, ex, ey, ex * ex + ey * ey,
                               z.radius * z.radius, a});
      }
    }
    size_ = next;

    for (int n = 1; n <= n_slots_; ++n) {
      if (n - 1 >= 1 || n <= n_slots_ - 1) ++n_barriers_;
    }
    n_barriers_ += static_cast<int>(rates_.size());
    if (clipped_) n_barriers_ += 2 * static_cast<int>(rates_.size() + nfz_.size());
  }

  int size() const { return size_; }
  int num_barriers() const { return n_barriers_; }

  Eigen::VectorXd pack(const TrajectoryVars& start) const {
    Eigen::VectorXd z(size_);
    for (int n = 1; n < n_slots_; ++n) {
      z(2 * (n - 1)) = start.points(n, 0);
      z(2 * (n - 1) + 1) = start.points(n, 1);
    }
    for (const RateTerm& r : rates_) {
      z(r.t_idx) = start.slack(r.slot, r.user);
      if (clipped_) {
        const double shortfall = r.r_min - r.count * rate_lower(r, z(r.t_idx));
        z(r.u_idx) = std::max(0.0, shortfall) + 1.0;
      }
    }
    if (clipped_) {
      for (const NfzTerm& f : nfz_) {
        z(f.v_idx) = std::max(0.0, f.qsq - nfz_linear(f, point(z, f.n))) + 1.0;
      }
    }
    return z;
  }

  TrajectoryVars unpack(const Eigen::VectorXd& z) const {
    TrajectoryVars out = anchor_;
    for (int n = 1; n < n_slots_; ++n) out.points.row(n) = point(z, n).transpose();
    // Pairs without subcarriers do not enter the objective; keep their slack
    // feasible for the new positions.
    for (int s = 0; s < n_slots_; ++s) {
      const Point p = out.points.row(s + 1).transpose();
      for (int k = 0; k < scenario_.num_users(); ++k) {
        const double d2 = squared_distance(p, scenario_.users()[k], scenario_.uav().altitude);
        out.slack(s, k) = std::max(anchor_.slack(s, k), d2 * (1.0 + 1e-3));
      }
    }
    for (const RateTerm& r : rates_) out.slack(r.slot, r.user) = z(r.t_idx);
    return out;
  }

  // -f(z) - mu * sum log g(z), or +inf outside the strict interior.
  double merit(const Eigen::VectorXd& z, double mu) const {
    double objective = 0.0;
    double log_sum = 0.0;
    bool ok = true;
    auto barrier = [&](double g) {
      if (!(g > 0.0)) {
        ok = false;
        return;
      }
      log_sum += std::log(g);
    };

    for (int n = 1; n <= n_slots_; ++n) {
      if (!(n - 1 >= 1 || n <= n_slots_ - 1)) continue;
      barrier(v2_ - (point(z, n) - point(z, n - 1)).squaredNorm());
    }
    for (const RateTerm& r : rates_) {
      const double t = z(r.t_idx);
      barrier(t - (point(z, r.slot + 1) - r.q).squaredNorm() - h2_);
      if (!ok) return kInf;
      const double lower = r.count * rate_lower(r, t);
      objective += rate_weight_ * lower;
      if (clipped_) {
        const double u = z(r.u_idx);
        barrier(u);
        barrier(u + lower - r.r_min);
        objective -= lambda_ * u;
      }
    }
    for (const NfzTerm& f : nfz_) {
      const Point p = point(z, f.n);
      if (clipped_) {
        const double v = z(f.v_idx);
        barrier(v);
        barrier(v + nfz_linear(f, p) - f.qsq);
        objective -= eta_ * v;
      } else {
        objective += eta_ * 2.0 * (f.ex * p.x() + f.ey * p.y());
      }
    }
    if (!ok) return kInf;
    return -objective - mu * log_sum;
  }

  void newton_system(const Eigen::VectorXd& z, double mu, Eigen::VectorXd& grad,
                     SparseMatrix& hess) const {
    grad.setZero(size_);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(size_) * 12);
    HessianBuilder h(trips);

    // C5: g = V^2 - |p_n - p_{n-1}|^2
    for (int n = 1; n <= n_slots_; ++n) {
      const int ib = n <= n_slots_ - 1 ? 2 * (n - 1) : -1;
      const int ia = n - 1 >= 1 ? 2 * (n - 2) : -1;
      if (ia < 0 && ib < 0) continue;
      const Point d = point(z, n) - point(z, n - 1);
      const double g = v2_ - d.squaredNorm();
      const std::array<int, 4> idx{ib, ib < 0 ? -1 : ib + 1, ia, ia < 0 ? -1 : ia + 1};
      const std::array<double, 4> dg{-2 * d.x(), -2 * d.y(), 2 * d.x(), 2 * d.y()};
      for (int i = 0; i < 4; ++i) {
        if (idx[i] >= 0) grad(idx[i]) -= mu * dg[i] / g;
      }
      h.outer(idx, dg, mu / (g * g));
      const double c = 2.0 * mu / g;
      for (int i = 0; i < 2; ++i) {
        h.add(idx[i], idx[i], c);
        h.add(idx[2 + i], idx[2 + i], c);
        h.add(idx[i], idx[2 + i], -c);
        h.add(idx[2 + i], idx[i], -c);
      }
    }

    for (const RateTerm& r : rates_) {
      const int n = r.slot + 1;
      const int ip = n <= n_slots_ - 1 ? 2 * (n - 1) : -1;
      const double t = z(r.t_idx);

      // C6: g = t - |p_n - q|^2 - H^2
      const Point d = point(z, n) - r.q;
      const double g = t - d.squaredNorm() - h2_;
      const std::array<int, 3> idx{r.t_idx, ip, ip < 0 ? -1 : ip + 1};
      const std::array<double, 3> dg{1.0, -2 * d.x(), -2 * d.y()};
      for (int i = 0; i < 3; ++i) {
        if (idx[i] >= 0) grad(idx[i]) -= mu * dg[i] / g;
      }
      h.outer(idx, dg, mu / (g * g));
      h.add(ip, ip, 2.0 * mu / g);
      if (ip >= 0) h.add(ip + 1, ip + 1, 2.0 * mu / g);

      // Rate lower bound and its derivatives in t.
      const double d1 = r.count * rate_lower_d1(r, t);
      const double d2 = r.count * rate_lower_d2(t);
      grad(r.t_idx) -= rate_weight_ * d1;
      h.add(r.t_idx, r.t_idx, -rate_weight_ * d2);

      if (clipped_) {
        const double u = z(r.u_idx);
        grad(r.u_idx) += lambda_ - mu / u;
        h.add(r.u_idx, r.u_idx, mu / (u * u));
        const double g1 = u + r.count * rate_lower(r, t) - r.r_min;
        const std::array<int, 2> i1{r.u_idx, r.t_idx};
        const std::array<double, 2> dg1{1.0, d1};
        grad(r.u_idx) -= mu / g1;
        grad(r.t_idx) -= mu * d1 / g1;
        h.outer(i1, dg1, mu / (g1 * g1));
        h.add(r.t_idx, r.t_idx, -mu * d2 / g1);
      }
    }

    for (const NfzTerm& f : nfz_) {
      const int ip = 2 * (f.n - 1);
      if (clipped_) {
        const double v = z(f.v_idx);
        grad(f.v_idx) += eta_ - mu / v;
        h.add(f.v_idx, f.v_idx, mu / (v * v));
        const double g = v + nfz_linear(f, point(z, f.n)) - f.qsq;
        const std::array<int, 3> idx{f.v_idx, ip, ip + 1};
        const std::array<double, 3> dg{1.0, 2 * f.ex, 2 * f.ey};
        for (int i = 0; i < 3; ++i) grad(idx[i]) -= mu * dg[i] / g;
        h.outer(idx, dg, mu / (g * g));
      } else {
        grad(ip) -= eta_ * 2.0 * f.ex;
        grad(ip + 1) -= eta_ * 2.0 * f.ey;
      }
    }

    hess.resize(size_, size_);
    hess.setFromTriplets(trips.begin(), trips.end());
  }

 private:
  Point point(const Eigen::VectorXd& z, int n) const {
    if (n == 0) return scenario_.uav().start;
    if (n == n_slots_) return scenario_.uav().finish;
    return Point(z(2 * (n - 1)), z(2 * (n - 1) + 1));
  }

  // log2(t + snr) - log2 t0 - (t - t0) / (t0 ln 2)
  double rate_lower(const RateTerm& r, double t) const {
    return detail::log2_of(t + snr_) - r.log2_t0 - (t - r.t0) / (r.t0 * kLn2<double>);
  }
  double rate_lower_d1(const RateTerm& r, double t) const {
    return 1.0 / ((t + snr_) * kLn2<double>) - 1.0 / (r.t0 * kLn2<double>);
  }
  double rate_lower_d2(double t) const {
    return -1.0 / ((t + snr_) * (t + snr_) * kLn2<double>);
  }

  static double nfz_linear(const NfzTerm& f, const Point& p) {
    return f.d0sq + 2.0 * (f.ex * (p.x() - f.anchor.x()) + f.ey * (p.y() - f.anchor.y()));
  }

  const Scenario& scenario_;
  const TrajectoryVars& anchor_;
  bool clipped_;
  double lambda_;
  double eta_;
  int n_slots_;
  double snr_;
  double v2_;
  double h2_;
  double rate_weight_ = 1.0;
  int n_pos_ = 0;
  int size_ = 0;
  int n_barriers_ = 0;
  std::vector<RateTerm> rates_;
  std::vector<NfzTerm> nfz_;
};

}  // namespace

const char* to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::kConverged:
      return "converged";
    case InnerStatus::kMaxIters:
      return "max-iters";
    case InnerStatus::kInfeasibleInput:
      return "infeasible-input";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (max_iters <= 0) throw std::invalid_argument("solver max_iters must be positive");
  if (!(kkt_tol > 0.0)) throw std::invalid_argument("solver kkt_tol must be positive");
  if (!(obj_tol > 0.0)) throw std::invalid_argument("solver obj_tol must be positive");
  if (!(barrier_mu > 0.0 && barrier_mu < 1.0)) {
    throw std::invalid_argument("solver barrier_mu must lie in (0, 1)");
  }
  if (!(initial_mu > 0.0)) throw std::invalid_argument("solver initial_mu must be positive");
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0)) {
    throw std::invalid_argument("line-search shrink factor must lie in (0, 1)");
  }
  if (!(line_search.sufficient_decrease > 0.0 && line_search.sufficient_decrease < 0.5)) {
    throw std::invalid_argument("line-search sufficient decrease must lie in (0, 0.5)");
  }
}

double constraint_residual(const TrajectoryVars& vars, const Scenario& scenario) {
  const double v2 = scenario.grid().max_step * scenario.grid().max_step;
  double worst = 0.0;
  for (int n = 1; n < vars.points.rows(); ++n) {
    worst = std::max(worst, (vars.points.row(n) - vars.points.row(n - 1)).squaredNorm() - v2);
  }
  for (int s = 0; s < vars.slack.rows(); ++s) {
    const Point p = vars.points.row(s + 1).transpose();
    for (int k = 0; k < vars.slack.cols(); ++k) {
      const double d2 = squared_distance(p, scenario.users()[k], scenario.uav().altitude);
      worst = std::max(worst, d2 - vars.slack(s, k));
    }
  }
  return worst;
}

TrajectoryVars initial_interior_point(const Scenario& scenario) {
  const int n_slots = scenario.num_slots();
  const Point start = scenario.uav().start;
  const Point finish = scenario.uav().finish;
  if ((finish - start).norm() / n_slots >= scenario.grid().max_step) {
    throw ScenarioValidationError(
        "uav.finish", "endpoints are exactly N*V apart; no strictly feasible trajectory exists");
  }
  Trajectory points(n_slots + 1, 2);
  for (int n = 0; n <= n_slots; ++n) {
    points.row(n) = (start + (finish - start) * (static_cast<double>(n) / n_slots)).transpose();
  }
  points.row(0) = start.transpose();
  points.row(n_slots) = finish.transpose();
  TrajectoryVars vars = tight_vars(scenario, points);
  vars.slack *= 1.0 + 1e-3;
  return vars;
}

TrajectoryVars make_strictly_interior(TrajectoryVars vars, const Scenario& scenario) {
  const int n_slots = scenario.num_slots();
  const double v2 = scenario.grid().max_step * scenario.grid().max_step;
  auto max_step2 = [&](const Trajectory& p) {
    double worst = 0.0;
    for (int n = 1; n <= n_slots; ++n) worst = std::max(worst, (p.row(n) - p.row(n - 1)).squaredNorm());
    return worst;
  };
  const double margin = v2 * (1.0 - 1e-9);
  if (max_step2(vars.points) >= margin) {
    const Trajectory chord = initial_interior_point(scenario).points;
    const Trajectory original = vars.points;
    for (double theta = 1e-9; theta <= 1.0; theta *= 4.0) {
      vars.points = (1.0 - theta) * original + theta * chord;
      if (max_step2(vars.points) < margin) break;
    }
    if (max_step2(vars.points) >= margin) vars.points = chord;
    vars.points.row(0) = scenario.uav().start.transpose();
    vars.points.row(n_slots) = scenario.uav().finish.transpose();
  }
  for (int s = 0; s < n_slots; ++s) {
    const Point p = vars.points.row(s + 1).transpose();
    for (int k = 0; k < scenario.num_users(); ++k) {
      const double d2 = squared_distance(p, scenario.users()[k], scenario.uav().altitude);
      vars.slack(s, k) = std::max(vars.slack(s, k), d2 * (1.0 + 1e-8));
    }
  }
  return vars;
}

InnerSolution solve_surrogate(const TrajectoryVars& anchor, const AllocationPlan& plan,
                              const Scenario& scenario, const PenaltyConfig& penalties,
                              const SolverOptions& opts) {
  opts.validate();
  detail::check_dims(anchor, plan, scenario);

  InnerSolution out;
  out.vars = anchor;
  out.residual = constraint_residual(anchor, scenario);
  const double anchor_value = surrogate_objective(anchor, anchor, plan, scenario, penalties);
  out.objective = anchor_value;
  if (out.residual > kFeasibilityTol) {
    out.status = InnerStatus::kInfeasibleInput;
    return out;
  }

  const BarrierProblem problem(anchor, plan, scenario, penalties);
  Eigen::VectorXd z = problem.pack(make_strictly_interior(anchor, scenario));
  Eigen::VectorXd grad;
  SparseMatrix hess;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool pattern_ready = false;
  const double shrink = opts.line_search.shrink;
  const double armijo = opts.line_search.sufficient_decrease;

  bool hit_cap = false;
  // Start where the duality gap m * mu matches the objective scale; a small
  // mu on a large penalised objective stalls in the damped Newton phase.
  double mu = std::max(opts.initial_mu, std::abs(anchor_value) / problem.num_barriers());
  while (true) {
    double value = problem.merit(z, mu);
    int steps = 0;
    for (; steps < opts.max_iters; ++steps) {
      problem.newton_system(z, mu, grad, hess);
      if (!pattern_ready) {
        ldlt.analyzePattern(hess);
        pattern_ready = true;
      }
      ldlt.factorize(hess);
      if (ldlt.info() != Eigen::Success) break;
      const Eigen::VectorXd step = ldlt.solve(-grad);
      const double slope = grad.dot(step);
      if (-slope / 2.0 <= kCenteringTol) break;

      double alpha = 1.0;
      double trial = problem.merit(z + alpha * step, mu);
      while (!std::isfinite(trial) && alpha > 1e-16) {
        alpha *= shrink;
        trial = problem.merit(z + alpha * step, mu);
      }
      const double slack = 1e-14 * std::max(1.0, std::abs(value));
      while (trial > value + armijo * alpha * slope + slack && alpha > 1e-16) {
        alpha *= shrink;
        trial = problem.merit(z + alpha * step, mu);
      }
      if (!std::isfinite(trial) || alpha <= 1e-16) break;
      z += alpha * step;
      value = trial;
      ++out.iterations;
    }
    if (steps == opts.max_iters) hit_cap = true;
    if (problem.num_barriers() * mu < opts.kkt_tol) break;
    mu *= opts.barrier_mu;
  }

  TrajectoryVars candidate = problem.unpack(z);
  const double value = surrogate_objective(candidate, anchor, plan, scenario, penalties);
  const double gain = value - anchor_value;
  out.status = hit_cap ? InnerStatus::kMaxIters : InnerStatus::kConverged;
  if (gain < opts.obj_tol * std::max(1.0, std::abs(anchor_value))) {
    // No meaningful ascent: the anchor is (numerically) optimal.
    return out;
  }
  out.vars = std::move(candidate);
  out.objective = value;
  out.residual = constraint_residual(out.vars, scenario);
  return out;
}

}  // namespace uavplan
