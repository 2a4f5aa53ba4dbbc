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

#include "uavplan/allocation.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace uavplan {
namespace {

constexpr double kRateTol = 1e-9;  // C1 slack, bps/Hz

double slot_throughput(const Eigen::VectorXi& counts, const Eigen::Ref<const Eigen::VectorXd>& rates) {
  return counts.cast<double>().dot(rates);
}

}  // namespace

int strongest_user(const Eigen::Ref<const Eigen::VectorXd>& rates) {
  if (rates.size() == 0) throw std::invalid_argument("strongest_user: no users");
  int best = 0;
  for (int k = 1; k < rates.size(); ++k) {
    if (rates(k) > rates(best)) best = k;
  }
  return best;
}

int min_subcarriers(double r_min, double rate) {
  int m = static_cast<int>(std::ceil(r_min / rate));
  while (m > 0 && (m - 1) * rate >= r_min - kRateTol) --m;
  return m;
}

std::optional<Eigen::VectorXi> allocate_slot(const Eigen::Ref<const Eigen::VectorXd>& rates,
                                             int n_subcarriers,
                                             const Eigen::Ref<const Eigen::VectorXd>& r_mins) {
  const int n_users = static_cast<int>(rates.size());
  const int best = strongest_user(rates);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_users);
  long used = 0;
  for (int k = 0; k < n_users; ++k) {
    if (k == best) continue;
    counts(k) = min_subcarriers(r_mins(k), rates(k));
    used += counts(k);
  }
  const long remainder = n_subcarriers - used;
  if (remainder < 0 || remainder < min_subcarriers(r_mins(best), rates(best))) {
    return std::nullopt;
  }
  counts(best) = static_cast<int>(remainder);
  return counts;
}

std::optional<Eigen::VectorXi> brute_force_slot_oracle(
    const Eigen::Ref<const Eigen::VectorXd>& rates, int n_subcarriers,
    const Eigen::Ref<const Eigen::VectorXd>& r_mins) {
  const int n_users = static_cast<int>(rates.size());
  std::optional<Eigen::VectorXi> best;
  double best_value = -1.0;
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_users);

  std::function<void(int, int)> enumerate = [&](int k, int left) {
    if (k == n_users) {
      for (int u = 0; u < n_users; ++u) {
        if (counts(u) * rates(u) < r_mins(u) - kRateTol) return;
      }
      const double value = slot_throughput(counts, rates);
      if (value > best_value) {
        best_value = value;
        best = counts;
      }
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts(k) = c;
      enumerate(k + 1, left - c);
    }
    counts(k) = 0;
  };
  enumerate(0, n_subcarriers);
  return best;
}

AllocationPlan make_plan(SlotUserCounts counts, const RateTable& rates, int n_subcarriers) {
  AllocationPlan plan;
  plan.assignment.assign(counts.rows(), std::vector<int>(n_subcarriers, -1));
  for (int s = 0; s < counts.rows(); ++s) {
    const int best = strongest_user(rates.row(s).transpose());
    int next = 0;
    auto fill = [&](int k) {
      for (int c = 0; c < counts(s, k) && next < n_subcarriers; ++c) {
        plan.assignment[s][next++] = k;
      }
    };
    for (int k = 0; k < counts.cols(); ++k) {
      if (k != best) fill(k);
    }
    fill(best);
  }
  plan.counts = std::move(counts);
  return plan;
}

Eigen::VectorXd user_min_rates(const Scenario& scenario) {
  Eigen::VectorXd r_mins(scenario.num_users());
  for (int k = 0; k < scenario.num_users(); ++k) r_mins(k) = scenario.users()[k].r_min;
  return r_mins;
}

AllocationResult allocate_all(const RateTable& rates, const Scenario& scenario) {
  const int n_subcarriers = scenario.channel().n_subcarriers;
  const Eigen::VectorXd r_mins = user_min_rates(scenario);
  SlotUserCounts counts(rates.rows(), rates.cols());
  for (int s = 0; s < rates.rows(); ++s) {
    auto slot = allocate_slot(rates.row(s).transpose(), n_subcarriers, r_mins);
    if (!slot) return AllocationResult{std::nullopt, s + 1};
    counts.row(s) = slot->transpose();
  }
  return AllocationResult{make_plan(std::move(counts), rates, n_subcarriers), -1};
}

AllocationPlan allocate_best_effort(const RateTable& rates, const Scenario& scenario) {
  const int n_subcarriers = scenario.channel().n_subcarriers;
  const int n_users = scenario.num_users();
  const Eigen::VectorXd r_mins = user_min_rates(scenario);
  SlotUserCounts counts(rates.rows(), n_users);
  for (int s = 0; s < rates.rows(); ++s) {
    const Eigen::VectorXd r = rates.row(s).transpose();
    if (auto slot = allocate_slot(r, n_subcarriers, r_mins)) {
      counts.row(s) = slot->transpose();
      continue;
    }
    Eigen::VectorXi c = Eigen::VectorXi::Zero(n_users);
    for (int left = n_subcarriers; left > 0; --left) {
      int pick = 0;
      double worst = -1.0;
      for (int k = 0; k < n_users; ++k) {
        const double shortfall = (r_mins(k) - c(k) * r(k)) / r_mins(k);
        if (shortfall > worst) {
          worst = shortfall;
          pick = k;
        }
      }
      if (worst <= 0.0) pick = strongest_user(r);
      ++c(pick);
    }
    counts.row(s) = c.transpose();
  }
  return make_plan(std::move(counts), rates, n_subcarriers);
}

double plan_throughput(const AllocationPlan& plan, const RateTable& rates) {
  if (plan.counts.rows() != rates.rows() || plan.counts.cols() != rates.cols()) {
    throw std::invalid_argument("plan_throughput: dimension mismatch");
  }
  return (plan.counts.cast<double>().array() * rates.array()).sum();
}

void write_allocation_csv(std::ostream& out, const AllocationPlan& plan, const RateTable& rates,
                          const Scenario& scenario) {
  out << "slot,user,count,rate,user_rate_total\n";
  char line[160];
  for (int s = 0; s < plan.counts.rows(); ++s) {
    for (int k = 0; k < plan.counts.cols(); ++k) {
      const int c = plan.counts(s, k);
      std::snprintf(line, sizeof line, "%d,%d,%d,%.9g,%.9g\n", s + 1, scenario.users()[k].id, c,
                    rates(s, k), c * rates(s, k));
      out << line;
    }
  }
}

}  // namespace uavplan
