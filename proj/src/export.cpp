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

#include "uavplan/export.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "uavplan/dc_objective.hpp"

namespace uavplan {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double parse_cell(const std::string& cell, int line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw std::runtime_error("trajectory csv line " + std::to_string(line_no) +
                             ": not a number '" + cell + "'");
  }
  return value;
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Scenario& scenario) {
  out << "n,time_s,x_m,y_m,step_m,min_nfz_clearance_m\n";
  for (int n = 0; n < traj.rows(); ++n) {
    const Point p = traj.row(n).transpose();
    const double step = n == 0 ? 0.0 : (traj.row(n) - traj.row(n - 1)).norm();
    double clearance = std::numeric_limits<double>::infinity();
    for (const NoFlyZone& z : scenario.nfzs()) {
      clearance = std::min(clearance, (p - z.center).norm() - z.radius);
    }
    out << n << ',' << format_number(n * scenario.grid().dt) << ',' << format_number(p.x())
        << ',' << format_number(p.y()) << ',' << format_number(step) << ','
        << format_number(clearance) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory csv is empty");
  const std::vector<std::string> header = split_csv(line);
  int col_x = -1;
  int col_y = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x_m") col_x = static_cast<int>(i);
    if (header[i] == "y_m") col_y = static_cast<int>(i);
  }
  if (col_x < 0 || col_y < 0) throw std::runtime_error("trajectory csv lacks x_m / y_m columns");

  std::vector<Point> pts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv(line);
    if (static_cast<int>(cells.size()) <= std::max(col_x, col_y)) {
      throw std::runtime_error("trajectory csv line " + std::to_string(line_no) + " is truncated");
    }
    pts.emplace_back(parse_cell(cells[col_x], line_no), parse_cell(cells[col_y], line_no));
  }
  if (pts.size() < 2) throw std::runtime_error("trajectory csv needs at least two points");
  Trajectory traj(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) traj.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return traj;
}

nlohmann::json constraints_to_json(const ConstraintVerdict& v) {
  return {{"qos_ok", v.qos_ok},
          {"qos_residual_bpshz", finite_or_null(v.qos_residual)},
          {"qos_slot", v.qos_slot},
          {"qos_user", v.qos_user},
          {"capacity_ok", v.capacity_ok},
          {"nfz_ok", v.nfz_ok},
          {"nfz_residual_m2", finite_or_null(v.nfz_residual)},
          {"nfz_slot", v.nfz_slot},
          {"nfz_zone", v.nfz_zone},
          {"min_nfz_clearance_m", finite_or_null(v.min_nfz_clearance)},
          {"speed_ok", v.speed_ok},
          {"speed_residual_m", finite_or_null(v.speed_residual)},
          {"speed_slot", v.speed_slot},
          {"endpoints_ok", v.endpoints_ok},
          {"all_ok", v.all_ok()}};
}

nlohmann::json report_to_json(const SolveReport& report, const Scenario& scenario,
                              const PlannerOptions& options) {
  nlohmann::json sca = nlohmann::json::array();
  for (const auto& run : report.sca_traces) {
    nlohmann::json steps = nlohmann::json::array();
    for (const ScaStep& s : run) {
      steps.push_back({{"surrogate", s.surrogate},
                       {"true_objective", s.true_objective},
                       {"max_change", s.max_change},
                       {"inner_iterations", s.inner_iterations},
                       {"inner_status", to_string(s.inner_status)}});
    }
    sca.push_back(std::move(steps));
  }
  return {{"status", to_string(report.status)},
          {"message", report.message},
          {"final_throughput_bpshz", report.final_throughput},
          {"iterations_outer", report.iterations_outer},
          {"infeasible_slot", report.infeasible_slot},
          {"objective_trace", report.objective_trace},
          {"sca_traces", std::move(sca)},
          {"constraints", constraints_to_json(report.constraints)},
          {"power_dbm", scenario.power_dbm()},
          {"penalties",
           {{"lambda", options.penalties.lambda},
            {"eta", options.penalties.eta},
            {"form", to_string(options.penalties.form)}}},
          {"solver",
           {{"max_iters", options.solver.max_iters},
            {"kkt_tol", options.solver.kkt_tol},
            {"obj_tol", options.solver.obj_tol},
            {"barrier_mu", options.solver.barrier_mu},
            {"l_max_sca", options.l_max_sca},
            {"l_max_outer", options.l_max_outer}}}};
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "power_dbm,strategy,throughput_bpshz,feasible\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.power_dbm) << ',' << r.strategy << ',' << format_number(r.throughput)
        << ',' << (r.feasible ? 1 : 0) << '\n';
  }
}

}  // namespace uavplan
