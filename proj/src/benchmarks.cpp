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

#include "uavplan/benchmarks.hpp"

#include <cmath>

namespace uavplan {
namespace {

constexpr double kTangentInflation = 1e-2;
constexpr int kMaxDetourPasses = 16;

Point rotate(const Point& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Point(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Point& a, const Point& b, const Point& c) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (c - a).norm();
  const double u = std::clamp((c - a).dot(ab) / len2, 0.0, 1.0);
  return (a + u * ab - c).norm();
}

// Corner where the tangent from `a` meets the tangent from `b`, both passing
// the disk on the `side` (+1 left of a->b, -1 right).
Point tangent_corner(const Point& a, const Point& b, const Point& center, double radius,
                     int side) {
  const Point to_a = center - a;
  const Point to_b = center - b;
  const double la = to_a.norm();
  const double lb = to_b.norm();
  if (la <= radius || lb <= radius) {
    throw DetourError("detour endpoint lies inside an inflated no-fly zone");
  }
  // Passing the disk on the left of travel means the disk sits on the right,
  // so the outgoing ray turns counter-clockwise away from the centre.
  const Point da = rotate(to_a / la, side * std::asin(radius / la));
  const Point db = rotate(to_b / lb, -side * std::asin(radius / lb));
  const double denom = cross(da, db);
  if (std::abs(denom) < 1e-12) throw DetourError("tangent lines are parallel");
  const double s = cross(b - a, db) / denom;
  if (!(s > 0.0)) throw DetourError("tangent lines do not meet ahead of the start");
  return a + s * da;
}

double polyline_length(const std::vector<Point>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

Trajectory resample(const std::vector<Point>& pts, int n_slots) {
  const double total = polyline_length(pts);
  Trajectory out(n_slots + 1, 2);
  std::size_t seg = 1;
  double walked = 0.0;
  for (int n = 0; n <= n_slots; ++n) {
    const double target = total * n / n_slots;
    while (seg + 1 < pts.size() && walked + (pts[seg] - pts[seg - 1]).norm() < target) {
      walked += (pts[seg] - pts[seg - 1]).norm();
      ++seg;
    }
    const double len = (pts[seg] - pts[seg - 1]).norm();
    const double u = len > 0.0 ? std::clamp((target - walked) / len, 0.0, 1.0) : 0.0;
    out.row(n) = (pts[seg - 1] + u * (pts[seg] - pts[seg - 1])).transpose();
  }
  out.row(0) = pts.front().transpose();
  out.row(n_slots) = pts.back().transpose();
  return out;
}

}  // namespace

Trajectory straight_trajectory(const Scenario& scenario) {
  const int n_slots = scenario.num_slots();
  const Point start = scenario.uav().start;
  const Point finish = scenario.uav().finish;
  Trajectory out(n_slots + 1, 2);
  for (int n = 0; n <= n_slots; ++n) {
    out.row(n) = (start + (finish - start) * (static_cast<double>(n) / n_slots)).transpose();
  }
  out.row(0) = start.transpose();
  out.row(n_slots) = finish.transpose();
  return out;
}

std::vector<Point> detour_waypoints(const Scenario& scenario) {
  std::vector<Point> path{scenario.uav().start, scenario.uav().finish};
  for (int pass = 0; pass < kMaxDetourPasses; ++pass) {
    bool changed = false;
    for (std::size_t i = 1; i < path.size() && !changed; ++i) {
      const Point a = path[i - 1];
      const Point b = path[i];
      // First blocking zone along the segment.
      int hit = -1;
      double hit_along = 0.0;
      for (std::size_t j = 0; j < scenario.nfzs().size(); ++j) {
        const NoFlyZone& z = scenario.nfzs()[j];
        const double r = z.radius + kTangentInflation;
        if (segment_distance(a, b, z.center) >= r - 1e-9) continue;
        const double along = (z.center - a).dot(b - a);
        if (hit < 0 || along < hit_along) {
          hit = static_cast<int>(j);
          hit_along = along;
        }
      }
      if (hit < 0) continue;
      const NoFlyZone& z = scenario.nfzs()[hit];
      const double r = z.radius + kTangentInflation;
      const Point left = tangent_corner(a, b, z.center, r, +1);
      const Point right = tangent_corner(a, b, z.center, r, -1);
      const double len_left = (left - a).norm() + (b - left).norm();
      const double len_right = (right - a).norm() + (b - right).norm();
      const Point corner = len_right < len_left - 1e-9 ? right : left;
      path.insert(path.begin() + static_cast<std::ptrdiff_t>(i), corner);
      changed = true;
    }
    if (!changed) return path;
  }
  throw DetourError("no collision-free detour found");
}

Trajectory detour_tangent_trajectory(const Scenario& scenario) {
  const std::vector<Point> path = detour_waypoints(scenario);
  if (path.size() == 2) return straight_trajectory(scenario);
  const double reach = scenario.num_slots() * scenario.grid().max_step;
  if (polyline_length(path) > reach) {
    throw DetourError("unreachable detour: path length exceeds N * V");
  }
  return resample(path, scenario.num_slots());
}

Strategy parse_strategy(const std::string& name) {
  if (name == "proposed") return Strategy::kProposed;
  if (name == "no_nfz") return Strategy::kNoNfz;
  if (name == "detour") return Strategy::kDetour;
  if (name == "straight") return Strategy::kStraight;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected proposed|no_nfz|detour|straight)");
}

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kProposed:
      return "proposed";
    case Strategy::kNoNfz:
      return "no_nfz";
    case Strategy::kDetour:
      return "detour";
    case Strategy::kStraight:
      return "straight";
  }
  return "unknown";
}

SolveReport run_strategy(const Scenario& scenario, Strategy strategy,
                         const PlannerOptions& options) {
  switch (strategy) {
    case Strategy::kProposed:
      return alternating_optimize(scenario, options);
    case Strategy::kNoNfz:
      return no_nfz_plan(scenario, options);
    case Strategy::kDetour:
      try {
        return evaluate_fixed_trajectory(scenario, detour_tangent_trajectory(scenario),
                                         options.penalties);
      } catch (const DetourError& e) {
        SolveReport report;
        report.status = PlanStatus::kInfeasible;
        report.message = e.what();
        return report;
      }
    case Strategy::kStraight:
      return evaluate_fixed_trajectory(scenario, straight_trajectory(scenario),
                                       options.penalties);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace uavplan
