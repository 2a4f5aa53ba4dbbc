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

#ifndef UAVPLAN_CLI_HPP_
#define UAVPLAN_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/planner.hpp"

namespace uavplan {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,       // I/O, parse or validation error
  kExitInfeasible = 2,  // solve found no feasible plan
  kExitViolation = 3,   // validate found a hard-constraint failure
};

struct RunManifest {
  std::string command;  // solve | sweep | benchmark | validate
  std::filesystem::path scenario_path;
  std::filesystem::path output_dir = ".";
  std::filesystem::path trajectory_path;  // validate only
  std::uint64_t seed = 0;
  std::string strategy = "proposed";
  std::vector<double> power_dbm;  // solve uses the first entry as an override
  PlannerOptions options;
};

int cmd_solve(const RunManifest& manifest);
int cmd_sweep(const RunManifest& manifest);
int cmd_benchmark(const RunManifest& manifest);
int cmd_validate(const RunManifest& manifest);

// Worker count for sweeps: UAV_PLANNER_THREADS if set and positive, else the
// hardware concurrency, never more than `jobs`.
unsigned sweep_threads(std::size_t jobs);

int run_cli(int argc, char** argv);

}  // namespace uavplan

#endif  // UAVPLAN_CLI_HPP_
