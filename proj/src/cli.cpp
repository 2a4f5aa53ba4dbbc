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

#include "uavplan/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "uavplan/benchmarks.hpp"
#include "uavplan/export.hpp"

namespace uavplan {
namespace {

namespace fs = std::filesystem;

Scenario load_with_power(const RunManifest& m) {
  Scenario s = load_scenario(m.scenario_path);
  if (!m.power_dbm.empty()) s = s.with_power_dbm(m.power_dbm.front());
  return s;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

void write_report_files(const fs::path& dir, const SolveReport& report, const Scenario& scenario,
                        const PlannerOptions& options, std::uint64_t seed) {
  {
    std::ofstream out = open_output(dir / "trajectory.csv");
    write_trajectory_csv(out, report.trajectory, scenario);
  }
  {
    std::ofstream out = open_output(dir / "allocation.csv");
    write_allocation_csv(out, report.plan, report.rates, scenario);
  }
  nlohmann::json doc = report_to_json(report, scenario, options);
  doc["seed"] = seed;
  std::ofstream out = open_output(dir / "report.json");
  out << doc.dump(2) << '\n';
}

void print_verdict(std::ostream& out, const ConstraintVerdict& v) {
  out << "qos       " << (v.qos_ok ? "ok  " : "FAIL") << "  residual "
      << format_number(v.qos_residual) << " bps/Hz";
  if (!v.qos_ok) out << "  slot " << v.qos_slot << " user " << v.qos_user;
  out << '\n';
  out << "capacity  " << (v.capacity_ok ? "ok  " : "FAIL") << '\n';
  out << "nfz       " << (v.nfz_ok ? "ok  " : "FAIL") << "  residual "
      << format_number(v.nfz_residual) << " m^2";
  if (!v.nfz_ok) out << "  slot " << v.nfz_slot << " zone " << v.nfz_zone;
  out << '\n';
  out << "speed     " << (v.speed_ok ? "ok  " : "FAIL") << "  residual "
      << format_number(v.speed_residual) << " m";
  if (!v.speed_ok) out << "  slot " << v.speed_slot;
  out << '\n';
  out << "endpoints " << (v.endpoints_ok ? "ok" : "FAIL") << '\n';
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ScenarioValidationError& e) {
    std::cerr << "error: invalid scenario (" << e.field() << "): " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace

unsigned sweep_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("UAV_PLANNER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

int cmd_solve(const RunManifest& m) {
  return guarded([&] {
    m.options.validate();
    const Scenario scenario = load_with_power(m);
    ensure_dir(m.output_dir);
    const SolveReport report = run_strategy(scenario, parse_strategy(m.strategy), m.options);
    write_report_files(m.output_dir, report, scenario, m.options, m.seed);
    std::cout << "status " << to_string(report.status) << "  throughput "
              << format_number(report.final_throughput) << " bps/Hz  outer "
              << report.iterations_outer << '\n';
    if (!report.feasible()) {
      std::cerr << "infeasible: " << report.message << '\n';
      return static_cast<int>(kExitInfeasible);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const RunManifest& m) {
  return guarded([&] {
    m.options.validate();
    if (m.power_dbm.empty()) throw std::runtime_error("sweep needs at least one --power-dbm value");
    const Scenario base = load_scenario(m.scenario_path);
    ensure_dir(m.output_dir);

    struct Job {
      double power;
      Strategy strategy;
    };
    std::vector<Job> jobs;
    for (double p : m.power_dbm) {
      for (Strategy s : kAllStrategies) jobs.push_back({p, s});
    }
    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        const Scenario s = base.with_power_dbm(jobs[i].power);
        const SolveReport r = run_strategy(s, jobs[i].strategy, m.options);
        rows[i] = {jobs[i].power, to_string(jobs[i].strategy), r.feasible() ? r.final_throughput : 0.0,
                   r.feasible()};
      }
    };
    std::vector<std::thread> pool;
    const unsigned n = sweep_threads(jobs.size());
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    // Rows keep the strategy order within a power level.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.power_dbm < b.power_dbm; });
    std::ofstream out = open_output(m.output_dir / "sweep.csv");
    write_sweep_csv(out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << (m.output_dir / "sweep.csv").string()
              << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_benchmark(const RunManifest& m) {
  return guarded([&] {
    m.options.validate();
    const Scenario scenario = load_with_power(m);
    ensure_dir(m.output_dir);
    std::vector<SweepRow> rows;
    for (Strategy s : kAllStrategies) {
      const SolveReport r = run_strategy(scenario, s, m.options);
      const fs::path dir = m.output_dir / to_string(s);
      ensure_dir(dir);
      write_report_files(dir, r, scenario, m.options, m.seed);
      rows.push_back({scenario.power_dbm(), to_string(s), r.feasible() ? r.final_throughput : 0.0,
                      r.feasible()});
      std::cout << to_string(s) << "  " << to_string(r.status) << "  "
                << format_number(r.final_throughput) << " bps/Hz\n";
    }
    std::ofstream out = open_output(m.output_dir / "benchmark.csv");
    write_sweep_csv(out, rows);
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const RunManifest& m) {
  return guarded([&] {
    const Scenario scenario = load_with_power(m);
    std::ifstream in(m.trajectory_path);
    if (!in) throw std::runtime_error("cannot read " + m.trajectory_path.string());
    const Trajectory traj = read_trajectory_csv(in);
    const int expected = scenario.grid().n_slots + 1;
    if (traj.rows() != expected) {
      throw std::runtime_error("trajectory has " + std::to_string(traj.rows()) +
                               " points, scenario grid needs " + std::to_string(expected));
    }
    const RateTable rates = build_rate_table(scenario, traj);
    const AllocationResult alloc = allocate_all(rates, scenario);
    const AllocationPlan plan = alloc.plan ? *alloc.plan : allocate_best_effort(rates, scenario);
    const ConstraintVerdict verdict = validate_hard_constraints(traj, plan, scenario);
    print_verdict(std::cout, verdict);
    return static_cast<int>(verdict.all_ok() ? kExitOk : kExitViolation);
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"UAV trajectory and OFDMA subcarrier planner"};
  app.require_subcommand(1);
  RunManifest m;
  std::string penalty_form = to_string(m.options.penalties.form);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", m.scenario_path, "scenario JSON file")->required();
    sub->add_option("--out", m.output_dir, "output directory");
    sub->add_option("--power-dbm", m.power_dbm, "transmit power per subcarrier (dBm)")
        ->delimiter(',');
    sub->add_option("--lambda", m.options.penalties.lambda, "QoS penalty weight");
    sub->add_option("--eta", m.options.penalties.eta, "no-fly-zone penalty weight");
    sub->add_option("--penalty-form", penalty_form, "clipped | linear");
    sub->add_option("--lmax-sca", m.options.l_max_sca, "SCA iterations per trajectory step");
    sub->add_option("--lmax-outer", m.options.l_max_outer, "alternating iterations");
    sub->add_option("--tol", m.options.sca_tol, "relative objective tolerance");
    sub->add_option("--seed", m.seed, "seed recorded in report.json");
    sub->add_option("--strategy", m.strategy, "proposed | no_nfz | detour | straight");
  };

  CLI::App* solve = app.add_subcommand("solve", "optimise one scenario");
  CLI::App* sweep = app.add_subcommand("sweep", "throughput versus power for every strategy");
  CLI::App* bench = app.add_subcommand("benchmark", "run every strategy at one power level");
  CLI::App* validate = app.add_subcommand("validate", "check a trajectory CSV");
  for (CLI::App* sub : {solve, sweep, bench, validate}) add_common(sub);
  validate->add_option("--trajectory", m.trajectory_path, "trajectory CSV")->required();

  try {
    app.parse(argc, argv);
    m.options.penalties.form = parse_penalty_form(penalty_form);
    m.options.outer_tol = m.options.sca_tol;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(kExitError);
  }

  if (solve->parsed()) {
    m.command = "solve";
    return cmd_solve(m);
  }
  if (sweep->parsed()) {
    m.command = "sweep";
    return cmd_sweep(m);
  }
  if (bench->parsed()) {
    m.command = "benchmark";
    return cmd_benchmark(m);
  }
  m.command = "validate";
  return cmd_validate(m);
}

}  // namespace uavplan
