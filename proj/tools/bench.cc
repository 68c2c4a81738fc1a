// Copyright 2026 The steermpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// bench: benchmark suites, weight tuning and cost listings.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "steer/benchmark.h"
#include "steer/config.h"
#include "steer/task_library.h"
#include "steer/tuning.h"

namespace {

int Run(const std::string& suite_path, const std::string& out, int workers,
        const std::string& mode, int64_t seed, bool logs) {
  const steer::BenchmarkSuite suite = steer::LoadSuiteFile(suite_path);
  steer::BenchmarkOptions options;
  options.workers = workers;
  options.out_dir = out;
  options.write_logs = logs;
  if (!mode.empty()) options.mode = steer::ParseMode(mode);
  if (seed >= 0) options.seed = static_cast<uint64_t>(seed);
  const steer::BenchmarkReport report = steer::RunBenchmark(suite, options);
  std::cout << steer::FormatCsv(report.table);
  return 0;
}

int Tune(const std::string& task_name, int budget, int trials, uint64_t seed,
         uint64_t trial_seed, int workers, const std::string& out) {
  const steer::TaskConfig task = steer::ResolveTask(task_name);
  steer::TuneOptions options;
  options.budget = budget;
  options.trials = trials;
  options.seed = seed;
  options.trial_seed = trial_seed;
  options.workers = workers;
  const steer::TuneResult result = steer::TuneWeights(task, options);
  const std::string csv = steer::FormatTuneCsv(result);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    const auto parent = std::filesystem::path(out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw steer::ConfigError(out + ": cannot write file");
    file << csv;
  }
  std::cerr << "best success " << result.best_success << " with";
  for (const auto& [name, value] : result.best) {
    std::cerr << " " << name << "=" << value;
  }
  std::cerr << "\n";
  return 0;
}

int PrintTask(const std::string& id) {
  std::cout << steer::DescribeTaskCost(steer::AssembleTaskCost(id, {}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampling-based MPC benchmark harness"};
  app.require_subcommand(1);

  std::string suite_path, out_dir, mode;
  int workers = 1;
  int64_t seed = -1;
  bool no_logs = false;
  CLI::App* run = app.add_subcommand("run", "run a benchmark suite");
  run->add_option("--suite", suite_path, "suite file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--workers", workers, "episodes in parallel")
      ->check(CLI::PositiveNumber);
  run->add_option("--mode", mode, "override controller mode")
      ->check(CLI::IsMember({"hier", "hierarchical", "flat"}));
  run->add_option("--seed", seed, "override every base seed")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--no-logs", no_logs, "skip per-episode JSONL logs");

  std::string task, tune_out;
  int budget = 20, trials = 10, tune_workers = 1;
  uint64_t tune_seed = 0, trial_seed = 0;
  CLI::App* tune = app.add_subcommand("tune", "random-search weight tuning");
  tune->add_option("--task", task, "preset name or task file")->required();
  tune->add_option("--budget", budget, "candidates")->check(CLI::PositiveNumber);
  tune->add_option("--trials", trials, "episodes per candidate")
      ->check(CLI::PositiveNumber);
  tune->add_option("--seed", tune_seed, "candidate stream seed");
  tune->add_option("--trial-seed", trial_seed, "first episode seed");
  tune->add_option("--workers", tune_workers, "episodes in parallel")
      ->check(CLI::PositiveNumber);
  tune->add_option("--out", tune_out, "curve CSV (stdout when omitted)");

  std::string task_id;
  CLI::App* print = app.add_subcommand("print-task", "list a task's cost terms");
  print->add_option("id", task_id, "task id")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) {
      return Run(suite_path, out_dir, workers, mode, seed, !no_logs);
    }
    if (tune->parsed()) {
      return Tune(task, budget, trials, tune_seed, trial_seed, tune_workers,
                  tune_out);
    }
    return PrintTask(task_id);
  } catch (const steer::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
