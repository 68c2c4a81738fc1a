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


#ifndef STEER_BENCHMARK_H_
#define STEER_BENCHMARK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steer/config.h"

namespace steer {

struct SuiteEntry {
  std::string task;  // preset name or task file
  ControllerMode mode = ControllerMode::kHierarchical;
  int trials = 20;
  uint64_t base_seed = 0;
  nlohmann::json overrides = nlohmann::json::object();  // merge patch
};

// Trial i of an entry runs with seed base_seed + i.
struct BenchmarkSuite {
  std::string name = "suite";
  std::string base_dir;  // task files resolve relative to this
  std::vector<SuiteEntry> entries;
};

BenchmarkSuite ParseSuite(const nlohmann::json& j, const std::string& source,
                          const std::string& text = "",
                          const std::string& base_dir = "");
BenchmarkSuite LoadSuiteFile(const std::string& path);

// task config of an entry with its overrides applied
TaskConfig ResolveEntry(const SuiteEntry& entry, const std::string& base_dir);

struct TrialRecord {
  std::string task;
  ControllerMode mode = ControllerMode::kHierarchical;
  uint64_t seed = 0;
  Outcome outcome = Outcome::kRunning;
  double completion_time = 0.0;
  int steps = 0;
  int replans = 0;
  int batches = 0;
  double batch_ms_mean = 0.0;
  double batch_ms_std = 0.0;
};

// One aggregated row. Completion statistics cover successful trials only
// and are NaN when there are none; std uses the n - 1 denominator.
struct ResultRow {
  std::string task;
  std::string mode;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double time_mean = 0.0;
  double time_std = 0.0;
  double time_limit = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

// order-independent aggregate of one entry's trials
ResultRow Aggregate(const std::string& task, ControllerMode mode,
                    double time_limit, const std::vector<TrialRecord>& trials);

struct BenchmarkOptions {
  int workers = 1;  // episodes run in parallel
  std::optional<ControllerMode> mode;  // overrides every entry
  std::optional<uint64_t> seed;        // overrides every base seed
  std::string out_dir;                 // empty: write nothing
  bool write_logs = true;
};

struct BenchmarkReport {
  ResultTable table;
  std::vector<TrialRecord> trials;
};

// Runs every trial. Episode failures count as non-successes; only config
// errors abort. Writes results.csv, results.json, timing.json and
// logs/*.jsonl under out_dir when set.
BenchmarkReport RunBenchmark(const BenchmarkSuite& suite,
                             const BenchmarkOptions& options);

// Header plus one line per row. Numbers use the shortest decimal form that
// parses back to the same double.
std::string FormatCsv(const ResultTable& table);
ResultTable ParseCsv(const std::string& csv);

std::string FormatDouble(double x);
double ParseDouble(const std::string& s);

nlohmann::json TableJson(const BenchmarkReport& report);
// per-entry rollout batch timing (mean, std, count)
nlohmann::json TimingJson(const BenchmarkReport& report);

}  // namespace steer

#endif  // STEER_BENCHMARK_H_
