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


#include "steer/benchmark.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "steer/thread_pool.h"

namespace steer {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void SuiteError(const std::string& source, const std::string& text,
                             const std::string& key, const std::string& msg) {
  std::string where = source;
  const int line = LineOfKey(text, key);
  if (line > 0) where += ":" + std::to_string(line);
  throw ConfigError(where + ": " + key + ": " + msg);
}

int SuiteInt(const json& j, const char* key, int fallback, int min,
             const std::string& source, const std::string& text) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < min) {
    SuiteError(source, text, key,
               "expected an integer >= " + std::to_string(min));
  }
  return j[key].get<int>();
}

std::string Slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot write file");
  out << content;
}

// pooled mean/std over several Welford summaries
struct Pooled {
  int count = 0;
  double mean = 0.0;
  double std = 0.0;
};

Pooled PoolTiming(const std::vector<const TrialRecord*>& trials) {
  Pooled p;
  double sum = 0.0;
  for (const TrialRecord* t : trials) {
    p.count += t->batches;
    sum += t->batches * t->batch_ms_mean;
  }
  if (p.count == 0) return p;
  p.mean = sum / p.count;
  double m2 = 0.0;
  for (const TrialRecord* t : trials) {
    if (t->batches == 0) continue;
    const double d = t->batch_ms_mean - p.mean;
    m2 += t->batch_ms_std * t->batch_ms_std * (t->batches - 1) +
          t->batches * d * d;
  }
  p.std = p.count > 1 ? std::sqrt(m2 / (p.count - 1)) : 0.0;
  return p;
}

}  // namespace

BenchmarkSuite ParseSuite(const json& j, const std::string& source,
                          const std::string& text,
                          const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError(source + ": suite must be an object");
  static const std::set<std::string> kSuiteKeys = {"name", "base_seed",
                                                   "trials", "entries"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kSuiteKeys.count(it.key())) {
      SuiteError(source, text, it.key(), "unknown key");
    }
  }
  BenchmarkSuite suite;
  suite.base_dir = base_dir;
  if (j.contains("name")) {
    if (!j["name"].is_string()) SuiteError(source, text, "name", "expected a string");
    suite.name = j["name"].get<std::string>();
  }
  const int default_trials = SuiteInt(j, "trials", 20, 1, source, text);
  const int default_seed = SuiteInt(j, "base_seed", 0, 0, source, text);
  if (!j.contains("entries") || !j["entries"].is_array() ||
      j["entries"].empty()) {
    SuiteError(source, text, "entries", "expected a non-empty array");
  }
  static const std::set<std::string> kEntryKeys = {"task", "mode", "trials",
                                                   "base_seed", "overrides"};
  for (const json& e : j["entries"]) {
    if (!e.is_object()) SuiteError(source, text, "entries", "expected objects");
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (!kEntryKeys.count(it.key())) {
        SuiteError(source, text, it.key(), "unknown entry key");
      }
    }
    SuiteEntry entry;
    if (!e.contains("task") || !e["task"].is_string()) {
      SuiteError(source, text, "task", "entry needs a task name or file");
    }
    entry.task = e["task"].get<std::string>();
    if (e.contains("mode")) {
      if (!e["mode"].is_string()) SuiteError(source, text, "mode", "expected a string");
      try {
        entry.mode = ParseMode(e["mode"].get<std::string>());
      } catch (const ConfigError& err) {
        SuiteError(source, text, "mode", err.what());
      }
    }
    entry.trials = SuiteInt(e, "trials", default_trials, 1, source, text);
    entry.base_seed = static_cast<uint64_t>(
        SuiteInt(e, "base_seed", default_seed, 0, source, text));
    if (e.contains("overrides")) {
      if (!e["overrides"].is_object()) {
        SuiteError(source, text, "overrides", "expected an object");
      }
      entry.overrides = e["overrides"];
    }
    suite.entries.push_back(std::move(entry));
  }
  // surface task errors before any episode runs
  for (const SuiteEntry& entry : suite.entries) ResolveEntry(entry, base_dir);
  return suite;
}

BenchmarkSuite LoadSuiteFile(const std::string& path) {
  std::string text;
  const json j = ReadJsonFile(path, &text);
  return ParseSuite(j, path, text, fs::path(path).parent_path().string());
}

TaskConfig ResolveEntry(const SuiteEntry& entry, const std::string& base_dir) {
  if (entry.overrides.empty()) return ResolveTask(entry.task, base_dir);
  json base;
  std::string source;
  std::string text;
  const std::vector<std::string> presets = PresetNames();
  if (std::find(presets.begin(), presets.end(), entry.task) != presets.end()) {
    base = PresetJson(entry.task);
    source = "preset:" + entry.task;
  } else {
    fs::path p(entry.task);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    source = p.string();
    base = ReadJsonFile(source, &text);
  }
  base.merge_patch(entry.overrides);
  return ParseTaskConfig(base, source + " (with suite overrides)", text);
}

ResultRow Aggregate(const std::string& task, ControllerMode mode,
                    double time_limit, const std::vector<TrialRecord>& trials) {
  ResultRow row;
  row.task = task;
  row.mode = std::string(ModeName(mode));
  row.trials = static_cast<int>(trials.size());
  row.time_limit = time_limit;
  std::vector<double> times;
  for (const TrialRecord& t : trials) {
    if (t.outcome == Outcome::kSuccess) times.push_back(t.completion_time);
  }
  // sorted so the sums do not depend on trial order
  std::sort(times.begin(), times.end());
  row.successes = static_cast<int>(times.size());
  row.success_rate =
      trials.empty() ? 0.0 : static_cast<double>(row.successes) / row.trials;
  if (times.empty()) {
    row.time_mean = row.time_std = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  const double n = static_cast<double>(times.size());
  row.time_mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  double m2 = 0.0;
  for (double t : times) m2 += (t - row.time_mean) * (t - row.time_mean);
  row.time_std = times.size() > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
  return row;
}

BenchmarkReport RunBenchmark(const BenchmarkSuite& suite,
                             const BenchmarkOptions& options) {
  struct Job {
    size_t entry;
    int trial;
  };
  std::vector<TaskConfig> tasks;
  std::vector<ControllerMode> modes;
  std::vector<uint64_t> seeds;
  std::vector<Job> jobs;
  for (size_t i = 0; i < suite.entries.size(); ++i) {
    const SuiteEntry& entry = suite.entries[i];
    tasks.push_back(ResolveEntry(entry, suite.base_dir));
    modes.push_back(options.mode.value_or(entry.mode));
    seeds.push_back(options.seed.value_or(entry.base_seed));
    for (int t = 0; t < entry.trials; ++t) jobs.push_back({i, t});
  }

  fs::path log_dir;
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    if (options.write_logs) {
      log_dir = fs::path(options.out_dir) / "logs";
      fs::create_directories(log_dir);
    }
  }

  BenchmarkReport report;
  report.trials.resize(jobs.size());
  ThreadPool pool(std::max(1, options.workers));
  pool.ParallelFor(static_cast<int>(jobs.size()), [&](int k) {
    const Job& job = jobs[k];
    const TaskConfig& task = tasks[job.entry];
    const ControllerMode mode = modes[job.entry];
    const uint64_t seed = seeds[job.entry] + static_cast<uint64_t>(job.trial);
    EpisodeConfig config = task.MakeEpisode(mode, seed);
    std::ofstream log;
    if (!log_dir.empty()) {
      const std::string file = std::to_string(job.entry) + "_" +
                               Slug(task.name) + "_" +
                               std::string(ModeName(mode)) + "_seed" +
                               std::to_string(seed) + ".jsonl";
      log.open(log_dir / file, std::ios::binary);
      config.log = &log;
    }
    TrialRecord& record = report.trials[k];
    record.task = task.name;
    record.mode = mode;
    record.seed = seed;
    try {
      const EpisodeResult result = RunEpisode(config);
      record.outcome = result.outcome;
      record.completion_time = result.completion_time;
      record.steps = result.steps;
      record.replans = result.replans;
      record.batches = result.batches;
      record.batch_ms_mean = result.batch_ms_mean;
      record.batch_ms_std = result.batch_ms_std;
    } catch (const ConfigError&) {
      throw;
    } catch (const Error&) {
      // a broken episode is a failed trial, never a failed suite
      record.outcome = Outcome::kFailure;
    }
  });

  size_t k = 0;
  for (size_t i = 0; i < suite.entries.size(); ++i) {
    std::vector<TrialRecord> trials(
        report.trials.begin() + k,
        report.trials.begin() + k + suite.entries[i].trials);
    k += suite.entries[i].trials;
    report.table.rows.push_back(
        Aggregate(tasks[i].name, modes[i], tasks[i].spec.time_limit, trials));
  }

  if (!options.out_dir.empty()) {
    const fs::path out(options.out_dir);
    WriteFile(out / "results.csv", FormatCsv(report.table));
    WriteFile(out / "results.json", TableJson(report).dump(2) + "\n");
    WriteFile(out / "timing.json", TimingJson(report).dump(2) + "\n");
  }
  return report;
}

std::string FormatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("bad number '" + s + "' in CSV");
  }
  return x;
}

namespace {
constexpr const char* kCsvHeader =
    "task,mode,trials,successes,success_rate,time_mean,time_std,time_limit";
}  // namespace

std::string FormatCsv(const ResultTable& table) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ResultRow& r : table.rows) {
    out += r.task + "," + r.mode + "," + std::to_string(r.trials) + "," +
           std::to_string(r.successes) + "," + FormatDouble(r.success_rate) +
           "," + FormatDouble(r.time_mean) + "," + FormatDouble(r.time_std) +
           "," + FormatDouble(r.time_limit) + "\n";
  }
  return out;
}

ResultTable ParseCsv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("CSV header mismatch");
  }
  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ConfigError("CSV row needs 8 fields: " + line);
    ResultRow r;
    r.task = f[0];
    r.mode = f[1];
    r.trials = static_cast<int>(ParseDouble(f[2]));
    r.successes = static_cast<int>(ParseDouble(f[3]));
    r.success_rate = ParseDouble(f[4]);
    r.time_mean = ParseDouble(f[5]);
    r.time_std = ParseDouble(f[6]);
    r.time_limit = ParseDouble(f[7]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

json TableJson(const BenchmarkReport& report) {
  auto number = [](double x) -> json {
    return std::isfinite(x) ? json(x) : json(nullptr);
  };
  json rows = json::array();
  for (const ResultRow& r : report.table.rows) {
    rows.push_back({{"task", r.task},
                    {"mode", r.mode},
                    {"trials", r.trials},
                    {"successes", r.successes},
                    {"success_rate", r.success_rate},
                    {"time_mean", number(r.time_mean)},
                    {"time_std", number(r.time_std)},
                    {"time_limit", r.time_limit}});
  }
  json trials = json::array();
  for (const TrialRecord& t : report.trials) {
    trials.push_back({{"task", t.task},
                      {"mode", ModeName(t.mode)},
                      {"seed", t.seed},
                      {"outcome", OutcomeName(t.outcome)},
                      {"completion_time", t.completion_time},
                      {"steps", t.steps},
                      {"replans", t.replans}});
  }
  return {{"rows", rows}, {"trials", trials}};
}

json TimingJson(const BenchmarkReport& report) {
  json out = json::array();
  size_t k = 0;
  for (const ResultRow& row : report.table.rows) {
    std::vector<const TrialRecord*> trials;
    for (int i = 0; i < row.trials; ++i) trials.push_back(&report.trials[k + i]);
    k += row.trials;
    const Pooled p = PoolTiming(trials);
    out.push_back({{"task", row.task},
                   {"mode", row.mode},
                   {"batch_ms_mean", p.mean},
                   {"batch_ms_std", p.std},
                   {"batches", p.count}});
  }
  return out;
}

}  // namespace steer
