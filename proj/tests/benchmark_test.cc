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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace steer {
namespace {

using json = nlohmann::json;

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// move task whose object starts resting on the goal
json AtGoal() {
  return {{"init", {{"object_center", {2.4, 0.6}}, {"object_radius", 0.0}}}};
}

TEST(ResultCsv, RoundTripsBitwise) {
  ResultTable t;
  t.rows.push_back({"move", "hierarchical", 20, 17, 0.85, 0.1 + 0.2,
                    1.0 / 3.0, 30.0});
  t.rows.push_back({"upright", "flat", 20, 0, 0.0, NAN, NAN, 30.0});
  t.rows.push_back({"tiny", "hierarchical", 3, 3, 1.0, 5e-324, 1.7976931348623157e308, 1e-9});
  const std::string csv = FormatCsv(t);
  const ResultTable back = ParseCsv(csv);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  EXPECT_EQ(FormatCsv(back), csv);
  EXPECT_EQ(back.rows[0].time_mean, 0.1 + 0.2);
  EXPECT_EQ(back.rows[0].time_std, 1.0 / 3.0);
  EXPECT_TRUE(std::isnan(back.rows[1].time_mean));
  EXPECT_EQ(back.rows[2].time_mean, 5e-324);
}

TEST(ResultCsv, HeaderIsFixed) {
  EXPECT_EQ(FormatCsv({}),
            "task,mode,trials,successes,success_rate,time_mean,time_std,"
            "time_limit\n");
  EXPECT_THROW(ParseCsv("task,mode\n"), ConfigError);
}

TEST(ResultCsv, ShortestFormatting) {
  EXPECT_EQ(FormatDouble(0.85), "0.85");
  EXPECT_EQ(FormatDouble(30.0), "30");
  EXPECT_EQ(FormatDouble(NAN), "nan");
  EXPECT_EQ(ParseDouble("2.5"), 2.5);
  EXPECT_THROW(ParseDouble("2.5x"), ConfigError);
}

TEST(Aggregate, SuccessOnlyStatisticsWithSampleStd) {
  std::vector<TrialRecord> trials(4);
  const double times[] = {2.0, 4.0, 30.0, 6.0};
  const Outcome outcomes[] = {Outcome::kSuccess, Outcome::kSuccess,
                              Outcome::kTimeout, Outcome::kSuccess};
  for (int i = 0; i < 4; ++i) {
    trials[i].outcome = outcomes[i];
    trials[i].completion_time = times[i];
  }
  const ResultRow row =
      Aggregate("move", ControllerMode::kHierarchical, 30.0, trials);
  EXPECT_EQ(row.trials, 4);
  EXPECT_EQ(row.successes, 3);
  EXPECT_EQ(row.success_rate, 0.75);
  EXPECT_DOUBLE_EQ(row.time_mean, 4.0);
  EXPECT_DOUBLE_EQ(row.time_std, 2.0);
  EXPECT_EQ(row.mode, "hierarchical");
}

TEST(Aggregate, NoSuccessesGivesNan) {
  std::vector<TrialRecord> trials(3);
  for (TrialRecord& t : trials) t.outcome = Outcome::kTimeout;
  const ResultRow row = Aggregate("move", ControllerMode::kFlat, 30.0, trials);
  EXPECT_EQ(row.success_rate, 0.0);
  EXPECT_TRUE(std::isnan(row.time_mean));
  EXPECT_TRUE(std::isnan(row.time_std));
}

TEST(Aggregate, PermutationInvariantBitwise) {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(0.5, 29.0);
  std::vector<TrialRecord> trials(20);
  for (size_t i = 0; i < trials.size(); ++i) {
    trials[i].outcome = i % 3 == 0 ? Outcome::kTimeout : Outcome::kSuccess;
    trials[i].completion_time = u(gen);
  }
  const ResultRow ref =
      Aggregate("move", ControllerMode::kHierarchical, 30.0, trials);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(trials.begin(), trials.end(), gen);
    const ResultRow row =
        Aggregate("move", ControllerMode::kHierarchical, 30.0, trials);
    EXPECT_EQ(row.time_mean, ref.time_mean);
    EXPECT_EQ(row.time_std, ref.time_std);
  }
}

TEST(Suite, ParseErrorsCarryLine) {
  const std::string path = ::testing::TempDir() + "bad_suite.json";
  std::ofstream(path) << "{\n  \"entries\": [\n    {\"task\": \"move\", "
                         "\"mdoe\": \"flat\"}\n  ]\n}\n";
  try {
    LoadSuiteFile(path);
    FAIL() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(path + ":3:"), std::string::npos)
        << e.what();
  }
}

TEST(Suite, BadTaskSurfacesBeforeRunning) {
  const json j = {{"entries", {{{"task", "nope"}}}}};
  EXPECT_THROW(ParseSuite(j, "inline"), ConfigError);
}

TEST(Suite, DefaultsAndOverrides) {
  const json j = {{"trials", 5},
                  {"base_seed", 100},
                  {"entries",
                   {{{"task", "move"}, {"mode", "flat"}},
                    {{"task", "upright"}, {"trials", 2}, {"overrides",
                      {{"time_limit", 12.0}}}}}}};
  const BenchmarkSuite s = ParseSuite(j, "inline");
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[0].trials, 5);
  EXPECT_EQ(s.entries[0].base_seed, 100u);
  EXPECT_EQ(s.entries[0].mode, ControllerMode::kFlat);
  EXPECT_EQ(s.entries[1].trials, 2);
  EXPECT_EQ(ResolveEntry(s.entries[1], "").spec.time_limit, 12.0);
}

TEST(RunBenchmarkTest, TrivialSuiteSucceedsAtTimeZero) {
  BenchmarkSuite suite;
  suite.entries.push_back({"move", ControllerMode::kHierarchical, 20, 0, AtGoal()});
  const BenchmarkReport r = RunBenchmark(suite, {});
  ASSERT_EQ(r.table.rows.size(), 1u);
  const ResultRow& row = r.table.rows[0];
  EXPECT_EQ(row.trials, 20);
  EXPECT_EQ(row.success_rate, 1.0);
  EXPECT_EQ(row.time_mean, 0.0);
  EXPECT_EQ(row.time_std, 0.0);
  ASSERT_EQ(r.trials.size(), 20u);
  for (size_t i = 0; i < r.trials.size(); ++i) EXPECT_EQ(r.trials[i].seed, i);
}

TEST(RunBenchmarkTest, WritesArtifactsAndIgnoresWorkerCount) {
  BenchmarkSuite suite;
  suite.entries.push_back({"move", ControllerMode::kHierarchical, 2, 4,
                           json{{"time_limit", 0.3}}});
  suite.entries.push_back({"upright", ControllerMode::kHierarchical, 2, 9,
                           json{{"time_limit", 0.3}}});
  namespace fs = std::filesystem;
  const std::string a = ::testing::TempDir() + "bench_a";
  const std::string b = ::testing::TempDir() + "bench_b";
  fs::remove_all(a);
  fs::remove_all(b);
  BenchmarkOptions options;
  options.out_dir = a;
  RunBenchmark(suite, options);
  options.out_dir = b;
  options.workers = 3;
  RunBenchmark(suite, options);
  EXPECT_EQ(ReadAll(a + "/results.csv"), ReadAll(b + "/results.csv"));
  EXPECT_TRUE(fs::exists(a + "/results.json"));
  EXPECT_TRUE(fs::exists(a + "/timing.json"));
  int logs = 0;
  for (const auto& e : fs::directory_iterator(a + "/logs")) {
    EXPECT_EQ(e.path().extension(), ".jsonl");
    EXPECT_GT(fs::file_size(e.path()), 0u);
    ++logs;
  }
  EXPECT_EQ(logs, 4);
  const json timing = json::parse(ReadAll(a + "/timing.json"));
  EXPECT_FALSE(timing.empty());
}

TEST(RunBenchmarkTest, SeedOverrideShiftsTrials) {
  BenchmarkSuite suite;
  suite.entries.push_back({"move", ControllerMode::kHierarchical, 3, 0, AtGoal()});
  BenchmarkOptions options;
  options.seed = 40;
  const BenchmarkReport r = RunBenchmark(suite, options);
  EXPECT_EQ(r.trials[2].seed, 42u);
}

}  // namespace
}  // namespace steer
