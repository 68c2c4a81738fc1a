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


#include "steer/episode.h"

#include <atomic>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "steer/config.h"

namespace steer {
namespace {

EpisodeConfig MoveEpisode(ControllerMode mode, uint64_t seed,
                          double time_limit) {
  TaskConfig task = ResolveTask("move");
  task.spec.time_limit = time_limit;
  return task.MakeEpisode(mode, seed);
}

TEST(ReplanSchedule, TwentyHertzOnFiftyHertzGrid) {
  std::vector<int> replans;
  for (int step = 0; step <= 12; ++step) {
    if (IsReplanStep(step, 0.05, 0.02)) replans.push_back(step);
  }
  EXPECT_EQ(replans, (std::vector<int>{0, 2, 5, 7, 10, 12}));
}

TEST(ReplanSchedule, FlatEveryStep) {
  for (int step = 0; step < 100; ++step) {
    EXPECT_TRUE(IsReplanStep(step, 0.02, 0.02));
  }
}

TEST(Episode, StartingAtGoalSucceedsImmediately) {
  EpisodeConfig config = MoveEpisode(ControllerMode::kHierarchical, 0, 30.0);
  config.initial_state.object.pose.head<2>() = config.task.goal_pos;
  config.initial_state.object.vel.setZero();
  const EpisodeResult r = RunEpisode(config);
  EXPECT_EQ(r.outcome, Outcome::kSuccess);
  EXPECT_EQ(r.completion_time, 0.0);
  EXPECT_EQ(r.steps, 0);
}

TEST(Episode, SynchronousRunIsDeterministic) {
  const EpisodeConfig config =
      MoveEpisode(ControllerMode::kHierarchical, 7, 1.0);
  const EpisodeResult a = RunEpisode(config);
  const EpisodeResult b = RunEpisode(config);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(PackState(a.final_state), PackState(b.final_state));
}

TEST(Episode, SeedChangesTrajectory) {
  const EpisodeResult a =
      RunEpisode(MoveEpisode(ControllerMode::kHierarchical, 1, 0.5));
  const EpisodeResult b =
      RunEpisode(MoveEpisode(ControllerMode::kHierarchical, 2, 0.5));
  EXPECT_NE(PackState(a.final_state), PackState(b.final_state));
}

TEST(Episode, DisabledPlannerTimesOut) {
  EpisodeConfig config = MoveEpisode(ControllerMode::kHierarchical, 0, 1.0);
  config.planner.enabled = false;
  const EpisodeResult r = RunEpisode(config);
  EXPECT_EQ(r.outcome, Outcome::kTimeout);
  EXPECT_GT(r.completion_time, 1.0);
  EXPECT_EQ(r.batches, 0);
}

TEST(Episode, HierarchicalPlanAgeBounded) {
  const EpisodeResult r =
      RunEpisode(MoveEpisode(ControllerMode::kHierarchical, 0, 1.0));
  EXPECT_LE(r.max_plan_age, 0.04 + 1e-9);
  EXPECT_GT(r.max_plan_age, 0.0);
  // 20 Hz over the steps taken
  EXPECT_EQ(r.replans, (r.steps * 2 + 4) / 5);
}

TEST(Episode, FlatReplansEveryStep) {
  const EpisodeResult r = RunEpisode(MoveEpisode(ControllerMode::kFlat, 0, 0.4));
  EXPECT_LE(r.max_plan_age, 0.02);
  EXPECT_EQ(r.replans, r.steps);
  EXPECT_EQ(r.batches, r.replans);
}

TEST(Episode, LogsOneRecordPerStep) {
  EpisodeConfig config = MoveEpisode(ControllerMode::kHierarchical, 0, 0.2);
  std::ostringstream log;
  config.log = &log;
  const EpisodeResult r = RunEpisode(config);
  std::istringstream in(log.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto rec = nlohmann::json::parse(line);
    EXPECT_TRUE(rec.contains("t"));
    EXPECT_EQ(rec["command"].size(), 25u);
    ++lines;
  }
  EXPECT_EQ(lines, r.steps);
}

TEST(Episode, AsynchronousRunTerminates) {
  EpisodeConfig config = MoveEpisode(ControllerMode::kHierarchical, 0, 0.5);
  config.scheduler = Scheduler::kAsynchronous;
  config.realtime = false;
  const EpisodeResult r = RunEpisode(config);
  EXPECT_NE(r.outcome, Outcome::kRunning);
  EXPECT_GE(r.replans, 1);
  EXPECT_GE(r.steps, 25);
}

TEST(Episode, AsynchronousRealtimeKeepsPlansFresh) {
  EpisodeConfig config = MoveEpisode(ControllerMode::kHierarchical, 0, 0.5);
  config.scheduler = Scheduler::kAsynchronous;
  config.realtime = true;
  const EpisodeResult r = RunEpisode(config);
  EXPECT_GE(r.replans, 2);
}

TEST(PlanSlotTest, ReadersSeeMonotoneIds) {
  PlanSlot slot;
  slot.Publish(std::make_shared<const PublishedPlan>());
  std::atomic<bool> done{false};
  std::atomic<bool> ordered{true};
  std::vector<std::thread> readers;
  for (int t = 0; t < 3; ++t) {
    readers.emplace_back([&] {
      uint64_t last = 0;
      while (!done.load()) {
        const auto p = slot.Latest();
        if (p->id < last) ordered = false;
        last = p->id;
      }
    });
  }
  for (uint64_t id = 1; id <= 20000; ++id) {
    auto p = std::make_shared<PublishedPlan>();
    p->id = id;
    slot.Publish(std::move(p));
  }
  done = true;
  for (std::thread& t : readers) t.join();
  EXPECT_TRUE(ordered.load());
  EXPECT_EQ(slot.Latest()->id, 20000u);
}

}  // namespace
}  // namespace steer
