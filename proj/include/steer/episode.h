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

#ifndef STEER_EPISODE_H_
#define STEER_EPISODE_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <ostream>
#include <vector>

#include "steer/cem.h"
#include "steer/filter.h"
#include "steer/rollout.h"

namespace steer {

enum class ControllerMode {
  kHierarchical,  // plan commands for the low-level policy at 20 Hz
  kFlat,          // plan normalized joint controls at 50 Hz
};

enum class Scheduler { kSynchronous, kAsynchronous };

struct PlannerSettings {
  CemConfig cem;
  int num_knots = 4;
  double horizon = 1.5;
  Interpolation interpolation = Interpolation::kLinear;
  bool warm_start = true;
  bool enabled = true;  // false keeps the initial neutral plan
  int iterations = 1;   // optimizer iterations per replan
  double period = 0.05;  // hierarchical replanning period
};

struct EpisodeConfig {
  TaskSpec task;
  TaskCost cost;
  std::shared_ptr<const World> world;
  std::shared_ptr<const LowLevelPolicy> policy;
  ActionLayout layout;
  CommandDefaults defaults;
  PlannerSettings planner;
  ControllerMode mode = ControllerMode::kHierarchical;
  Scheduler scheduler = Scheduler::kSynchronous;
  WorldState initial_state;
  double control_dt = 0.02;
  // state fusion: joint-space and pose cutoffs, pose samples every n steps
  double fast_cutoff_hz = 25.0;
  double slow_cutoff_hz = 15.0;
  int slow_every = 1;
  bool ground_truth = false;
  int workers = 1;
  // asynchronous mode: pace the controller against the wall clock
  bool realtime = true;
  std::ostream* log = nullptr;
  bool log_plans = false;
  uint64_t seed = 0;
};

struct EpisodeResult {
  Outcome outcome = Outcome::kRunning;
  double completion_time = 0.0;
  uint64_t seed = 0;
  int steps = 0;
  int replans = 0;
  double max_plan_age = 0.0;
  // wall time of the planner's rollout batches
  int batches = 0;
  double batch_ms_mean = 0.0;
  double batch_ms_std = 0.0;
  WorldState final_state;
};

// Plan with its publication time. Published plans are immutable.
struct PublishedPlan {
  SplinePlan plan;
  double time = 0.0;
  uint64_t id = 0;
};

// Single-writer single-reader slot; readers always see a whole value.
template <typename T>
class Slot {
 public:
  void Publish(std::shared_ptr<const T> value) {
    std::lock_guard<std::mutex> lock(mutex_);
    value_ = std::move(value);
  }
  std::shared_ptr<const T> Latest() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return value_;
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const T> value_;
};
using PlanSlot = Slot<PublishedPlan>;

// control steps at which the synchronous scheduler replans: floor(j * ratio)
// for ratio = period / control_dt, i.e. 0, 2, 5, 7, 10, ... at 20/50 Hz
bool IsReplanStep(int step, double period, double control_dt);

// engine options the episode builds for its mode
RolloutOptions EpisodeRolloutOptions(const EpisodeConfig& config);

EpisodeResult RunEpisode(const EpisodeConfig& config);

// flat baseline: raw joint controls, replanned every control step
EpisodeResult RunEpisodeFlat(EpisodeConfig config);

}  // namespace steer

#endif  // STEER_EPISODE_H_
