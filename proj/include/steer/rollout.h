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

#ifndef STEER_ROLLOUT_H_
#define STEER_ROLLOUT_H_

#include <memory>
#include <mutex>
#include <vector>

#include "steer/command.h"
#include "steer/cost.h"
#include "steer/policy.h"
#include "steer/spline.h"
#include "steer/thread_pool.h"
#include "steer/world.h"

namespace steer {

// How plan actions reach the world.
enum class ActionMode {
  kPolicy,       // action -> command -> low-level policy -> controls
  kRawControls,  // action is the normalized joint-control vector
};

struct RolloutResult {
  std::vector<WorldState> trajectory;  // empty when not kept
  std::vector<double> step_costs;
  double total_cost = 0.0;
  bool failed = false;
};

// Running mean and standard deviation of batch wall times (milliseconds).
class TimingStats {
 public:
  void Add(double ms);
  int count() const;
  double mean() const;
  double stddev() const;

 private:
  mutable std::mutex mutex_;
  int count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct RolloutOptions {
  std::shared_ptr<const World> world;
  std::shared_ptr<const LowLevelPolicy> policy;  // unused in raw mode
  ActionLayout layout;
  CommandDefaults defaults;
  TaskCost cost;
  TaskSpec task;
  ActionMode mode = ActionMode::kPolicy;
  double horizon = 1.5;
  double control_dt = 0.02;
  int workers = 1;
};

class RolloutEngine {
 public:
  explicit RolloutEngine(RolloutOptions options);

  int ActionDim() const;
  std::vector<Bound> ActionBounds() const;
  int NumSteps() const { return num_steps_; }
  const RolloutOptions& options() const { return options_; }

  // command a policy-mode action assembles to
  CommandVector ActionToCommand(const ActionVector& action) const;
  // joint controls for one action at one robot state
  JointControls ActionToControls(const RobotState& robot,
                                 const ActionVector& action) const;
  // controls scaled to [-1, 1] per actuator, as seen by control penalties
  static Eigen::Matrix<double, JointControls::kDim, 1> NormalizedControls(
      const JointControls& controls, const ActuatorLimits& limits);

  // per-step cost of the state reached with `controls`
  double StepCost(const WorldState& next, const JointControls& controls,
                  bool terminal) const;

  RolloutResult Rollout(const WorldState& state, const SplinePlan& plan,
                        bool keep_trajectory = true) const;

  // results in plan order; identical to serial rollouts for any worker count
  std::vector<RolloutResult> RolloutBatch(const WorldState& state,
                                          const std::vector<SplinePlan>& plans,
                                          bool keep_trajectory = true) const;

  std::vector<double> BatchCosts(const WorldState& state,
                                 const std::vector<SplinePlan>& plans) const;

  TimingStats& timing() const { return timing_; }

 private:
  RolloutOptions options_;
  int num_steps_;
  std::unique_ptr<ThreadPool> pool_;
  mutable TimingStats timing_;
};

}  // namespace steer

#endif  // STEER_ROLLOUT_H_
