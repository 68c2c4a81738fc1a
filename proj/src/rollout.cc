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

#include "steer/rollout.h"

#include <chrono>
#include <cmath>
#include <limits>

namespace steer {

void TimingStats::Add(double ms) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++count_;
  const double delta = ms - mean_;
  mean_ += delta / count_;
  m2_ += delta * (ms - mean_);
}

int TimingStats::count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return count_;
}

double TimingStats::mean() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return mean_;
}

double TimingStats::stddev() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return count_ > 1 ? std::sqrt(m2_ / (count_ - 1)) : 0.0;
}

RolloutEngine::RolloutEngine(RolloutOptions options)
    : options_(std::move(options)) {
  if (!options_.world) throw ConfigError("rollout engine needs a world");
  if (options_.mode == ActionMode::kPolicy && !options_.policy) {
    throw ConfigError("policy mode needs a low-level policy");
  }
  if (!(options_.horizon > 0.0) || !(options_.control_dt > 0.0)) {
    throw InvalidInputError("horizon and control period must be positive");
  }
  if (options_.cost.terms.empty() && options_.cost.terminal_terms.empty()) {
    throw ConfigError("task cost has no terms");
  }
  num_steps_ = static_cast<int>(
      std::floor(options_.horizon / options_.control_dt + 1e-9));
  pool_ = std::make_unique<ThreadPool>(options_.workers);
}

int RolloutEngine::ActionDim() const {
  return options_.mode == ActionMode::kRawControls ? JointControls::kDim
                                                    : options_.layout.Dim();
}

std::vector<Bound> RolloutEngine::ActionBounds() const {
  if (options_.mode == ActionMode::kRawControls) {
    return std::vector<Bound>(JointControls::kDim, Bound{-1.0, 1.0});
  }
  return options_.layout.bounds();
}

CommandVector RolloutEngine::ActionToCommand(const ActionVector& action) const {
  return AssembleCommand(action, options_.layout, options_.defaults);
}

JointControls RolloutEngine::ActionToControls(const RobotState& robot,
                                              const ActionVector& action) const {
  const ActuatorLimits& limits = options_.world->robot_params().limits;
  if (options_.mode == ActionMode::kRawControls) {
    if (action.size() != JointControls::kDim) {
      throw LayoutError("raw action must have " +
                        std::to_string(JointControls::kDim) + " entries");
    }
    const JointControls::Vector lo = limits.Lower();
    const JointControls::Vector hi = limits.Upper();
    JointControls c;
    const JointControls::Vector a =
        action.cwiseMax(-1.0).cwiseMin(1.0);
    c.u = 0.5 * (hi + lo) + 0.5 * (hi - lo).cwiseProduct(a);
    return c;
  }
  return options_.policy->Step(robot, ActionToCommand(action));
}

Eigen::Matrix<double, JointControls::kDim, 1>
RolloutEngine::NormalizedControls(const JointControls& controls,
                                  const ActuatorLimits& limits) {
  const JointControls::Vector lo = limits.Lower();
  const JointControls::Vector hi = limits.Upper();
  return (2.0 * controls.u - (hi + lo)).cwiseQuotient(hi - lo);
}

double RolloutEngine::StepCost(const WorldState& next,
                               const JointControls& controls,
                               bool terminal) const {
  const SiteFrame frame = BuildFrame(*options_.world, next, options_.task);
  const auto u = NormalizedControls(controls,
                                    options_.world->robot_params().limits);
  return EvalTaskCost(options_.cost, frame,
                      std::span<const double>(u.data(), u.size()), terminal);
}

RolloutResult RolloutEngine::Rollout(const WorldState& state,
                                     const SplinePlan& plan,
                                     bool keep_trajectory) const {
  RolloutResult result;
  result.step_costs.reserve(num_steps_);
  if (keep_trajectory) {
    result.trajectory.reserve(num_steps_ + 1);
    result.trajectory.push_back(state);
  }
  const World& world = *options_.world;
  WorldState current = state;
  double total = 0.0;
  for (int i = 0; i < num_steps_; ++i) {
    const double t = i * options_.control_dt;
    JointControls controls;
    try {
      controls = ActionToControls(current.robot, EvaluatePlan(plan, t));
    } catch (const InvalidInputError&) {
      result.failed = true;
      break;
    }
    current = world.Step(current, controls, options_.control_dt);
    if (current.diverged) {
      result.failed = true;
      break;
    }
    const double c = StepCost(current, controls, i + 1 == num_steps_);
    result.step_costs.push_back(c);
    total += c;
    if (keep_trajectory) result.trajectory.push_back(current);
  }
  result.total_cost =
      result.failed ? std::numeric_limits<double>::infinity() : total;
  return result;
}

std::vector<RolloutResult> RolloutEngine::RolloutBatch(
    const WorldState& state, const std::vector<SplinePlan>& plans,
    bool keep_trajectory) const {
  if (plans.empty()) throw StructuralError("empty plan batch");
  const auto start = std::chrono::steady_clock::now();
  std::vector<RolloutResult> results(plans.size());
  pool_->ParallelFor(static_cast<int>(plans.size()), [&](int i) {
    results[i] = Rollout(state, plans[i], keep_trajectory);
  });
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;
  timing_.Add(elapsed.count());
  return results;
}

std::vector<double> RolloutEngine::BatchCosts(
    const WorldState& state, const std::vector<SplinePlan>& plans) const {
  const std::vector<RolloutResult> results =
      RolloutBatch(state, plans, /*keep_trajectory=*/false);
  std::vector<double> costs(results.size());
  for (size_t i = 0; i < results.size(); ++i) costs[i] = results[i].total_cost;
  return costs;
}

}  // namespace steer
