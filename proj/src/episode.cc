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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

namespace steer {
namespace {

using json = nlohmann::json;

template <typename V>
json Array(const V& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json StateRecord(const WorldState& s) {
  const RobotState& r = s.robot;
  const ObjectState& o = s.object;
  return {{"robot",
           {{"pose", Array(r.base_pose)},
            {"vel", Array(r.base_vel)},
            {"arm", Array(r.arm_joints)},
            {"effector", Array(r.effector_pos)},
            {"gripper", r.gripper_pos},
            {"torso", Array(r.torso)}}},
          {"object",
           {{"pose", Array(o.pose)},
            {"vel", Array(o.vel)},
            {"theta", o.theta},
            {"theta_rate", o.theta_rate}}},
          {"fallen", s.fallen}};
}

// everything one episode needs, shared by both schedulers
class Runner {
 public:
  explicit Runner(const EpisodeConfig& config)
      : config_(config),
        engine_(EpisodeRolloutOptions(config)),
        flat_(config.mode == ControllerMode::kFlat),
        period_(flat_ ? config.control_dt : config.planner.period) {
    config_.task.Validate();
    config_.planner.cem.Validate();
    if (!(config_.control_dt > 0.0) || config_.slow_every < 1 ||
        config_.planner.iterations < 1) {
      throw ConfigError("invalid episode timing settings");
    }
    ActionVector neutral =
        flat_ ? ActionVector::Zero(engine_.ActionDim())
              : NeutralAction(config_.layout, config_.defaults);
    initial_plan_ =
        SplinePlan::Uniform(config_.planner.num_knots, config_.planner.horizon,
                            neutral, config_.planner.interpolation);
    cem_ = config_.planner.cem;
    cem_.seed = config_.seed;
  }

  // one replan from `estimate`, warm-started from `previous`
  std::shared_ptr<const PublishedPlan> Plan(const WorldState& estimate,
                                            const PublishedPlan& previous,
                                            uint64_t replan_index) {
    auto out = std::make_shared<PublishedPlan>();
    out->time = estimate.time;
    out->id = replan_index + 1;
    if (!config_.planner.enabled) {
      out->plan = initial_plan_;
      return out;
    }
    SplinePlan nominal =
        config_.planner.warm_start
            ? ShiftPlan(previous.plan,
                        std::max(0.0, estimate.time - previous.time))
            : initial_plan_;
    for (int i = 0; i < config_.planner.iterations; ++i) {
      const uint64_t iteration =
          replan_index * config_.planner.iterations + i;
      nominal = PlanIteration(estimate, nominal, engine_, cem_, iteration)
                    .nominal;
    }
    out->plan = std::move(nominal);
    return out;
  }

  // executes one control step and logs it
  WorldState Act(const WorldState& state, const PublishedPlan& plan,
                 double* plan_age) {
    const double age = state.time - plan.time;
    *plan_age = age;
    const ActionVector action = EvaluatePlan(plan.plan, std::max(0.0, age));
    JointControls controls;
    try {
      controls = engine_.ActionToControls(state.robot, action);
    } catch (const InvalidInputError&) {
      WorldState failed = state;
      failed.diverged = true;
      return failed;
    }
    WorldState next = config_.world->Step(state, controls, config_.control_dt);
    if (config_.log != nullptr) {
      json rec = StateRecord(next);
      rec["t"] = next.time;
      rec["action"] = Array(action);
      if (!flat_) rec["command"] = Array(engine_.ActionToCommand(action).Flatten());
      rec["controls"] = Array(controls.u);
      rec["cost"] = next.diverged ? 0.0 : engine_.StepCost(next, controls, false);
      rec["plan_age"] = age;
      rec["plan_id"] = plan.id;
      *config_.log << rec.dump() << '\n';
    }
    return next;
  }

  void LogPlan(const PublishedPlan& plan) {
    if (config_.log == nullptr || !config_.log_plans) return;
    json knots = json::array();
    for (const ActionVector& k : plan.plan.knots()) knots.push_back(Array(k));
    *config_.log << json{{"type", "plan"},
                         {"t", plan.time},
                         {"id", plan.id},
                         {"knots", knots}}
                        .dump()
                 << '\n';
  }

  // filtered estimate of `truth` (or truth itself when bypassed)
  WorldState Estimate(const WorldState& truth, int step) {
    if (config_.ground_truth) return truth;
    const Eigen::VectorXd sample = PackState(truth);
    const bool slow = step % config_.slow_every == 0;
    if (!filter_.initialized) {
      filter_ = MakeStateFilter(truth, config_.fast_cutoff_hz,
                                config_.slow_cutoff_hz);
    } else {
      filter_ = FuseState(std::move(filter_), sample, slow ? &sample : nullptr,
                          config_.control_dt);
    }
    return UnpackState(*config_.world, filter_.estimate, truth);
  }

  Outcome Check(const WorldState& state) const {
    if (state.diverged || state.fallen) return Outcome::kFailure;
    return CheckSuccess(state, config_.task, state.time);
  }

  const PublishedPlan InitialPlan() const {
    return PublishedPlan{initial_plan_, 0.0, 0};
  }
  double period() const { return period_; }
  void Report(EpisodeResult* result) const {
    const TimingStats& t = engine_.timing();
    result->batches = t.count();
    result->batch_ms_mean = t.mean();
    result->batch_ms_std = t.stddev();
  }
  bool flat() const { return flat_; }

 private:
  EpisodeConfig config_;
  RolloutEngine engine_;
  bool flat_;
  double period_;
  SplinePlan initial_plan_;
  CemConfig cem_;
  FilterState filter_;
};

EpisodeResult RunSynchronous(const EpisodeConfig& config) {
  Runner runner(config);
  EpisodeResult result;
  result.seed = config.seed;
  WorldState state = config.initial_state;
  state.time = 0.0;
  auto published = std::make_shared<const PublishedPlan>(runner.InitialPlan());
  WorldState estimate = runner.Estimate(state, 0);
  for (int step = 0;; ++step) {
    state.time = step * config.control_dt;
    const Outcome outcome = runner.Check(state);
    if (outcome != Outcome::kRunning) {
      result.outcome = outcome;
      break;
    }
    if (IsReplanStep(step, runner.period(), config.control_dt)) {
      estimate.time = state.time;
      published = runner.Plan(estimate, *published, result.replans);
      runner.LogPlan(*published);
      ++result.replans;
    }
    double age = 0.0;
    state = runner.Act(state, *published, &age);
    state.time = (step + 1) * config.control_dt;
    result.max_plan_age = std::max(result.max_plan_age, age);
    result.steps = step + 1;
    estimate = runner.Estimate(state, step + 1);
  }
  result.completion_time = state.time;
  result.final_state = state;
  runner.Report(&result);
  return result;
}

EpisodeResult RunAsynchronous(const EpisodeConfig& config) {
  Runner runner(config);
  EpisodeResult result;
  result.seed = config.seed;
  PlanSlot plans;
  Slot<WorldState> estimates;
  std::atomic<bool> stop{false};
  std::atomic<int> replans{0};
  std::exception_ptr planner_error;

  WorldState state = config.initial_state;
  state.time = 0.0;
  estimates.Publish(
      std::make_shared<const WorldState>(runner.Estimate(state, 0)));
  // first plan before the controller starts
  auto first = runner.Plan(*estimates.Latest(), runner.InitialPlan(), 0);
  runner.LogPlan(*first);
  plans.Publish(first);
  replans = 1;

  std::thread planner([&] {
    try {
      auto next_tick = std::chrono::steady_clock::now();
      while (!stop.load()) {
        next_tick += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(runner.period()));
        if (config.realtime) std::this_thread::sleep_until(next_tick);
        if (stop.load()) break;
        const auto estimate = estimates.Latest();
        const auto previous = plans.Latest();
        auto plan = runner.Plan(*estimate, *previous, replans.load());
        runner.LogPlan(*plan);
        plans.Publish(std::move(plan));
        ++replans;
      }
    } catch (...) {
      planner_error = std::current_exception();
      stop = true;
    }
  });

  const auto start = std::chrono::steady_clock::now();
  for (int step = 0;; ++step) {
    state.time = step * config.control_dt;
    const Outcome outcome = runner.Check(state);
    if (outcome != Outcome::kRunning || stop.load()) {
      result.outcome = outcome == Outcome::kRunning ? Outcome::kFailure : outcome;
      break;
    }
    if (config.realtime) {
      std::this_thread::sleep_until(
          start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(state.time)));
    }
    const auto plan = plans.Latest();
    double age = 0.0;
    state = runner.Act(state, *plan, &age);
    state.time = (step + 1) * config.control_dt;
    result.max_plan_age = std::max(result.max_plan_age, age);
    result.steps = step + 1;
    estimates.Publish(
        std::make_shared<const WorldState>(runner.Estimate(state, step + 1)));
  }
  stop = true;
  planner.join();
  if (planner_error) std::rethrow_exception(planner_error);
  result.replans = replans.load();
  result.completion_time = state.time;
  result.final_state = state;
  runner.Report(&result);
  return result;
}

}  // namespace

bool IsReplanStep(int step, double period, double control_dt) {
  const double ratio = period / control_dt;
  // smallest j with floor(j * ratio) >= step
  const long j = static_cast<long>(std::ceil(step / ratio - 1e-9));
  return static_cast<long>(std::floor(j * ratio + 1e-9)) == step;
}

RolloutOptions EpisodeRolloutOptions(const EpisodeConfig& config) {
  RolloutOptions o;
  o.world = config.world;
  o.policy = config.policy;
  o.layout = config.layout;
  o.defaults = config.defaults;
  o.cost = config.cost;
  o.task = config.task;
  o.mode = config.mode == ControllerMode::kFlat ? ActionMode::kRawControls
                                                : ActionMode::kPolicy;
  o.horizon = config.planner.horizon;
  o.control_dt = config.control_dt;
  o.workers = config.workers;
  return o;
}

EpisodeResult RunEpisode(const EpisodeConfig& config) {
  return config.scheduler == Scheduler::kSynchronous ? RunSynchronous(config)
                                                     : RunAsynchronous(config);
}

EpisodeResult RunEpisodeFlat(EpisodeConfig config) {
  config.mode = ControllerMode::kFlat;
  return RunEpisode(config);
}

}  // namespace steer
