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


#include "steer/tuning.h"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "steer/benchmark.h"
#include "steer/rng.h"
#include "steer/thread_pool.h"

namespace steer {

std::vector<SearchDim> DefaultSearchSpace(const TaskConfig& task) {
  const TaskParams defaults = DefaultTaskParams(task.cost_id);
  std::vector<SearchDim> space;
  for (const char* name : {"w_goal", "w_gripper", "w_vel", "w_upright"}) {
    auto it = defaults.find(name);
    if (it == defaults.end()) continue;
    double center = it->second;
    auto set = task.weights.find(name);
    if (set != task.weights.end()) center = set->second;
    if (!(center > 0.0)) continue;
    space.push_back({name, 0.1 * center, 10.0 * center});
  }
  return space;
}

TaskParams SampleCandidate(const std::vector<SearchDim>& space, uint64_t seed,
                           int index) {
  const CounterRng rng(seed);
  TaskParams out;
  for (size_t d = 0; d < space.size(); ++d) {
    const SearchDim& dim = space[d];
    if (!(dim.lo > 0.0) || !(dim.hi >= dim.lo)) {
      throw ConfigError("search range for '" + dim.name +
                        "' must satisfy 0 < lo <= hi");
    }
    const double u = rng.Uniform({0x7475, static_cast<uint64_t>(index), d});
    out[dim.name] = std::exp(std::log(dim.lo) +
                             u * (std::log(dim.hi) - std::log(dim.lo)));
  }
  return out;
}

TuneResult TuneWeights(const std::vector<SearchDim>& space,
                       const TuneOptions& options,
                       const CandidateEvaluator& evaluate) {
  if (options.budget < 1) throw ConfigError("tuning budget must be >= 1");
  if (options.trials < 1) throw ConfigError("tuning trials must be >= 1");
  TuneResult result;
  result.best_success = -1.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < options.budget; ++i) {
    TunePoint point;
    point.evaluation = i;
    point.weights = SampleCandidate(space, options.seed, i);
    point.success_rate = evaluate(point.weights);
    if (point.success_rate > result.best_success) {
      result.best_success = point.success_rate;
      result.best = point.weights;
    }
    point.best_so_far = result.best_success;
    point.wall_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    result.curve.push_back(std::move(point));
  }
  return result;
}

double EvaluateWeights(const TaskConfig& task, const TaskParams& weights,
                       const TuneOptions& options) {
  TaskConfig candidate = task;
  for (const auto& [name, value] : weights) candidate.weights[name] = value;
  std::vector<int> success(options.trials, 0);
  ThreadPool pool(std::max(1, options.workers));
  pool.ParallelFor(options.trials, [&](int t) {
    try {
      const EpisodeResult r = RunEpisode(candidate.MakeEpisode(
          ControllerMode::kHierarchical, options.trial_seed + t));
      success[t] = r.outcome == Outcome::kSuccess;
    } catch (const ConfigError&) {
      throw;
    } catch (const Error&) {
      success[t] = 0;
    }
  });
  const int successes = std::accumulate(success.begin(), success.end(), 0);
  return static_cast<double>(successes) / options.trials;
}

TuneResult TuneWeights(const TaskConfig& task, const TuneOptions& options) {
  return TuneWeights(DefaultSearchSpace(task), options,
                     [&](const TaskParams& weights) {
                       return EvaluateWeights(task, weights, options);
                     });
}

std::string FormatTuneCsv(const TuneResult& result) {
  std::string out = "evaluation,wall_time,success_rate,best_so_far";
  if (!result.curve.empty()) {
    for (const auto& [name, value] : result.curve.front().weights) {
      out += "," + name;
    }
  }
  out += "\n";
  for (const TunePoint& p : result.curve) {
    out += std::to_string(p.evaluation) + "," + FormatDouble(p.wall_time) +
           "," + FormatDouble(p.success_rate) + "," +
           FormatDouble(p.best_so_far);
    for (const auto& [name, value] : p.weights) out += "," + FormatDouble(value);
    out += "\n";
  }
  return out;
}

}  // namespace steer
