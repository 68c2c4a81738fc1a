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

#ifndef STEER_CEM_H_
#define STEER_CEM_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "steer/command.h"
#include "steer/rollout.h"
#include "steer/spline.h"

namespace steer {

enum class EliteWeighting {
  kUniform,      // plain elite mean
  kExponential,  // softmax of -cost / temperature over the elites
};

struct CemConfig {
  int num_samples = 32;
  int num_elites = 3;
  NoiseSchedule noise;
  bool include_nominal = true;
  uint64_t seed = 0;
  EliteWeighting weighting = EliteWeighting::kUniform;
  double temperature = 1.0;

  void Validate() const;
};

struct PlanCandidate {
  SplinePlan plan;
  double cost = 0.0;
  int sample_index = 0;
};

// Perturbs every knot with N(0, std(t_k)) noise and clamps to `bounds`.
// Noise draws depend only on (seed, iteration, sample, knot, dim).
std::vector<SplinePlan> SamplePopulation(const SplinePlan& nominal,
                                         const CemConfig& config,
                                         const std::vector<Bound>& bounds,
                                         uint64_t iteration);

// k lowest-cost candidates, ties broken by sample index
std::vector<PlanCandidate> SelectElites(std::vector<PlanCandidate> candidates,
                                        int k);

// knot-wise unweighted mean
SplinePlan UpdateNominal(const std::vector<PlanCandidate>& elites);

// knot-wise mean weighted by exp(-(cost - min) / temperature)
SplinePlan UpdateNominalWeighted(const std::vector<PlanCandidate>& elites,
                                 double temperature);

using BatchEvaluator =
    std::function<std::vector<double>(const std::vector<SplinePlan>&)>;

struct IterationResult {
  SplinePlan nominal;
  PlanCandidate best;
};

// One sample / evaluate / select / refit cycle. Non-finite costs count as
// failed rollouts; RolloutError is raised only when every rollout failed.
IterationResult PlanIteration(const SplinePlan& nominal,
                              const CemConfig& config,
                              const std::vector<Bound>& bounds,
                              const BatchEvaluator& evaluate,
                              uint64_t iteration);

IterationResult PlanIteration(const WorldState& state,
                              const SplinePlan& nominal,
                              const RolloutEngine& engine,
                              const CemConfig& config, uint64_t iteration);

}  // namespace steer

#endif  // STEER_CEM_H_
