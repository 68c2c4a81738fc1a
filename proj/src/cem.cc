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

#include "steer/cem.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steer/rng.h"

namespace steer {

void CemConfig::Validate() const {
  if (num_samples < 1 || num_elites < 1 || num_elites > num_samples) {
    throw ConfigError("need 1 <= elites <= samples");
  }
  if (!(noise.std_lo >= 0.0 && noise.std_hi >= noise.std_lo)) {
    throw ConfigError("need 0 <= std_lo <= std_hi");
  }
  if (weighting == EliteWeighting::kExponential && !(temperature > 0.0)) {
    throw ConfigError("exponential weighting needs a positive temperature");
  }
}

std::vector<SplinePlan> SamplePopulation(const SplinePlan& nominal,
                                         const CemConfig& config,
                                         const std::vector<Bound>& bounds,
                                         uint64_t iteration) {
  if (nominal.NumKnots() == 0) throw StructuralError("empty nominal plan");
  if (static_cast<int>(bounds.size()) != nominal.Dim()) {
    throw LayoutError("bounds do not match the plan dimension");
  }
  NoiseSchedule schedule = config.noise;
  schedule.horizon = nominal.horizon();
  const CounterRng rng(config.seed);
  std::vector<SplinePlan> population;
  population.reserve(config.num_samples);
  for (int s = 0; s < config.num_samples; ++s) {
    SplinePlan plan = nominal;
    const bool keep = config.include_nominal && s == 0;
    for (int k = 0; k < plan.NumKnots(); ++k) {
      ActionVector& knot = plan.knot(k);
      const double sigma = NoiseStdAt(schedule, plan.knot_times()[k]);
      for (int d = 0; d < knot.size(); ++d) {
        if (!keep && sigma > 0.0) {
          knot[d] += sigma * rng.Normal({iteration, static_cast<uint64_t>(s),
                                         static_cast<uint64_t>(k),
                                         static_cast<uint64_t>(d)});
        }
        knot[d] = std::clamp(knot[d], bounds[d].lower, bounds[d].upper);
      }
    }
    population.push_back(std::move(plan));
  }
  return population;
}

std::vector<PlanCandidate> SelectElites(std::vector<PlanCandidate> candidates,
                                        int k) {
  if (candidates.empty()) throw StructuralError("empty population");
  if (k < 1 || k > static_cast<int>(candidates.size())) {
    throw StructuralError("elite count out of range");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const PlanCandidate& a, const PlanCandidate& b) {
                     if (a.cost != b.cost) return a.cost < b.cost;
                     return a.sample_index < b.sample_index;
                   });
  candidates.resize(k);
  return candidates;
}

namespace {

SplinePlan WeightedMean(const std::vector<PlanCandidate>& elites,
                        const std::vector<double>& weights) {
  if (elites.empty()) throw StructuralError("no elites to average");
  SplinePlan mean = elites.front().plan;
  for (const PlanCandidate& e : elites) {
    if (!e.plan.SameShape(mean)) {
      throw StructuralError("elite plans differ in shape");
    }
  }
  for (int k = 0; k < mean.NumKnots(); ++k) {
    ActionVector sum = ActionVector::Zero(mean.Dim());
    double total = 0.0;
    for (size_t i = 0; i < elites.size(); ++i) {
      sum += weights[i] * elites[i].plan.knot(k);
      total += weights[i];
    }
    mean.knot(k) = sum / total;
  }
  return mean;
}

}  // namespace

SplinePlan UpdateNominal(const std::vector<PlanCandidate>& elites) {
  return WeightedMean(elites, std::vector<double>(elites.size(), 1.0));
}

SplinePlan UpdateNominalWeighted(const std::vector<PlanCandidate>& elites,
                                 double temperature) {
  if (elites.empty()) throw StructuralError("no elites to average");
  double lowest = std::numeric_limits<double>::infinity();
  for (const PlanCandidate& e : elites) lowest = std::min(lowest, e.cost);
  std::vector<double> weights;
  weights.reserve(elites.size());
  for (const PlanCandidate& e : elites) {
    weights.push_back(std::isfinite(e.cost)
                          ? std::exp(-(e.cost - lowest) / temperature)
                          : 0.0);
  }
  return WeightedMean(elites, weights);
}

IterationResult PlanIteration(const SplinePlan& nominal,
                              const CemConfig& config,
                              const std::vector<Bound>& bounds,
                              const BatchEvaluator& evaluate,
                              uint64_t iteration) {
  config.Validate();
  std::vector<SplinePlan> population =
      SamplePopulation(nominal, config, bounds, iteration);
  const std::vector<double> costs = evaluate(population);
  if (costs.size() != population.size()) {
    throw StructuralError("evaluator returned the wrong number of costs");
  }
  std::vector<PlanCandidate> candidates;
  candidates.reserve(population.size());
  bool any_finite = false;
  for (size_t i = 0; i < population.size(); ++i) {
    const double c = std::isfinite(costs[i])
                         ? costs[i]
                         : std::numeric_limits<double>::infinity();
    any_finite = any_finite || std::isfinite(c);
    candidates.push_back({std::move(population[i]), c, static_cast<int>(i)});
  }
  if (!any_finite) throw RolloutError("every rollout in the population failed");

  std::vector<PlanCandidate> elites =
      SelectElites(std::move(candidates), config.num_elites);
  // failed rollouts never enter the mean
  std::vector<PlanCandidate> finite;
  for (const PlanCandidate& e : elites) {
    if (std::isfinite(e.cost)) finite.push_back(e);
  }
  IterationResult result;
  result.best = elites.front();
  result.nominal = config.weighting == EliteWeighting::kUniform
                       ? UpdateNominal(finite)
                       : UpdateNominalWeighted(finite, config.temperature);
  return result;
}

IterationResult PlanIteration(const WorldState& state,
                              const SplinePlan& nominal,
                              const RolloutEngine& engine,
                              const CemConfig& config, uint64_t iteration) {
  return PlanIteration(
      nominal, config, engine.ActionBounds(),
      [&](const std::vector<SplinePlan>& plans) {
        return engine.BatchCosts(state, plans);
      },
      iteration);
}

}  // namespace steer
