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


#ifndef STEER_TUNING_H_
#define STEER_TUNING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "steer/config.h"

namespace steer {

// one weight searched log-uniformly over [lo, hi]
struct SearchDim {
  std::string name;
  double lo = 0.1;
  double hi = 10.0;
};

// the move weights over [0.1x, 10x] of their defaults for `cost_id`
std::vector<SearchDim> DefaultSearchSpace(const TaskConfig& task);

struct TuneOptions {
  int budget = 20;   // candidates evaluated
  int trials = 10;   // episodes per candidate
  uint64_t seed = 0;       // candidate stream
  uint64_t trial_seed = 0;  // episode seeds trial_seed + i for every candidate
  int workers = 1;
};

struct TunePoint {
  int evaluation = 0;
  TaskParams weights;
  double success_rate = 0.0;
  double best_so_far = 0.0;
  double wall_time = 0.0;  // cumulative seconds
};

struct TuneResult {
  TaskParams best;
  double best_success = 0.0;
  std::vector<TunePoint> curve;
};

// Candidate `index` of the stream for `seed`; it does not depend on the
// budget, so longer runs extend shorter ones.
TaskParams SampleCandidate(const std::vector<SearchDim>& space, uint64_t seed,
                           int index);

using CandidateEvaluator = std::function<double(const TaskParams&)>;

TuneResult TuneWeights(const std::vector<SearchDim>& space,
                       const TuneOptions& options,
                       const CandidateEvaluator& evaluate);

// success rate of `weights` on `task` over the option's fixed trial seeds
double EvaluateWeights(const TaskConfig& task, const TaskParams& weights,
                       const TuneOptions& options);

TuneResult TuneWeights(const TaskConfig& task, const TuneOptions& options);

// evaluation,wall_time,success_rate,best_so_far,<weight names...>
std::string FormatTuneCsv(const TuneResult& result);

}  // namespace steer

#endif  // STEER_TUNING_H_
