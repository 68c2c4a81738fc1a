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

#ifndef STEER_FILTER_H_
#define STEER_FILTER_H_

#include <vector>

#include "steer/world.h"

namespace steer {

struct FilterChannel {
  double cutoff_hz = 20.0;
  // fixed smoothing coefficient in (0, 1]; overrides the cutoff when set
  double beta = 0.0;
  bool slow = false;   // updated only when a slow sample arrives
  bool angle = false;  // innovations wrapped to (-pi, pi]
};

struct FilterState {
  Eigen::VectorXd estimate;
  std::vector<FilterChannel> channels;
  bool initialized = false;
};

// 1 - exp(-2 pi f dt); infinite cutoff gives 1
double SmoothingCoefficient(double cutoff_hz, double dt);

// First-order low-pass per channel. Fast channels take `fast`, slow channels
// take `slow` when present and hold otherwise. An uninitialized filter
// copies the samples.
FilterState FuseState(FilterState filter, const Eigen::VectorXd& fast,
                      const Eigen::VectorXd* slow, double dt);

// channel vector of a world state: joint-space channels first, then poses
Eigen::VectorXd PackState(const WorldState& state);
// inverse of PackState on top of `reference` (time, flags); derived fields
// are recomputed by the world
WorldState UnpackState(const World& world, const Eigen::VectorXd& channels,
                       const WorldState& reference);
// fast joint-space channels at `fast_hz`, pose channels at `slow_hz`
std::vector<FilterChannel> StateChannels(double fast_hz, double slow_hz);

// filter seeded with a state estimate
FilterState MakeStateFilter(const WorldState& state, double fast_hz,
                            double slow_hz);

}  // namespace steer

#endif  // STEER_FILTER_H_
