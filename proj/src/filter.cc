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

#include "steer/filter.h"

#include <cmath>
#include <numbers>

namespace steer {
namespace {

// joint-space block sizes, then pose block sizes
constexpr int kFastSize = 3 + 6 + 6 + 2 + 3 + 3 + 12 + 12;
constexpr int kSlowSize = 3 + 3 + 3 + 2;

double Wrap(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

}  // namespace

double SmoothingCoefficient(double cutoff_hz, double dt) {
  if (!(dt > 0.0)) throw InvalidInputError("filter dt must be positive");
  if (std::isinf(cutoff_hz)) return 1.0;
  return 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz * dt);
}

FilterState FuseState(FilterState filter, const Eigen::VectorXd& fast,
                      const Eigen::VectorXd* slow, double dt) {
  const int n = static_cast<int>(filter.channels.size());
  if (fast.size() != n || (slow != nullptr && slow->size() != n)) {
    throw InvalidInputError("filter sample size mismatch");
  }
  if (!(dt > 0.0)) throw InvalidInputError("filter dt must be positive");
  if (!filter.initialized) {
    filter.estimate = fast;
    if (slow != nullptr) {
      for (int i = 0; i < n; ++i) {
        if (filter.channels[i].slow) filter.estimate[i] = (*slow)[i];
      }
    }
    filter.initialized = true;
    return filter;
  }
  for (int i = 0; i < n; ++i) {
    const FilterChannel& ch = filter.channels[i];
    if (ch.slow && slow == nullptr) continue;
    const double sample = ch.slow ? (*slow)[i] : fast[i];
    const double beta =
        ch.beta > 0.0 ? ch.beta : SmoothingCoefficient(ch.cutoff_hz, dt);
    double innovation = sample - filter.estimate[i];
    if (ch.angle) innovation = Wrap(innovation);
    if (beta == 1.0 && !ch.angle) {
      filter.estimate[i] = sample;
    } else {
      filter.estimate[i] += beta * innovation;
    }
  }
  return filter;
}

Eigen::VectorXd PackState(const WorldState& s) {
  const RobotState& r = s.robot;
  const ObjectState& o = s.object;
  Eigen::VectorXd v(kFastSize + kSlowSize);
  v << r.base_vel, r.arm_joints, r.arm_vel, r.gripper_pos, r.gripper_target,
      r.torso, r.torso_rate, r.leg_joints, r.leg_vel, r.base_pose, o.pose,
      o.vel, o.theta, o.theta_rate;
  return v;
}

WorldState UnpackState(const World& world, const Eigen::VectorXd& v,
                       const WorldState& reference) {
  if (v.size() != kFastSize + kSlowSize) {
    throw InvalidInputError("state channel vector has the wrong size");
  }
  WorldState s = reference;
  RobotState& r = s.robot;
  ObjectState& o = s.object;
  int i = 0;
  auto take = [&](auto& block) {
    block = v.segment(i, block.size());
    i += static_cast<int>(block.size());
  };
  take(r.base_vel);
  take(r.arm_joints);
  take(r.arm_vel);
  r.gripper_pos = v[i++];
  r.gripper_target = v[i++];
  take(r.torso);
  take(r.torso_rate);
  take(r.leg_joints);
  take(r.leg_vel);
  take(r.base_pose);
  take(o.pose);
  take(o.vel);
  o.theta = v[i++];
  o.theta_rate = v[i++];
  world.RefreshDerived(&s);
  return s;
}

std::vector<FilterChannel> StateChannels(double fast_hz, double slow_hz) {
  std::vector<FilterChannel> channels(kFastSize + kSlowSize);
  for (int i = 0; i < kFastSize; ++i) channels[i].cutoff_hz = fast_hz;
  for (int i = kFastSize; i < kFastSize + kSlowSize; ++i) {
    channels[i].cutoff_hz = slow_hz;
    channels[i].slow = true;
  }
  // base yaw and object yaw
  channels[kFastSize + 2].angle = true;
  channels[kFastSize + 5].angle = true;
  return channels;
}

FilterState MakeStateFilter(const WorldState& state, double fast_hz,
                            double slow_hz) {
  FilterState f;
  f.channels = StateChannels(fast_hz, slow_hz);
  f.estimate = PackState(state);
  f.initialized = true;
  return f;
}

}  // namespace steer
