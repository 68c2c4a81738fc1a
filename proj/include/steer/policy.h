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

#ifndef STEER_POLICY_H_
#define STEER_POLICY_H_

#include "steer/command.h"
#include "steer/world.h"

namespace steer {

// Maps a command to joint-level controls. Implementations are stateless.
class LowLevelPolicy {
 public:
  virtual ~LowLevelPolicy() = default;

  // throws InvalidInputError on non-finite state or command
  virtual JointControls Step(const RobotState& robot,
                             const CommandVector& command) const = 0;

  virtual double control_period() const { return 0.02; }
};

struct TrackingGains {
  double base_vel = 8.0;
  double yaw_rate = 8.0;
  double arm_kp = 100.0;
  double arm_kd = 20.0;
  double leg_kp = 100.0;
  double leg_kd = 20.0;
  double torso_kp = 60.0;
  double torso_kd = 15.0;
  double pendulum_gain = 9.0;  // gravity compensation of the torso model
};

// Velocity-tracking reference controller: proportional base velocity
// tracking, PD joint tracking and gravity-compensated PD torso stabilization.
class TrackingPolicy : public LowLevelPolicy {
 public:
  explicit TrackingPolicy(TrackingGains gains = {},
                          ActuatorLimits limits = {});

  JointControls Step(const RobotState& robot,
                     const CommandVector& command) const override;

  const TrackingGains& gains() const { return gains_; }

 private:
  TrackingGains gains_;
  ActuatorLimits limits_;
};

// Copies the flattened command into the controls unchanged (clamped), used
// to measure the cost of the policy in the loop.
class PassThroughPolicy : public LowLevelPolicy {
 public:
  explicit PassThroughPolicy(ActuatorLimits limits = {}) : limits_(limits) {}

  JointControls Step(const RobotState& robot,
                     const CommandVector& command) const override;

 private:
  ActuatorLimits limits_;
};

}  // namespace steer

#endif  // STEER_POLICY_H_
