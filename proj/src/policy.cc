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

#include "steer/policy.h"

#include <cmath>

namespace steer {
namespace {

bool RobotFinite(const RobotState& r) {
  return r.base_pose.allFinite() && r.base_vel.allFinite() &&
         r.arm_joints.allFinite() && r.arm_vel.allFinite() &&
         r.torso.allFinite() && r.torso_rate.allFinite() &&
         r.leg_joints.allFinite() && r.leg_vel.allFinite();
}

}  // namespace

TrackingPolicy::TrackingPolicy(TrackingGains gains, ActuatorLimits limits)
    : gains_(gains), limits_(limits) {}

JointControls TrackingPolicy::Step(const RobotState& robot,
                                   const CommandVector& command) const {
  if (!RobotFinite(robot) || !command.IsFinite()) {
    throw InvalidInputError("policy input is not finite");
  }
  const TrackingGains& g = gains_;
  JointControls c;
  c.base().head<2>() =
      g.base_vel * (command.base_vel.head<2>() - robot.base_vel.head<2>());
  c.base()[2] = g.yaw_rate * (command.base_vel[2] - robot.base_vel[2]);
  c.arm() = g.arm_kp * (command.arm_targets - robot.arm_joints) -
            g.arm_kd * robot.arm_vel;
  c.gripper() = command.gripper_pos;
  c.legs() = g.leg_kp * (command.leg_targets - robot.leg_joints) -
             g.leg_kd * robot.leg_vel;
  for (int i = 0; i < 2; ++i) {
    c.torso()[i] = -g.pendulum_gain * std::sin(robot.torso[i]) +
                   g.torso_kp * (command.torso_pose[i] - robot.torso[i]) -
                   g.torso_kd * robot.torso_rate[i];
  }
  c.torso()[2] = g.torso_kp * (command.torso_pose[2] - robot.torso[2]) -
                 g.torso_kd * robot.torso_rate[2];
  return limits_.Clamp(c);
}

JointControls PassThroughPolicy::Step(const RobotState& robot,
                                      const CommandVector& command) const {
  if (!RobotFinite(robot) || !command.IsFinite()) {
    throw InvalidInputError("policy input is not finite");
  }
  JointControls c;
  c.u = command.Flatten();
  return limits_.Clamp(c);
}

}  // namespace steer
