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

#include <gtest/gtest.h>

namespace steer {
namespace {

TEST(TrackingPolicy, AtSetpointGivesZero) {
  const TrackingPolicy policy;
  RobotState r;
  r.arm_joints << 0.1, -0.2, 0.3, 0.0, 0.1, 0.0;
  CommandVector c;
  c.arm_targets = r.arm_joints;
  c.torso_pose = r.torso;
  c.gripper_pos = 0.0;
  EXPECT_EQ(policy.Step(r, c).u, JointControls::Vector::Zero());
}

TEST(TrackingPolicy, BaseVelocitySign) {
  const TrackingGains gains;
  const TrackingPolicy policy(gains);
  RobotState r;
  CommandVector c;
  c.torso_pose = r.torso;
  c.base_vel = Vec3(0.2, 0.0, 0.0);
  const JointControls u = policy.Step(r, c);
  EXPECT_GT(u.base().x(), 0.0);
  EXPECT_DOUBLE_EQ(u.base().x(), gains.base_vel * 0.2);
  EXPECT_EQ(u.base().y(), 0.0);
}

TEST(TrackingPolicy, Saturates) {
  const ActuatorLimits limits;
  const TrackingPolicy policy(TrackingGains{}, limits);
  RobotState r;
  CommandVector c;
  c.torso_pose = r.torso;
  c.arm_targets[0] = 100.0;
  c.arm_targets[1] = -100.0;
  const JointControls u = policy.Step(r, c);
  EXPECT_EQ(u.arm()[0], limits.arm);
  EXPECT_EQ(u.arm()[1], -limits.arm);
}

TEST(TrackingPolicy, RejectsNonFinite) {
  const TrackingPolicy policy;
  RobotState r;
  r.base_vel.x() = std::nan("");
  EXPECT_THROW(policy.Step(r, CommandVector{}), InvalidInputError);
  RobotState ok;
  CommandVector bad;
  bad.arm_targets[2] = INFINITY;
  EXPECT_THROW(policy.Step(ok, bad), InvalidInputError);
}

TEST(TrackingPolicy, CompensatesTorsoPendulum) {
  // with the torso tilted and the command at the tilt, the control cancels
  // the pendulum term exactly
  TrackingGains gains;
  const TrackingPolicy policy(gains);
  RobotState r;
  r.torso.x() = 0.2;
  CommandVector c;
  c.torso_pose = r.torso;
  const JointControls u = policy.Step(r, c);
  EXPECT_NEAR(u.torso()[0], -gains.pendulum_gain * std::sin(0.2), 1e-15);
}

TEST(PassThroughPolicy, CopiesCommand) {
  const PassThroughPolicy policy;
  CommandVector c;
  c.base_vel = Vec3(0.5, -0.5, 0.1);
  c.gripper_pos = 0.5;
  const JointControls u = policy.Step(RobotState{}, c);
  EXPECT_EQ(u.u, c.Flatten());
}

}  // namespace
}  // namespace steer
