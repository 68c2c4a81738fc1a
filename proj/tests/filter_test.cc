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

#include <gtest/gtest.h>

namespace steer {
namespace {

FilterState Scalar(double beta, bool slow = false, bool angle = false) {
  FilterState f;
  FilterChannel ch;
  ch.beta = beta;
  ch.slow = slow;
  ch.angle = angle;
  f.channels = {ch};
  f.estimate = Eigen::VectorXd::Zero(1);
  f.initialized = true;
  return f;
}

TEST(Filter, StepResponseMatchesGeometricSeries) {
  const double beta = 0.3;
  FilterState f = Scalar(beta);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  for (int n = 1; n <= 20; ++n) {
    f = FuseState(std::move(f), one, nullptr, 0.02);
    EXPECT_NEAR(f.estimate[0], 1.0 - std::pow(1.0 - beta, n), 1e-12);
  }
}

TEST(Filter, UnitBetaPassesThrough) {
  FilterState f = Scalar(1.0);
  Eigen::VectorXd x(1);
  for (double v : {0.3, -2.0, 7.5}) {
    x[0] = v;
    f = FuseState(std::move(f), x, nullptr, 0.02);
    EXPECT_EQ(f.estimate[0], v);
  }
}

TEST(Filter, SlowChannelHoldsWithoutSample) {
  FilterState f = Scalar(0.5, true);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  f = FuseState(std::move(f), one, nullptr, 0.02);
  EXPECT_EQ(f.estimate[0], 0.0);
  f = FuseState(std::move(f), one, &one, 0.02);
  EXPECT_DOUBLE_EQ(f.estimate[0], 0.5);
}

TEST(Filter, AngleInnovationWraps) {
  FilterState f = Scalar(0.5, false, true);
  f.estimate[0] = 3.0;
  Eigen::VectorXd x(1);
  x[0] = -3.0;  // 2 pi - 6 ahead, not 6 behind
  f = FuseState(std::move(f), x, nullptr, 0.02);
  EXPECT_NEAR(f.estimate[0], 3.0 + 0.5 * (2.0 * std::numbers::pi - 6.0), 1e-12);
}

TEST(Filter, UninitializedCopiesSamples) {
  FilterState f = Scalar(0.1);
  f.initialized = false;
  Eigen::VectorXd x(1);
  x[0] = 4.0;
  f = FuseState(std::move(f), x, nullptr, 0.02);
  EXPECT_TRUE(f.initialized);
  EXPECT_EQ(f.estimate[0], 4.0);
}

TEST(Filter, CoefficientClosedForm) {
  EXPECT_NEAR(SmoothingCoefficient(10.0, 0.02),
              1.0 - std::exp(-2.0 * std::numbers::pi * 0.2), 1e-15);
  EXPECT_EQ(SmoothingCoefficient(INFINITY, 0.02), 1.0);
  EXPECT_THROW(SmoothingCoefficient(10.0, 0.0), InvalidInputError);
}

TEST(Filter, RejectsSizeMismatch) {
  FilterState f = Scalar(0.5);
  EXPECT_THROW(FuseState(f, Eigen::VectorXd::Zero(2), nullptr, 0.02),
               InvalidInputError);
}

TEST(Filter, PackUnpackRoundTrip) {
  const PushWorld world;
  WorldState s = world.MakeState(Vec3(0.1, -0.2, 0.3), Vec3(1.2, 0.1, 0.4));
  s.robot.arm_joints << 0.1, 0.2, -0.3, 0.0, 0.05, 0.0;
  s.robot.base_vel << 0.2, 0.0, 0.1;
  world.RefreshDerived(&s);
  const WorldState back = UnpackState(world, PackState(s), s);
  EXPECT_EQ(PackState(back), PackState(s));
  EXPECT_EQ(back.robot.effector_pos, s.robot.effector_pos);
}

}  // namespace
}  // namespace steer
