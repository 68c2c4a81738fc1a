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


#ifndef STEER_TESTS_FIXTURES_H_
#define STEER_TESTS_FIXTURES_H_

#include <Eigen/Geometry>

#include <vector>

#include "steer/cem.h"
#include "steer/site_frame.h"
#include "steer/spline.h"

namespace steer::testing {

// Synthetic frame carrying every site the task library reads, with
// distinct non-degenerate values.
inline SiteFrame CanonicalFrame() {
  SiteFrame f = WorldAxesFrame();
  f.SetPoint(sites::kObject, Vec3(1.0, 0.2, 0.3));
  f.SetPoint(sites::kGoal, Vec3(2.0, 0.5, 0.3));
  f.SetPoint(sites::kGripper, Vec3(0.8, 0.1, 0.45));
  f.SetPoint(sites::kTorso, Vec3(0.1, 0.0, 0.5));
  f.SetPoint(sites::kPelvis, Vec3(0.1, 0.0, 0.4));
  f.SetPoint(sites::kFrFoot, Vec3(0.35, -0.15, 0.0));
  f.SetPoint(sites::kFlFoot, Vec3(0.35, 0.15, 0.0));
  f.SetPoint(sites::kLeftPalm, Vec3(0.8, 0.18, 0.45));
  f.SetPoint(sites::kRightPalm, Vec3(0.8, 0.02, 0.45));
  f.SetPoint(sites::kHandle, Vec3(1.1, 0.2, 0.6));
  f.SetPoint(sites::kBottom, Vec3(1.0, 0.6, 0.1));

  const Eigen::Matrix3d obj =
      (Eigen::AngleAxisd(0.3, Vec3::UnitZ()) *
       Eigen::AngleAxisd(0.2, Vec3::UnitX()))
          .toRotationMatrix();
  f.SetAxis(sites::kObjectX, obj.col(0));
  f.SetAxis(sites::kObjectY, obj.col(1));
  f.SetAxis(sites::kObjectZ, obj.col(2));
  const Eigen::Quaterniond q(obj);
  f.SetQuat(sites::kObjectQuat, Vec4(q.w(), q.x(), q.y(), q.z()));
  f.SetQuat(sites::kUprightQuat, Vec4(1.0, 0.0, 0.0, 0.0));

  const Eigen::Matrix3d grip =
      Eigen::AngleAxisd(0.1, Vec3::UnitY()).toRotationMatrix();
  f.SetAxis(sites::kGripperX, grip.col(0));
  f.SetAxis(sites::kGripperY, grip.col(1));
  f.SetAxis(sites::kGripperZ, grip.col(2));
  const Eigen::Matrix3d robot =
      Eigen::AngleAxisd(0.05, Vec3::UnitZ()).toRotationMatrix();
  f.SetAxis(sites::kRobotX, robot.col(0));
  f.SetAxis(sites::kRobotY, robot.col(1));
  f.SetAxis(sites::kRobotZ, robot.col(2));
  f.SetAxis(sites::kBottomY, Vec3(0.0, 0.9, 0.1));

  f.SetVector(sites::kObjectVel, Vec3(0.1, 0.0, 0.0));
  f.SetVector(sites::kObjectAngVel, Vec3(0.0, 0.0, 0.2));
  f.SetVector(sites::kBottomVel, Vec3(0.0, 0.05, 0.0));
  f.SetVector(sites::kBottomAngVel, Vec3(0.1, 0.0, 0.0));
  f.SetVector(sites::kBaseVel, Vec3(0.2, 0.0, 0.1));
  SiteFrame::Value dev(6);
  dev << 0.1, -0.1, 0.0, 0.05, 0.0, 0.0;
  f.SetVector(sites::kArmDeviation, dev);

  f.SetScalar(sites::kTorsoHeight, 0.5);
  f.SetScalar(sites::kTorsoRoll, 0.02);
  f.SetScalar(sites::kTorsoPitch, -0.01);
  f.SetScalar(sites::kFallen, 0.0);
  f.SetScalar(sites::kGripperClosedCmd, 1.0);
  f.SetScalar(sites::kGripperError, 0.2);
  return f;
}

// 2-D point driven by the planned velocity from `start`; cost is the
// squared distance of the integrated endpoint from the origin
inline double SurrogateCost(const SplinePlan& plan, const Vec2& start) {
  constexpr int kSteps = 150;
  const double dt = plan.horizon() / kSteps;
  Vec2 x = start;
  for (int i = 0; i < kSteps; ++i) {
    const ActionVector a = EvaluatePlan(plan, (i + 0.5) * dt);
    x += dt * Vec2(a[0], a[1]);
  }
  return x.squaredNorm();
}

inline BatchEvaluator SurrogateEvaluator(const Vec2& start) {
  return [start](const std::vector<SplinePlan>& plans) {
    std::vector<double> costs;
    for (const SplinePlan& p : plans) costs.push_back(SurrogateCost(p, start));
    return costs;
  };
}

}  // namespace steer::testing

#endif  // STEER_TESTS_FIXTURES_H_
