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

#ifndef STEER_SITE_FRAME_H_
#define STEER_SITE_FRAME_H_

#include <string>
#include <string_view>
#include <vector>

#include "steer/types.h"

namespace steer {

// Interned site identifier. Interning is thread-safe; lookups by id are not
// synchronized and never need to be.
using SiteId = int;

SiteId InternSite(std::string_view name);
const std::string& SiteName(SiteId id);
// -1 when the name was never interned
SiteId FindSite(std::string_view name);

// well-known sites produced by the worlds and used by the task library
namespace sites {
// points
inline const SiteId kObject = InternSite("object");
inline const SiteId kGoal = InternSite("goal");
inline const SiteId kGripper = InternSite("gripper");
inline const SiteId kTorso = InternSite("torso");
inline const SiteId kPelvis = InternSite("pelvis");
inline const SiteId kFrFoot = InternSite("fr_foot");
inline const SiteId kFlFoot = InternSite("fl_foot");
inline const SiteId kLeftPalm = InternSite("left_palm");
inline const SiteId kRightPalm = InternSite("right_palm");
inline const SiteId kHandle = InternSite("handle");
inline const SiteId kBottom = InternSite("bottom");
// axes
inline const SiteId kObjectX = InternSite("object.x");
inline const SiteId kObjectY = InternSite("object.y");
inline const SiteId kObjectZ = InternSite("object.z");
inline const SiteId kGripperX = InternSite("gripper.x");
inline const SiteId kGripperY = InternSite("gripper.y");
inline const SiteId kGripperZ = InternSite("gripper.z");
inline const SiteId kRobotX = InternSite("robot.x");
inline const SiteId kRobotY = InternSite("robot.y");
inline const SiteId kRobotZ = InternSite("robot.z");
inline const SiteId kWorldX = InternSite("world.x");
inline const SiteId kWorldY = InternSite("world.y");
inline const SiteId kWorldZ = InternSite("world.z");
inline const SiteId kBottomY = InternSite("bottom.y");
// vectors
inline const SiteId kObjectVel = InternSite("object.vel");
inline const SiteId kObjectAngVel = InternSite("object.angvel");
inline const SiteId kBottomVel = InternSite("bottom.vel");
inline const SiteId kBottomAngVel = InternSite("bottom.angvel");
inline const SiteId kBaseVel = InternSite("base.vel");
inline const SiteId kArmDeviation = InternSite("arm.deviation");
// quaternions (w, x, y, z)
inline const SiteId kObjectQuat = InternSite("object.quat");
inline const SiteId kUprightQuat = InternSite("upright.quat");
// scalars
inline const SiteId kTorsoHeight = InternSite("torso.height");
inline const SiteId kTorsoRoll = InternSite("torso.roll");
inline const SiteId kTorsoPitch = InternSite("torso.pitch");
inline const SiteId kFallen = InternSite("robot.fallen");
inline const SiteId kGripperClosedCmd = InternSite("gripper.closed_cmd");
inline const SiteId kGripperError = InternSite("gripper.error");
}  // namespace sites

enum class SlotKind : unsigned char { kNone, kPoint, kAxis, kVector, kScalar, kQuat };

// Named geometric quantities of one world state. Unit axes are normalized on
// insertion.
class SiteFrame {
 public:
  using Value = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

  void SetPoint(SiteId id, const Vec3& p);
  void SetAxis(SiteId id, const Vec3& axis);
  void SetVector(SiteId id, const Value& v);
  void SetScalar(SiteId id, double s);
  void SetQuat(SiteId id, const Vec4& q);

  bool Has(SiteId id) const;
  SlotKind Kind(SiteId id) const;

  // accessors throw SiteResolutionError when the site is absent
  Vec3 Point(SiteId id) const;
  Vec3 Axis(SiteId id) const;
  const Value& Vector(SiteId id) const;
  double Scalar(SiteId id) const;
  Vec4 Quat(SiteId id) const;

  std::vector<SiteId> Present() const;

 private:
  struct Slot {
    SlotKind kind = SlotKind::kNone;
    Value value;
  };
  Slot& Mutable(SiteId id);
  const Slot& Require(SiteId id, SlotKind kind) const;

  std::vector<Slot> slots_;
};

// frame with only the fixed world axes
SiteFrame WorldAxesFrame();

}  // namespace steer

#endif  // STEER_SITE_FRAME_H_
