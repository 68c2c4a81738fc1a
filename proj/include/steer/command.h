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

#ifndef STEER_COMMAND_H_
#define STEER_COMMAND_H_

#include <array>
#include <vector>

#include "steer/types.h"

namespace steer {

// Command consumed by the low-level policy. Leg targets are ordered
// [FL(3), FR(3), HL(3), HR(3)]; torso is (pitch, roll, height).
struct CommandVector {
  static constexpr int kDim = 25;

  Vec3 base_vel = Vec3::Zero();
  Vec6 arm_targets = Vec6::Zero();
  double gripper_pos = 0.0;
  Vec12 leg_targets = Vec12::Zero();
  Vec3 torso_pose = Vec3::Zero();

  Eigen::Matrix<double, kDim, 1> Flatten() const;
  bool IsFinite() const;
};

struct Bound {
  double lower = -1.0;
  double upper = 1.0;
};

enum class ActionBlock { kBase, kArm, kTorso, kLeg, kGripper };

inline constexpr int BlockDim(ActionBlock block) {
  switch (block) {
    case ActionBlock::kBase:
      return 3;
    case ActionBlock::kArm:
      return 6;
    case ActionBlock::kTorso:
      return 3;
    case ActionBlock::kLeg:
      return 7;
    case ActionBlock::kGripper:
      return 1;
  }
  return 0;
}

// per-block bounds used to build a layout's per-dimension bounds
struct BlockBounds {
  std::array<Bound, 3> base = {{{-1.0, 1.0}, {-1.0, 1.0}, {-1.5, 1.5}}};
  std::array<Bound, 6> arm = {{{-1.2, 1.2},
                               {-2.4, 2.4},
                               {-1.2, 1.2},
                               {-1.0, 1.0},
                               {-1.0, 1.0},
                               {-1.0, 1.0}}};
  std::array<Bound, 3> torso = {{{-0.3, 0.3}, {-0.3, 0.3}, {0.35, 0.6}}};
  // selection variable followed by six front-leg joint targets
  std::array<Bound, 7> leg = {{{-1.0, 1.0},
                               {-1.5, 1.5},
                               {-1.5, 1.5},
                               {-1.5, 1.5},
                               {-1.5, 1.5},
                               {-1.5, 1.5},
                               {-1.5, 1.5}}};
  Bound gripper = {-1.0, 1.0};
};

// The planner's action subspace. Blocks appear in the fixed order
// [base, arm, torso, leg, gripper]; absent blocks are skipped.
class ActionLayout {
 public:
  struct Flags {
    bool base = true;
    bool arm = true;
    bool torso = false;
    bool leg = false;
    bool gripper = false;
  };

  ActionLayout() : ActionLayout(Flags{}, BlockBounds{}) {}
  ActionLayout(const Flags& flags, const BlockBounds& bounds);

  // layout with explicit per-dimension bounds (size must equal Dim())
  ActionLayout(const Flags& flags, std::vector<Bound> bounds);

  const Flags& flags() const { return flags_; }
  bool Has(ActionBlock block) const;
  int Dim() const { return dim_; }
  // offset of a block inside the action vector, -1 when absent
  int Offset(ActionBlock block) const;
  const std::vector<Bound>& bounds() const { return bounds_; }

  // clamps every dimension into its bounds
  void Clamp(ActionVector& action) const;

 private:
  void Validate() const;

  Flags flags_;
  std::vector<Bound> bounds_;
  std::array<int, 5> offsets_{};
  int dim_ = 0;
};

// Padding values for blocks the planner does not sample.
struct CommandDefaults {
  Vec3 default_torso = Vec3(0.0, 0.0, 0.5);
  Vec6 default_arm = Vec6::Zero();
  double default_gripper = 1.0;
  Vec12 default_leg = Vec12::Zero();
  double gripper_open = 0.0;
  double gripper_close = 1.0;
};

// Three-way front-leg selection: s < -0.5 keeps FL joints, s > 0.5 keeps FR
// joints, otherwise no leg is used.
Vec6 MaskLegCommand(const Eigen::Matrix<double, 7, 1>& leg_action);

// Binary gripper: strictly positive action closes, anything else opens.
double MapGripper(double action, double open_pos, double close_pos);

// Pads a sampled action into the full 25-dim policy command.
CommandVector AssembleCommand(const ActionVector& action,
                              const ActionLayout& layout,
                              const CommandDefaults& defaults);

// Action whose assembly reproduces the defaults (zero base velocity, default
// arm and torso, no leg, gripper closed). Used to seed plans.
ActionVector NeutralAction(const ActionLayout& layout,
                           const CommandDefaults& defaults);

}  // namespace steer

#endif  // STEER_COMMAND_H_
