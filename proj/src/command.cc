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

#include "steer/command.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace steer {

Eigen::Matrix<double, CommandVector::kDim, 1> CommandVector::Flatten() const {
  Eigen::Matrix<double, kDim, 1> out;
  out << base_vel, arm_targets, gripper_pos, leg_targets, torso_pose;
  return out;
}

bool CommandVector::IsFinite() const { return Flatten().allFinite(); }

namespace {

constexpr std::array<ActionBlock, 5> kBlockOrder = {
    ActionBlock::kBase, ActionBlock::kArm, ActionBlock::kTorso,
    ActionBlock::kLeg, ActionBlock::kGripper};

bool FlagFor(const ActionLayout::Flags& flags, ActionBlock block) {
  switch (block) {
    case ActionBlock::kBase:
      return flags.base;
    case ActionBlock::kArm:
      return flags.arm;
    case ActionBlock::kTorso:
      return flags.torso;
    case ActionBlock::kLeg:
      return flags.leg;
    case ActionBlock::kGripper:
      return flags.gripper;
  }
  return false;
}

template <size_t N>
void Append(std::vector<Bound>& out, const std::array<Bound, N>& src) {
  out.insert(out.end(), src.begin(), src.end());
}

}  // namespace

ActionLayout::ActionLayout(const Flags& flags, const BlockBounds& bounds)
    : flags_(flags) {
  offsets_.fill(-1);
  for (ActionBlock block : kBlockOrder) {
    if (!FlagFor(flags_, block)) continue;
    offsets_[static_cast<int>(block)] = dim_;
    dim_ += BlockDim(block);
    switch (block) {
      case ActionBlock::kBase:
        Append(bounds_, bounds.base);
        break;
      case ActionBlock::kArm:
        Append(bounds_, bounds.arm);
        break;
      case ActionBlock::kTorso:
        Append(bounds_, bounds.torso);
        break;
      case ActionBlock::kLeg:
        Append(bounds_, bounds.leg);
        break;
      case ActionBlock::kGripper:
        bounds_.push_back(bounds.gripper);
        break;
    }
  }
  Validate();
}

ActionLayout::ActionLayout(const Flags& flags, std::vector<Bound> bounds)
    : flags_(flags), bounds_(std::move(bounds)) {
  offsets_.fill(-1);
  for (ActionBlock block : kBlockOrder) {
    if (!FlagFor(flags_, block)) continue;
    offsets_[static_cast<int>(block)] = dim_;
    dim_ += BlockDim(block);
  }
  Validate();
}

void ActionLayout::Validate() const {
  if (static_cast<int>(bounds_.size()) != dim_) {
    throw LayoutError("layout has " + std::to_string(bounds_.size()) +
                      " bounds for dimension " + std::to_string(dim_));
  }
  if (dim_ == 0) throw LayoutError("layout samples no blocks");
  for (size_t i = 0; i < bounds_.size(); ++i) {
    if (!(bounds_[i].lower < bounds_[i].upper)) {
      throw LayoutError("bound " + std::to_string(i) +
                        " has lower >= upper");
    }
  }
}

bool ActionLayout::Has(ActionBlock block) const {
  return offsets_[static_cast<int>(block)] >= 0;
}

int ActionLayout::Offset(ActionBlock block) const {
  return offsets_[static_cast<int>(block)];
}

void ActionLayout::Clamp(ActionVector& action) const {
  for (int i = 0; i < dim_; ++i) {
    action[i] = std::clamp(action[i], bounds_[i].lower, bounds_[i].upper);
  }
}

Vec6 MaskLegCommand(const Eigen::Matrix<double, 7, 1>& leg_action) {
  if (!leg_action.allFinite()) {
    throw InvalidInputError("leg action contains non-finite values");
  }
  const double selection = leg_action[0];
  Vec6 masked = Vec6::Zero();
  if (selection < -0.5) {
    masked.head<3>() = leg_action.segment<3>(1);
  } else if (selection > 0.5) {
    masked.tail<3>() = leg_action.segment<3>(4);
  }
  return masked;
}

double MapGripper(double action, double open_pos, double close_pos) {
  if (!std::isfinite(action) || !std::isfinite(open_pos) ||
      !std::isfinite(close_pos)) {
    throw InvalidInputError("gripper mapping received a non-finite value");
  }
  return action > 0.0 ? close_pos : open_pos;
}

CommandVector AssembleCommand(const ActionVector& action,
                              const ActionLayout& layout,
                              const CommandDefaults& defaults) {
  if (action.size() != layout.Dim()) {
    throw LayoutError("action has dimension " +
                      std::to_string(action.size()) + ", layout expects " +
                      std::to_string(layout.Dim()));
  }

  CommandVector command;
  command.arm_targets = defaults.default_arm;
  command.gripper_pos = defaults.default_gripper;
  command.leg_targets = defaults.default_leg;
  command.torso_pose = defaults.default_torso;

  if (layout.Has(ActionBlock::kBase)) {
    command.base_vel = action.segment<3>(layout.Offset(ActionBlock::kBase));
  }
  if (layout.Has(ActionBlock::kArm)) {
    command.arm_targets = action.segment<6>(layout.Offset(ActionBlock::kArm));
  }
  if (layout.Has(ActionBlock::kTorso)) {
    command.torso_pose = action.segment<3>(layout.Offset(ActionBlock::kTorso));
  }
  if (layout.Has(ActionBlock::kLeg)) {
    // front legs only; rear-leg slots stay zero
    Vec6 masked =
        MaskLegCommand(action.segment<7>(layout.Offset(ActionBlock::kLeg)));
    command.leg_targets.setZero();
    command.leg_targets.head<6>() = masked;
  }
  if (layout.Has(ActionBlock::kGripper)) {
    command.gripper_pos =
        MapGripper(action[layout.Offset(ActionBlock::kGripper)],
                   defaults.gripper_open, defaults.gripper_close);
  }
  return command;
}

ActionVector NeutralAction(const ActionLayout& layout,
                           const CommandDefaults& defaults) {
  ActionVector action = ActionVector::Zero(layout.Dim());
  if (layout.Has(ActionBlock::kArm)) {
    action.segment<6>(layout.Offset(ActionBlock::kArm)) = defaults.default_arm;
  }
  if (layout.Has(ActionBlock::kTorso)) {
    action.segment<3>(layout.Offset(ActionBlock::kTorso)) =
        defaults.default_torso;
  }
  if (layout.Has(ActionBlock::kGripper)) {
    action[layout.Offset(ActionBlock::kGripper)] =
        defaults.default_gripper == defaults.gripper_open ? -1.0 : 1.0;
  }
  layout.Clamp(action);
  return action;
}

}  // namespace steer
