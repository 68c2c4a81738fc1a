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

#ifndef STEER_COST_H_
#define STEER_COST_H_

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steer/site_frame.h"
#include "steer/types.h"

namespace steer {

enum class TermKind {
  kGoalDistance,            // |a - b|
  kGoalDistanceXY,          // |a.xy - b.xy|
  kSiteDistance,            // |a - b|^p over selected components
  kMinSiteDistance,         // min_i |a - b_i|
  kCappedNegatedProximity,  // -min(d_thresh, |a - b|)
  kQuatDistance,            // min(|q - q_u|, |q + q_u|)
  kAxisDotPenalty,          // 1 - a.b and its abs variants
  kExpAxisAlignment,        // 1 - exp(alpha (a.b - 1))
  kExpAbsComponent,         // exp(|a[c]| / sigma)
  kVelocityPenalty,         // |v|^p
  kAngvelPenalty,           // |w|^p
  kControlPenalty,          // |u|
  kGraspBonus,              // -1 on a resisted close, +penalty on empty close
  kSafetyPenalty,           // fall flag plus height/tilt limit violations
};

enum class Components { kXYZ, kXY, kZ };

enum class AxisDotMode {
  kOneMinusDot,     // 1 - a.b
  kAbsOneMinusDot,  // |1 - a.b|
  kOneMinusAbsDot,  // 1 - |a.b|
};

// One weighted term. `sites` holds the kind's operands in order; unused
// parameters keep their defaults.
struct CostTerm {
  TermKind kind = TermKind::kGoalDistance;
  double weight = 1.0;
  std::string label;
  std::vector<SiteId> sites;

  Components components = Components::kXYZ;
  int power = 1;
  // min_site_distance over pairs (a0, b0, a1, b1, ...) instead of one anchor
  bool paired = false;
  AxisDotMode dot_mode = AxisDotMode::kOneMinusDot;
  double alpha = 1.0;
  double sigma = 1.0;
  int component = 2;
  double d_thresh = std::numeric_limits<double>::infinity();
  // grasp: error above which a close counts as resisted, and the empty-close
  // penalty relative to the bonus
  double resistance_threshold = 0.1;
  double empty_close_penalty = 1.0;
  // safety limits
  double min_height = 0.3;
  double max_tilt = 0.5;
  double min_object_up = -2.0;  // object z.world_z floor; disabled by default

  // throws ConfigError when a kind's operands are missing
  void Validate() const;
};

// Site recomputed from the current frame before terms are evaluated.
struct DesiredSiteRule {
  enum class Kind {
    kOffsetInObjectFrame,  // out = p + R(q) offset
    kOffsetInWorldFrame,   // out = p + offset
    kBehindFromGoal,       // out = p - distance * unit((goal - p).xy)
    kReplaceHeight,        // out = (p.x, p.y, offset.z)
    kUnitDirection,        // axis out = unit(b - a)
  };
  Kind kind = Kind::kOffsetInWorldFrame;
  SiteId output = -1;
  SiteId source = -1;
  SiteId reference = -1;  // goal / direction target / orientation quaternion
  Vec3 offset = Vec3::Zero();
  double distance = 0.0;
};

struct TaskCost {
  std::string task_id;
  std::vector<DesiredSiteRule> rules;
  std::vector<CostTerm> terms;
  std::vector<CostTerm> terminal_terms;
  // evaluate the running terms only at the final rollout step
  bool terminal_only = false;
};

// weight * formula(frame, controls)
double EvalTerm(const CostTerm& term, const SiteFrame& frame,
                std::span<const double> controls);

// applies the desired-site rules to a copy of the frame
SiteFrame ApplyRules(std::span<const DesiredSiteRule> rules,
                     const SiteFrame& frame);

// Sum of terms (and terminal terms when `terminal`). When the cost is
// terminal_only, non-terminal steps contribute zero and the regular terms are
// evaluated on the terminal step.
double EvalTaskCost(const TaskCost& cost, const SiteFrame& frame,
                    std::span<const double> controls, bool terminal = false);

struct MoveWeights {
  double goal = 1.0;
  double gripper = 0.2;
  double vel = 0.1;
};

struct UprightWeights {
  double upright = 1.0;
  double gripper = 0.2;
};

double JMove(const SiteFrame& frame, const MoveWeights& weights);

struct UprightValue {
  double value = 0.0;
  // set when an input quaternion was not unit norm and got normalized
  bool renormalized = false;
};
UprightValue JUpright(const SiteFrame& frame, const UprightWeights& weights);

// double-cover aware distance between (possibly unnormalized) quaternions
double QuatDistance(const Vec4& q, const Vec4& q_ref, bool* renormalized = nullptr);

std::string_view TermKindName(TermKind kind);

}  // namespace steer

#endif  // STEER_COST_H_
