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

#include "steer/cost.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace steer {
namespace {

double Distance(const Vec3& a, const Vec3& b, Components components) {
  switch (components) {
    case Components::kXYZ:
      return (a - b).norm();
    case Components::kXY:
      return (a.head<2>() - b.head<2>()).norm();
    case Components::kZ:
      return std::abs(a.z() - b.z());
  }
  return 0.0;
}

double Power(double x, int power) { return power == 2 ? x * x : x; }

size_t RequiredSites(TermKind kind) {
  switch (kind) {
    case TermKind::kGoalDistance:
    case TermKind::kGoalDistanceXY:
    case TermKind::kSiteDistance:
    case TermKind::kMinSiteDistance:
    case TermKind::kCappedNegatedProximity:
    case TermKind::kQuatDistance:
    case TermKind::kAxisDotPenalty:
    case TermKind::kExpAxisAlignment:
      return 2;
    case TermKind::kExpAbsComponent:
    case TermKind::kVelocityPenalty:
    case TermKind::kAngvelPenalty:
      return 1;
    case TermKind::kGraspBonus:
      return 2;
    case TermKind::kSafetyPenalty:
      return 4;
    case TermKind::kControlPenalty:
      return 0;
  }
  return 0;
}

}  // namespace

std::string_view TermKindName(TermKind kind) {
  switch (kind) {
    case TermKind::kGoalDistance:
      return "goal_distance";
    case TermKind::kGoalDistanceXY:
      return "goal_distance_xy";
    case TermKind::kSiteDistance:
      return "site_distance";
    case TermKind::kMinSiteDistance:
      return "min_site_distance";
    case TermKind::kCappedNegatedProximity:
      return "capped_negated_proximity";
    case TermKind::kQuatDistance:
      return "quat_distance";
    case TermKind::kAxisDotPenalty:
      return "axis_dot_penalty";
    case TermKind::kExpAxisAlignment:
      return "exp_axis_alignment";
    case TermKind::kExpAbsComponent:
      return "exp_abs_component";
    case TermKind::kVelocityPenalty:
      return "velocity_penalty";
    case TermKind::kAngvelPenalty:
      return "angvel_penalty";
    case TermKind::kControlPenalty:
      return "control_penalty";
    case TermKind::kGraspBonus:
      return "grasp_bonus";
    case TermKind::kSafetyPenalty:
      return "safety_penalty";
  }
  return "unknown";
}

void CostTerm::Validate() const {
  const std::string name(TermKindName(kind));
  if (!std::isfinite(weight)) {
    throw ConfigError("term '" + label + "' (" + name + ") has a non-finite weight");
  }
  if (sites.size() < RequiredSites(kind)) {
    throw ConfigError("term '" + label + "' (" + name + ") needs " +
                      std::to_string(RequiredSites(kind)) + " sites");
  }
  if (kind == TermKind::kExpAbsComponent && !(sigma > 0.0)) {
    throw ConfigError("term '" + label + "' needs sigma > 0");
  }
  if (kind == TermKind::kExpAbsComponent && (component < 0 || component > 2)) {
    throw ConfigError("term '" + label + "' has an invalid component");
  }
  if (kind == TermKind::kMinSiteDistance && paired && sites.size() % 2 != 0) {
    throw ConfigError("term '" + label + "' pairs need an even site count");
  }
  if (power != 1 && power != 2) {
    throw ConfigError("term '" + label + "' power must be 1 or 2");
  }
}

double QuatDistance(const Vec4& q, const Vec4& q_ref, bool* renormalized) {
  Vec4 a = q;
  Vec4 b = q_ref;
  const double na = a.norm();
  const double nb = b.norm();
  bool flagged = false;
  if (std::abs(na - 1.0) > 1e-9 && na > 0.0) {
    a /= na;
    flagged = true;
  }
  if (std::abs(nb - 1.0) > 1e-9 && nb > 0.0) {
    b /= nb;
    flagged = true;
  }
  if (renormalized != nullptr) *renormalized = flagged;
  return std::min((a - b).norm(), (a + b).norm());
}

double EvalTerm(const CostTerm& term, const SiteFrame& frame,
                std::span<const double> controls) {
  const auto& s = term.sites;
  double value = 0.0;
  switch (term.kind) {
    case TermKind::kGoalDistance:
      value = (frame.Point(s[0]) - frame.Point(s[1])).norm();
      break;
    case TermKind::kGoalDistanceXY:
      value = Distance(frame.Point(s[0]), frame.Point(s[1]), Components::kXY);
      break;
    case TermKind::kSiteDistance:
      value = Power(
          Distance(frame.Point(s[0]), frame.Point(s[1]), term.components),
          term.power);
      break;
    case TermKind::kMinSiteDistance: {
      value = std::numeric_limits<double>::infinity();
      if (term.paired) {
        for (size_t i = 0; i + 1 < s.size(); i += 2) {
          value = std::min(value, Distance(frame.Point(s[i]),
                                           frame.Point(s[i + 1]),
                                           term.components));
        }
      } else {
        const Vec3 p = frame.Point(s[0]);
        for (size_t i = 1; i < s.size(); ++i) {
          value = std::min(value,
                           Distance(p, frame.Point(s[i]), term.components));
        }
      }
      break;
    }
    case TermKind::kCappedNegatedProximity:
      value = -std::min(term.d_thresh,
                        (frame.Point(s[0]) - frame.Point(s[1])).norm());
      break;
    case TermKind::kQuatDistance:
      value = QuatDistance(frame.Quat(s[0]), frame.Quat(s[1]));
      break;
    case TermKind::kAxisDotPenalty: {
      const double dot = frame.Axis(s[0]).dot(frame.Axis(s[1]));
      switch (term.dot_mode) {
        case AxisDotMode::kOneMinusDot:
          value = 1.0 - dot;
          break;
        case AxisDotMode::kAbsOneMinusDot:
          value = std::abs(1.0 - dot);
          break;
        case AxisDotMode::kOneMinusAbsDot:
          value = 1.0 - std::abs(dot);
          break;
      }
      break;
    }
    case TermKind::kExpAxisAlignment: {
      const double dot = frame.Axis(s[0]).dot(frame.Axis(s[1]));
      value = 1.0 - std::exp(term.alpha * (dot - 1.0));
      break;
    }
    case TermKind::kExpAbsComponent:
      value = std::exp(std::abs(frame.Axis(s[0])[term.component]) / term.sigma);
      break;
    case TermKind::kVelocityPenalty:
    case TermKind::kAngvelPenalty:
      value = Power(frame.Vector(s[0]).norm(), term.power);
      break;
    case TermKind::kControlPenalty: {
      double sum = 0.0;
      for (double u : controls) sum += u * u;
      value = std::sqrt(sum);
      break;
    }
    case TermKind::kGraspBonus: {
      const bool closed = frame.Scalar(s[0]) > 0.5;
      const double error = frame.Scalar(s[1]);
      if (closed) {
        value = error > term.resistance_threshold ? -1.0
                                                  : term.empty_close_penalty;
      }
      break;
    }
    case TermKind::kSafetyPenalty: {
      // sites: height, roll, pitch, fallen flag, optional object/world up axes
      const double height = frame.Scalar(s[0]);
      const double roll = frame.Scalar(s[1]);
      const double pitch = frame.Scalar(s[2]);
      const double fallen = frame.Scalar(s[3]);
      value = (fallen > 0.5 ? 1.0 : 0.0) +
              std::max(0.0, term.min_height - height) +
              std::max(0.0, std::abs(roll) - term.max_tilt) +
              std::max(0.0, std::abs(pitch) - term.max_tilt);
      if (s.size() >= 6) {
        const double up = frame.Axis(s[4]).dot(frame.Axis(s[5]));
        value += std::max(0.0, term.min_object_up - up);
      }
      break;
    }
  }
  return term.weight * value;
}

SiteFrame ApplyRules(std::span<const DesiredSiteRule> rules,
                     const SiteFrame& frame) {
  SiteFrame out = frame;
  for (const DesiredSiteRule& rule : rules) {
    switch (rule.kind) {
      case DesiredSiteRule::Kind::kOffsetInObjectFrame: {
        const Vec4 q = out.Quat(rule.reference);
        const Eigen::Quaterniond rotation(q[0], q[1], q[2], q[3]);
        out.SetPoint(rule.output,
                     out.Point(rule.source) +
                         rotation.normalized() * rule.offset);
        break;
      }
      case DesiredSiteRule::Kind::kOffsetInWorldFrame:
        out.SetPoint(rule.output, out.Point(rule.source) + rule.offset);
        break;
      case DesiredSiteRule::Kind::kBehindFromGoal: {
        const Vec3 p = out.Point(rule.source);
        Vec3 direction = out.Point(rule.reference) - p;
        direction.z() = 0.0;
        const double n = direction.norm();
        direction = n > 1e-9 ? Vec3(direction / n) : Vec3::UnitX();
        out.SetPoint(rule.output, p - rule.distance * direction + rule.offset);
        break;
      }
      case DesiredSiteRule::Kind::kReplaceHeight: {
        Vec3 p = out.Point(rule.source);
        p.z() = rule.offset.z();
        out.SetPoint(rule.output, p);
        break;
      }
      case DesiredSiteRule::Kind::kUnitDirection: {
        const Vec3 d = out.Point(rule.reference) - out.Point(rule.source);
        out.SetAxis(rule.output, d.norm() > 1e-12 ? d : Vec3::UnitZ());
        break;
      }
    }
  }
  return out;
}

namespace {

double SumTerms(std::span<const CostTerm> terms, const SiteFrame& frame,
                std::span<const double> controls) {
  double total = 0.0;
  for (const CostTerm& term : terms) total += EvalTerm(term, frame, controls);
  return total;
}

}  // namespace

double EvalTaskCost(const TaskCost& cost, const SiteFrame& frame,
                    std::span<const double> controls, bool terminal) {
  if (cost.terminal_only && !terminal) return 0.0;
  if (cost.rules.empty()) {
    double total = SumTerms(cost.terms, frame, controls);
    if (terminal) total += SumTerms(cost.terminal_terms, frame, controls);
    return total;
  }
  const SiteFrame resolved = ApplyRules(cost.rules, frame);
  double total = SumTerms(cost.terms, resolved, controls);
  if (terminal) total += SumTerms(cost.terminal_terms, resolved, controls);
  return total;
}

double JMove(const SiteFrame& frame, const MoveWeights& weights) {
  const Vec3 object = frame.Point(sites::kObject);
  return weights.goal * (object - frame.Point(sites::kGoal)).norm() +
         weights.gripper * (frame.Point(sites::kGripper) - object).norm() +
         weights.vel * frame.Vector(sites::kObjectVel).norm();
}

UprightValue JUpright(const SiteFrame& frame, const UprightWeights& weights) {
  UprightValue out;
  const double orientation =
      QuatDistance(frame.Quat(sites::kObjectQuat),
                   frame.Quat(sites::kUprightQuat), &out.renormalized);
  out.value = weights.upright * orientation +
              weights.gripper * (frame.Point(sites::kGripper) -
                                 frame.Point(sites::kObject))
                                    .norm();
  return out;
}

}  // namespace steer
