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

#include "steer/task_library.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace steer {
namespace {

// desired sites written by the rules
const SiteId kGripperDes = InternSite("gripper_des");
const SiteId kFrDes = InternSite("fr_des");
const SiteId kFlDes = InternSite("fl_des");
const SiteId kTorsoDes = InternSite("torso_des");
const SiteId kGraspL = InternSite("grasp_L");
const SiteId kGraspR = InternSite("grasp_R");
const SiteId kGrasp = InternSite("grasp");
const SiteId kApprL = InternSite("approach_L");
const SiteId kApprR = InternSite("approach_R");
const SiteId kApprMid = InternSite("approach_mid");
const SiteId kStackTarget = InternSite("stack_target");
const SiteId kStackDir = InternSite("stack_dir");
const SiteId kTorsoNominal = InternSite("torso_nominal");

const std::map<std::string, TaskParams>& Defaults() {
  static const std::map<std::string, TaskParams> defaults = [] {
    const TaskParams safety = {
        {"w_safety", 10.0}, {"h_min", 0.3}, {"max_tilt", 0.5}};
    auto with_safety = [&](TaskParams p) {
      p.insert(safety.begin(), safety.end());
      return p;
    };
    std::map<std::string, TaskParams> d;
    d["tire_upright"] = with_safety({{"w_orient", 1.0},
                                     {"sigma", 0.5},
                                     {"w_gripper", 0.5},
                                     {"w_foot", 0.2},
                                     {"w_torso", 0.3},
                                     {"w_ctrl", 0.01}});
    d["barrier_upright"] = with_safety({{"w_orient", 2.0},
                                        {"alpha", 4.0},
                                        {"w_grasp", 0.5},
                                        {"w_grip", 0.1},
                                        {"w_approach", 0.3},
                                        {"w_vel", 0.1},
                                        {"w_ctrl", 0.01},
                                        {"w_grasp_bonus", 0.2},
                                        {"resistance_threshold", 0.1}});
    d["cone_upright"] = with_safety({{"w_orient", 2.0},
                                     {"alpha", 4.0},
                                     {"w_gripper", 0.5},
                                     {"w_torso", 0.2},
                                     {"d_thresh", 0.6},
                                     {"w_vel", 0.1},
                                     {"w_ctrl", 0.01}});
    d["chair_upright"] = d["cone_upright"];
    d["tire_stack"] = with_safety({{"w_xy", 1.0},
                                   {"w_z", 1.0},
                                   {"stack_height", 0.25},
                                   {"w_orient", 0.5},
                                   {"w_bottom", 0.5},
                                   {"w_gripper", 0.3},
                                   {"w_torso", 0.2},
                                   {"torso_distance", 0.7},
                                   {"w_ctrl", 0.01}});
    d["barrier_drag"] = with_safety({{"w_goal", 1.0},
                                     {"w_orient", 2.0},
                                     {"alpha", 4.0},
                                     {"w_grasp", 0.5},
                                     {"w_grip", 0.1},
                                     {"w_vel", 0.1},
                                     {"w_ctrl", 0.01},
                                     {"w_grasp_bonus", 0.2},
                                     {"resistance_threshold", 0.1}});
    d["rack_drag"] = with_safety({{"w_goal", 1.0},
                                  {"w_orient", 0.5},
                                  {"w_grasp", 0.5},
                                  {"w_grip", 0.1},
                                  {"w_approach", 0.3},
                                  {"w_grasp_bonus", 0.2},
                                  {"resistance_threshold", 0.1},
                                  {"min_object_up", 0.7}});
    d["rugged_box_push"] = with_safety({{"w_goal", 1.0},
                                        {"w_orient", 0.3},
                                        {"w_torso", 0.3},
                                        {"torso_distance", 0.6},
                                        {"w_gripper", 0.2},
                                        {"w_ctrl", 0.01}});
    const TaskParams g1 = {{"w_goal", 1.0},   {"w_orient", 0.5},
                           {"w_hand", 0.3},   {"w_pelvis", 0.05},
                           {"w_ctrl", 0.01}};
    d["g1_box_push"] = with_safety(g1);
    d["g1_box_push"]["w_facing"] = 0.2;
    d["g1_chair_push"] = with_safety(g1);
    d["g1_chair_push"]["w_vel"] = 0.1;
    d["g1_table_push"] = d["g1_chair_push"];
    d["g1_door_open"] = with_safety({{"w_goal", 1.0},
                                     {"w_hand", 0.5},
                                     {"w_pelvis", 0.05},
                                     {"w_facing", 0.2},
                                     {"w_ctrl", 0.01}});
    d["move_generic"] = {{"w_goal", 1.0}, {"w_gripper", 0.2}, {"w_vel", 0.1}};
    d["upright_generic"] = {{"w_upright", 1.0}, {"w_gripper", 0.2}};
    d["e2e_mpc_move"] = with_safety({{"w_goal", 1.0},
                                     {"w_gripper", 0.2},
                                     {"w_vel", 0.1},
                                     {"w_height", 0.5},
                                     {"nominal_height", 0.5},
                                     {"w_torso_up", 0.5},
                                     {"w_base_vel", 0.02},
                                     {"w_ctrl", 0.002}});
    return d;
  }();
  return defaults;
}

std::string ValidIdList() {
  std::string out;
  for (const std::string& id : KnownTaskIds()) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

// collects terms with the resolved parameter table
class Builder {
 public:
  Builder(std::string task_id, TaskParams params)
      : params_(std::move(params)) {
    cost_.task_id = std::move(task_id);
  }

  double P(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) {
      throw ConfigError("task '" + cost_.task_id + "' lacks parameter '" +
                        name + "'");
    }
    return it->second;
  }

  CostTerm& Add(TermKind kind, const std::string& weight,
                std::vector<SiteId> sites, std::string label = "") {
    CostTerm term;
    term.kind = kind;
    term.weight = P(weight);
    term.sites = std::move(sites);
    term.label = label.empty() ? weight : std::move(label);
    cost_.terms.push_back(std::move(term));
    return cost_.terms.back();
  }

  void Rule(DesiredSiteRule::Kind kind, SiteId output, SiteId source,
            SiteId reference, const Vec3& offset, double distance = 0.0) {
    DesiredSiteRule rule;
    rule.kind = kind;
    rule.output = output;
    rule.source = source;
    rule.reference = reference;
    rule.offset = offset;
    rule.distance = distance;
    cost_.rules.push_back(rule);
  }

  void Control(const std::string& weight = "w_ctrl") {
    Add(TermKind::kControlPenalty, weight, {}, weight);
  }

  void Safety(bool object_tipping = false) {
    std::vector<SiteId> s = {sites::kTorsoHeight, sites::kTorsoRoll,
                             sites::kTorsoPitch, sites::kFallen};
    if (object_tipping) {
      s.push_back(sites::kObjectZ);
      s.push_back(sites::kWorldZ);
    }
    CostTerm& t = Add(TermKind::kSafetyPenalty, "w_safety", s, "safety");
    t.min_height = P("h_min");
    t.max_tilt = P("max_tilt");
    if (object_tipping) t.min_object_up = P("min_object_up");
  }

  void Grasp() {
    CostTerm& t = Add(TermKind::kGraspBonus, "w_grasp_bonus",
                      {sites::kGripperClosedCmd, sites::kGripperError},
                      "grasp");
    t.resistance_threshold = P("resistance_threshold");
  }

  void ExpAlign(SiteId axis, SiteId target, const std::string& weight) {
    CostTerm& t = Add(TermKind::kExpAxisAlignment, weight, {axis, target});
    t.alpha = P("alpha");
  }

  void AxisDot(SiteId a, SiteId b, AxisDotMode mode, const std::string& weight,
               const std::string& label) {
    Add(TermKind::kAxisDotPenalty, weight, {a, b}, label).dot_mode = mode;
  }

  TaskCost Finish() {
    for (const CostTerm& term : cost_.terms) term.Validate();
    return std::move(cost_);
  }

 private:
  TaskParams params_;
  TaskCost cost_;
};

using K = DesiredSiteRule::Kind;

void BarrierCommon(Builder& b) {
  b.ExpAlign(sites::kObjectZ, sites::kWorldZ, "w_orient");
  b.Rule(K::kOffsetInObjectFrame, kGraspL, sites::kObject, sites::kObjectQuat,
         Vec3(-0.4, 0.0, 0.3));
  b.Rule(K::kOffsetInObjectFrame, kGraspR, sites::kObject, sites::kObjectQuat,
         Vec3(0.4, 0.0, 0.3));
  b.Add(TermKind::kMinSiteDistance, "w_grasp",
        {sites::kGripper, kGraspL, kGraspR});
  b.AxisDot(sites::kGripperX, sites::kObjectX, AxisDotMode::kOneMinusAbsDot,
            "w_grip", "w_grip.x");
  b.AxisDot(sites::kGripperY, sites::kObjectZ, AxisDotMode::kOneMinusAbsDot,
            "w_grip", "w_grip.y");
}

void G1Control(Builder& b) {
  b.Add(TermKind::kVelocityPenalty, "w_ctrl", {sites::kBaseVel}, "w_ctrl.base");
  b.Add(TermKind::kVelocityPenalty, "w_ctrl", {sites::kArmDeviation},
        "w_ctrl.arm");
}

void G1Hands(Builder& b) {
  CostTerm& t = b.Add(TermKind::kMinSiteDistance, "w_hand",
                      {sites::kLeftPalm, sites::kObject, sites::kRightPalm,
                       sites::kObject});
  t.paired = true;
}

void G1Push(Builder& b, SiteId up_axis, bool xy_goal) {
  b.Add(xy_goal ? TermKind::kGoalDistanceXY : TermKind::kGoalDistance,
        "w_goal", {sites::kObject, sites::kGoal});
  b.AxisDot(up_axis, sites::kWorldZ, AxisDotMode::kAbsOneMinusDot, "w_orient",
            "w_orient");
  G1Hands(b);
  // negated pelvis distance, uncapped
  b.Add(TermKind::kCappedNegatedProximity, "w_pelvis",
        {sites::kPelvis, sites::kObject});
}

void MoveTerms(Builder& b) {
  b.Add(TermKind::kGoalDistance, "w_goal", {sites::kObject, sites::kGoal});
  b.Add(TermKind::kSiteDistance, "w_gripper",
        {sites::kGripper, sites::kObject});
  b.Add(TermKind::kVelocityPenalty, "w_vel", {sites::kObjectVel});
}

TaskCost Build(const std::string& id, const TaskParams& params) {
  Builder b(id, params);
  if (id == "tire_upright") {
    CostTerm& orient =
        b.Add(TermKind::kExpAbsComponent, "w_orient", {sites::kObjectY});
    orient.sigma = b.P("sigma");
    orient.component = 2;
    b.Rule(K::kOffsetInWorldFrame, kGripperDes, sites::kObject, -1,
           Vec3(0.0, 0.0, 0.3));
    b.Rule(K::kOffsetInWorldFrame, kFrDes, sites::kObject, -1,
           Vec3(-0.35, -0.2, 0.0));
    b.Rule(K::kOffsetInWorldFrame, kFlDes, sites::kObject, -1,
           Vec3(-0.35, 0.2, 0.0));
    b.Rule(K::kOffsetInWorldFrame, kTorsoDes, sites::kObject, -1,
           Vec3(-0.8, 0.0, 0.5));
    b.Add(TermKind::kSiteDistance, "w_gripper", {sites::kGripper, kGripperDes});
    b.Add(TermKind::kMinSiteDistance, "w_foot",
          {sites::kFrFoot, kFrDes, sites::kFlFoot, kFlDes})
        .paired = true;
    b.Add(TermKind::kSiteDistance, "w_torso", {sites::kTorso, kTorsoDes});
    b.Control();
    b.Safety();
  } else if (id == "barrier_upright") {
    BarrierCommon(b);
    b.Rule(K::kOffsetInObjectFrame, kApprL, sites::kObject, sites::kObjectQuat,
           Vec3(-0.4, -0.7, 0.0));
    b.Rule(K::kOffsetInObjectFrame, kApprR, sites::kObject, sites::kObjectQuat,
           Vec3(0.4, -0.7, 0.0));
    b.Add(TermKind::kMinSiteDistance, "w_approach",
          {sites::kTorso, kApprL, kApprR});
    b.Add(TermKind::kVelocityPenalty, "w_vel", {sites::kObjectVel}).power = 2;
    b.Control();
    b.Grasp();
    b.Safety();
  } else if (id == "cone_upright" || id == "chair_upright") {
    b.ExpAlign(sites::kObjectZ, sites::kWorldZ, "w_orient");
    b.Add(TermKind::kSiteDistance, "w_gripper",
          {sites::kGripper, sites::kObject});
    b.Add(TermKind::kCappedNegatedProximity, "w_torso",
          {sites::kTorso, sites::kObject})
        .d_thresh = b.P("d_thresh");
    b.Add(TermKind::kVelocityPenalty, "w_vel", {sites::kObjectVel}).power = 2;
    b.Control();
    b.Safety();
  } else if (id == "tire_stack") {
    // object is the top tire, bottom the flat one
    b.Rule(K::kOffsetInWorldFrame, kStackTarget, sites::kBottom, -1,
           Vec3(0.0, 0.0, b.P("stack_height")));
    b.Rule(K::kUnitDirection, kStackDir, sites::kObject, sites::kBottom,
           Vec3::Zero());
    b.Rule(K::kOffsetInWorldFrame, kGripperDes, sites::kObject, -1,
           Vec3(0.0, 0.0, 0.3));
    b.Rule(K::kBehindFromGoal, kTorsoDes, sites::kObject, sites::kBottom,
           Vec3(0.0, 0.0, 0.5), b.P("torso_distance"));
    b.Add(TermKind::kSiteDistance, "w_xy", {sites::kObject, sites::kBottom})
        .components = Components::kXY;
    b.Add(TermKind::kSiteDistance, "w_z", {sites::kObject, kStackTarget})
        .components = Components::kZ;
    b.AxisDot(sites::kObjectY, kStackDir, AxisDotMode::kOneMinusDot,
              "w_orient", "w_orient");
    b.Add(TermKind::kVelocityPenalty, "w_bottom", {sites::kBottomVel},
          "w_bottom.vel");
    b.Add(TermKind::kAngvelPenalty, "w_bottom", {sites::kBottomAngVel},
          "w_bottom.angvel");
    b.Add(TermKind::kSiteDistance, "w_gripper", {sites::kGripper, kGripperDes});
    b.Add(TermKind::kSiteDistance, "w_torso", {sites::kTorso, kTorsoDes});
    b.Control();
    b.Safety();
  } else if (id == "barrier_drag") {
    b.Add(TermKind::kGoalDistance, "w_goal", {sites::kObject, sites::kGoal});
    BarrierCommon(b);
    b.Add(TermKind::kVelocityPenalty, "w_vel", {sites::kObjectVel}).power = 2;
    b.Control();
    b.Grasp();
    b.Safety();
  } else if (id == "rack_drag") {
    b.Add(TermKind::kGoalDistance, "w_goal", {sites::kObject, sites::kGoal});
    b.AxisDot(sites::kObjectX, sites::kWorldX, AxisDotMode::kOneMinusDot,
              "w_orient", "w_orient.x");
    b.AxisDot(sites::kObjectY, sites::kWorldY, AxisDotMode::kOneMinusDot,
              "w_orient", "w_orient.y");
    b.AxisDot(sites::kObjectZ, sites::kWorldZ, AxisDotMode::kOneMinusDot,
              "w_orient", "w_orient.z");
    b.Rule(K::kOffsetInObjectFrame, kGrasp, sites::kObject, sites::kObjectQuat,
           Vec3(-0.3, 0.0, 0.5));
    b.Rule(K::kOffsetInObjectFrame, kApprL, sites::kObject, sites::kObjectQuat,
           Vec3(-0.9, 0.5, 0.0));
    b.Rule(K::kOffsetInObjectFrame, kApprMid, sites::kObject,
           sites::kObjectQuat, Vec3(-0.9, 0.0, 0.0));
    b.Rule(K::kOffsetInObjectFrame, kApprR, sites::kObject, sites::kObjectQuat,
           Vec3(-0.9, -0.5, 0.0));
    b.Add(TermKind::kSiteDistance, "w_grasp", {sites::kGripper, kGrasp});
    b.AxisDot(sites::kGripperZ, sites::kObjectZ, AxisDotMode::kOneMinusDot,
              "w_grip", "w_grip");
    b.Add(TermKind::kMinSiteDistance, "w_approach",
          {sites::kTorso, kApprL, kApprMid, kApprR});
    b.Grasp();
    b.Safety(/*object_tipping=*/true);
  } else if (id == "rugged_box_push") {
    b.Add(TermKind::kGoalDistance, "w_goal", {sites::kObject, sites::kGoal});
    b.AxisDot(sites::kObjectX, sites::kWorldX, AxisDotMode::kAbsOneMinusDot,
              "w_orient", "w_orient.x");
    b.AxisDot(sites::kObjectY, sites::kWorldY, AxisDotMode::kAbsOneMinusDot,
              "w_orient", "w_orient.y");
    b.AxisDot(sites::kObjectZ, sites::kWorldZ, AxisDotMode::kAbsOneMinusDot,
              "w_orient", "w_orient.z");
    b.Rule(K::kBehindFromGoal, kTorsoDes, sites::kObject, sites::kGoal,
           Vec3(0.0, 0.0, 0.5), b.P("torso_distance"));
    b.Add(TermKind::kSiteDistance, "w_torso", {sites::kTorso, kTorsoDes});
    b.Add(TermKind::kSiteDistance, "w_gripper",
          {sites::kGripper, sites::kObject});
    b.Control();
    b.Safety();
  } else if (id == "g1_box_push") {
    G1Push(b, sites::kObjectY, /*xy_goal=*/false);
    b.AxisDot(sites::kRobotX, sites::kWorldX, AxisDotMode::kOneMinusDot,
              "w_facing", "w_facing");
    G1Control(b);
    b.Safety();
  } else if (id == "g1_chair_push" || id == "g1_table_push") {
    G1Push(b, id == "g1_chair_push" ? sites::kObjectZ : sites::kObjectY,
           /*xy_goal=*/true);
    b.Add(TermKind::kVelocityPenalty, "w_vel", {sites::kObjectVel}).power = 2;
    G1Control(b);
    b.Safety();
  } else if (id == "g1_door_open") {
    // object is the door center
    b.Add(TermKind::kGoalDistance, "w_goal", {sites::kPelvis, sites::kGoal});
    b.Add(TermKind::kSiteDistance, "w_hand",
          {sites::kRightPalm, sites::kHandle});
    b.Add(TermKind::kCappedNegatedProximity, "w_pelvis",
          {sites::kPelvis, sites::kObject});
    b.AxisDot(sites::kRobotX, sites::kWorldX, AxisDotMode::kOneMinusDot,
              "w_facing", "w_facing");
    G1Control(b);
    b.Safety();
  } else if (id == "move_generic") {
    MoveTerms(b);
  } else if (id == "upright_generic") {
    b.Add(TermKind::kQuatDistance, "w_upright",
          {sites::kObjectQuat, sites::kUprightQuat});
    b.Add(TermKind::kSiteDistance, "w_gripper",
          {sites::kGripper, sites::kObject});
  } else if (id == "e2e_mpc_move") {
    MoveTerms(b);
    b.Rule(K::kReplaceHeight, kTorsoNominal, sites::kTorso, -1,
           Vec3(0.0, 0.0, b.P("nominal_height")));
    b.Add(TermKind::kSiteDistance, "w_height", {sites::kTorso, kTorsoNominal})
        .components = Components::kZ;
    b.AxisDot(sites::kRobotZ, sites::kWorldZ, AxisDotMode::kOneMinusDot,
              "w_torso_up", "w_torso_up");
    b.Add(TermKind::kVelocityPenalty, "w_base_vel", {sites::kBaseVel});
    b.Control();
    b.Safety();
  } else {
    throw ConfigError("unknown task id '" + id + "'; valid ids: " +
                      ValidIdList());
  }
  return b.Finish();
}

std::string Fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& KnownTaskIds() {
  static const std::vector<std::string> ids = {
      "tire_upright",  "barrier_upright", "cone_upright",    "chair_upright",
      "tire_stack",    "barrier_drag",    "rack_drag",       "rugged_box_push",
      "g1_box_push",   "g1_chair_push",   "g1_door_open",    "g1_table_push",
      "move_generic",  "upright_generic", "e2e_mpc_move"};
  return ids;
}

TaskParams DefaultTaskParams(const std::string& task_id) {
  auto it = Defaults().find(task_id);
  if (it == Defaults().end()) {
    throw ConfigError("unknown task id '" + task_id + "'; valid ids: " +
                      ValidIdList());
  }
  return it->second;
}

TaskCost AssembleTaskCost(const std::string& task_id,
                          const TaskParams& overrides) {
  TaskParams params = DefaultTaskParams(task_id);
  for (const auto& [name, value] : overrides) {
    auto it = params.find(name);
    if (it == params.end()) {
      throw ConfigError("task '" + task_id + "' has no parameter '" + name +
                        "'");
    }
    if (!std::isfinite(value)) {
      throw ConfigError("parameter '" + name + "' is not finite");
    }
    it->second = value;
  }
  return Build(task_id, params);
}

std::string DescribeTaskCost(const TaskCost& cost) {
  std::ostringstream os;
  auto line = [&](const CostTerm& t, bool terminal) {
    os << t.label << "  " << TermKindName(t.kind) << "  weight=" << Fmt(t.weight);
    os << "  sites=";
    for (size_t i = 0; i < t.sites.size(); ++i) {
      os << (i ? "," : "") << SiteName(t.sites[i]);
    }
    switch (t.kind) {
      case TermKind::kExpAxisAlignment:
        os << "  alpha=" << Fmt(t.alpha);
        break;
      case TermKind::kExpAbsComponent:
        os << "  sigma=" << Fmt(t.sigma) << "  component=" << t.component;
        break;
      case TermKind::kCappedNegatedProximity:
        os << "  d_thresh=" << Fmt(t.d_thresh);
        break;
      case TermKind::kAxisDotPenalty:
        os << "  mode="
           << (t.dot_mode == AxisDotMode::kOneMinusDot      ? "1-a.b"
               : t.dot_mode == AxisDotMode::kAbsOneMinusDot ? "|1-a.b|"
                                                            : "1-|a.b|");
        break;
      case TermKind::kSafetyPenalty:
        os << "  h_min=" << Fmt(t.min_height)
           << "  max_tilt=" << Fmt(t.max_tilt);
        break;
      case TermKind::kGraspBonus:
        os << "  resistance_threshold=" << Fmt(t.resistance_threshold);
        break;
      default:
        break;
    }
    if (t.power == 2) os << "  squared";
    if (t.components == Components::kXY) os << "  xy";
    if (t.components == Components::kZ) os << "  z";
    if (t.paired) os << "  paired";
    if (terminal) os << "  terminal";
    os << '\n';
  };
  for (const CostTerm& t : cost.terms) line(t, false);
  for (const CostTerm& t : cost.terminal_terms) line(t, true);
  return os.str();
}

std::vector<SiteId> RequiredInputSites(const TaskCost& cost) {
  std::set<SiteId> produced;
  std::set<SiteId> needed;
  for (const DesiredSiteRule& r : cost.rules) {
    for (SiteId s : {r.source, r.reference}) {
      if (s >= 0 && !produced.count(s)) needed.insert(s);
    }
    produced.insert(r.output);
  }
  auto scan = [&](const std::vector<CostTerm>& terms) {
    for (const CostTerm& t : terms) {
      for (SiteId s : t.sites) {
        if (!produced.count(s)) needed.insert(s);
      }
    }
  };
  scan(cost.terms);
  scan(cost.terminal_terms);
  return {needed.begin(), needed.end()};
}

}  // namespace steer
