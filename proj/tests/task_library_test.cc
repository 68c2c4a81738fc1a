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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"

namespace steer {
namespace {

std::multiset<TermKind> Kinds(const TaskCost& cost) {
  std::multiset<TermKind> out;
  for (const CostTerm& t : cost.terms) out.insert(t.kind);
  return out;
}

TEST(TaskLibrary, EveryTaskEvaluatesOnCanonicalFrame) {
  const SiteFrame frame = testing::CanonicalFrame();
  const std::vector<double> controls(25, 0.1);
  ASSERT_EQ(KnownTaskIds().size(), 15u);
  for (const std::string& id : KnownTaskIds()) {
    const TaskCost cost = AssembleTaskCost(id);
    EXPECT_FALSE(cost.terms.empty()) << id;
    for (const CostTerm& t : cost.terms) EXPECT_NO_THROW(t.Validate()) << id;
    double value = 0.0;
    EXPECT_NO_THROW(value = EvalTaskCost(cost, frame, controls, true)) << id;
    EXPECT_TRUE(std::isfinite(value)) << id;
    for (SiteId s : RequiredInputSites(cost)) {
      EXPECT_TRUE(frame.Has(s)) << id << " reads " << SiteName(s);
    }
  }
}

TEST(TaskLibrary, MoveGenericMatchesJMove) {
  const TaskCost cost = AssembleTaskCost("move_generic");
  ASSERT_EQ(cost.terms.size(), 3u);
  EXPECT_EQ(Kinds(cost), (std::multiset<TermKind>{TermKind::kGoalDistance,
                                                  TermKind::kSiteDistance,
                                                  TermKind::kVelocityPenalty}));
  const SiteFrame f = testing::CanonicalFrame();
  const TaskParams w = DefaultTaskParams("move_generic");
  EXPECT_NEAR(EvalTaskCost(cost, f, {}),
              JMove(f, {w.at("w_goal"), w.at("w_gripper"), w.at("w_vel")}),
              1e-12);
}

TEST(TaskLibrary, UprightGenericMatchesJUpright) {
  const TaskCost cost = AssembleTaskCost("upright_generic", {{"w_upright", 2.0}});
  const SiteFrame f = testing::CanonicalFrame();
  const TaskParams w = DefaultTaskParams("upright_generic");
  EXPECT_NEAR(EvalTaskCost(cost, f, {}),
              JUpright(f, {2.0, w.at("w_gripper")}).value, 1e-12);
}

TEST(TaskLibrary, E2eExtendsMove) {
  const TaskCost move = AssembleTaskCost("move_generic");
  const TaskCost e2e = AssembleTaskCost("e2e_mpc_move");
  const std::multiset<TermKind> k = Kinds(e2e);
  for (TermKind kind : Kinds(move)) EXPECT_GE(k.count(kind), 1u);
  EXPECT_GT(e2e.terms.size(), move.terms.size());
  EXPECT_EQ(k.count(TermKind::kControlPenalty), 1u);
  EXPECT_EQ(k.count(TermKind::kSafetyPenalty), 1u);
}

TEST(TaskLibrary, TireUprightTerms) {
  const TaskCost cost = AssembleTaskCost("tire_upright");
  const std::multiset<TermKind> k = Kinds(cost);
  EXPECT_EQ(k.count(TermKind::kExpAbsComponent), 1u);
  EXPECT_GE(k.count(TermKind::kSiteDistance), 2u);
  EXPECT_EQ(k.count(TermKind::kMinSiteDistance), 1u);
  EXPECT_EQ(k.count(TermKind::kControlPenalty), 1u);
  EXPECT_EQ(k.count(TermKind::kSafetyPenalty), 1u);
  for (const CostTerm& t : cost.terms) {
    if (t.kind == TermKind::kExpAbsComponent) {
      EXPECT_EQ(t.sites[0], sites::kObjectY);
      EXPECT_EQ(t.component, 2);
    }
  }
  const std::string listing = DescribeTaskCost(cost);
  EXPECT_NE(listing.find("exp_abs_component"), std::string::npos);
}

TEST(TaskLibrary, DescribeOneLinePerTerm) {
  const std::string text = DescribeTaskCost(AssembleTaskCost("move_generic"));
  std::istringstream in(text);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST(TaskLibrary, UnknownIdListsValidIds) {
  try {
    AssembleTaskCost("no_such_task");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const std::string& id : KnownTaskIds()) {
      EXPECT_NE(msg.find(id), std::string::npos) << id;
    }
  }
  EXPECT_THROW(AssembleTaskCost("move_generic", {{"w_bogus", 1.0}}), ConfigError);
}

TEST(TaskLibrary, WeightScalingPreservesArgmin) {
  const TaskCost base = AssembleTaskCost("move_generic");
  TaskParams scaled = DefaultTaskParams("move_generic");
  for (auto& [name, value] : scaled) value *= 4.0;
  const TaskCost big = AssembleTaskCost("move_generic", scaled);
  SiteFrame f = testing::CanonicalFrame();
  int argmin_a = -1, argmin_b = -1;
  double best_a = 1e300, best_b = 1e300;
  for (int i = 0; i < 20; ++i) {
    f.SetPoint(sites::kObject, Vec3(0.1 * i, 0.3, 0.3));
    const double a = EvalTaskCost(base, f, {});
    const double b = EvalTaskCost(big, f, {});
    EXPECT_NEAR(b, 4.0 * a, 1e-12);
    if (a < best_a) best_a = a, argmin_a = i;
    if (b < best_b) best_b = b, argmin_b = i;
  }
  EXPECT_EQ(argmin_a, argmin_b);
}

TEST(TaskLibrary, DynamicSitesFollowTheObject) {
  // the rugged box push approach site moves with the box
  const TaskCost cost = AssembleTaskCost("rugged_box_push");
  SiteFrame f = testing::CanonicalFrame();
  const double before = EvalTaskCost(cost, f, {});
  f.SetPoint(sites::kObject, f.Point(sites::kObject) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kGripper, f.Point(sites::kGripper) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kGoal, f.Point(sites::kGoal) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kTorso, f.Point(sites::kTorso) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kFrFoot, f.Point(sites::kFrFoot) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kFlFoot, f.Point(sites::kFlFoot) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kPelvis, f.Point(sites::kPelvis) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kHandle, f.Point(sites::kHandle) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kLeftPalm, f.Point(sites::kLeftPalm) + Vec3(0.5, 0.0, 0.0));
  f.SetPoint(sites::kRightPalm, f.Point(sites::kRightPalm) + Vec3(0.5, 0.0, 0.0));
  // translating the whole scene leaves a translation-invariant cost unchanged
  EXPECT_NEAR(EvalTaskCost(cost, f, {}), before, 1e-9);
}

}  // namespace
}  // namespace steer
