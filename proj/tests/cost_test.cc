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
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "fixtures.h"

namespace steer {
namespace {

CostTerm Term(TermKind kind, std::vector<SiteId> s, double weight = 1.0) {
  CostTerm t;
  t.kind = kind;
  t.sites = std::move(s);
  t.weight = weight;
  t.label = std::string(TermKindName(kind));
  return t;
}

SiteFrame AxisFrame(const Vec3& a, const Vec3& b) {
  SiteFrame f;
  f.SetAxis(sites::kObjectZ, a);
  f.SetAxis(sites::kWorldZ, b);
  return f;
}

TEST(ExpAxisAlignment, Examples) {
  CostTerm t = Term(TermKind::kExpAxisAlignment, {sites::kObjectZ, sites::kWorldZ});
  t.alpha = 4.0;
  EXPECT_EQ(EvalTerm(t, AxisFrame(Vec3::UnitZ(), Vec3::UnitZ()), {}), 0.0);
  t.alpha = 1.0;
  EXPECT_NEAR(EvalTerm(t, AxisFrame(-Vec3::UnitZ(), Vec3::UnitZ()), {}),
              1.0 - std::exp(-2.0), 1e-15);
  EXPECT_NEAR(1.0 - std::exp(-2.0), 0.8647, 1e-4);
}

TEST(ExpAxisAlignment, MonotoneAndBounded) {
  CostTerm t = Term(TermKind::kExpAxisAlignment, {sites::kObjectZ, sites::kWorldZ});
  t.alpha = 3.0;
  double previous = -1.0;
  // tilt increases, so the dot product decreases and the cost rises
  for (int i = 0; i <= 100; ++i) {
    const double angle = M_PI * i / 100;
    const Vec3 axis(std::sin(angle), 0.0, std::cos(angle));
    const double v = EvalTerm(t, AxisFrame(axis, Vec3::UnitZ()), {});
    EXPECT_GT(v, previous - 1e-15);
    EXPECT_LE(v, 1.0 - std::exp(-2.0 * t.alpha) + 1e-12);
    previous = v;
  }
}

TEST(MinSiteDistance, Example) {
  SiteFrame f;
  const SiteId a = InternSite("test.a"), b = InternSite("test.b"),
               c = InternSite("test.c");
  f.SetPoint(a, Vec3::Zero());
  f.SetPoint(b, Vec3(1, 0, 0));
  f.SetPoint(c, Vec3(0, 2, 0));
  EXPECT_EQ(EvalTerm(Term(TermKind::kMinSiteDistance, {a, b, c}), f, {}), 1.0);
  // pairs (b, c) and (a, c); anchored at b the same list would give 1
  CostTerm paired = Term(TermKind::kMinSiteDistance, {b, c, a, c});
  EXPECT_EQ(EvalTerm(paired, f, {}), 1.0);
  paired.paired = true;
  EXPECT_EQ(EvalTerm(paired, f, {}), 2.0);
  paired.sites.pop_back();
  EXPECT_THROW(paired.Validate(), ConfigError);
}

TEST(MinSiteDistance, NeverExceedsAnyDistance) {
  const SiteFrame f = testing::CanonicalFrame();
  const std::vector<SiteId> s = {sites::kGripper, sites::kObject, sites::kGoal,
                                 sites::kHandle, sites::kTorso};
  const double m = EvalTerm(Term(TermKind::kMinSiteDistance, s), f, {});
  for (size_t i = 1; i < s.size(); ++i) {
    EXPECT_LE(m, (f.Point(s[0]) - f.Point(s[i])).norm());
  }
}

TEST(CappedNegatedProximity, CapsAndSign) {
  SiteFrame f;
  f.SetPoint(sites::kTorso, Vec3::Zero());
  f.SetPoint(sites::kObject, Vec3(3, 0, 0));
  CostTerm t = Term(TermKind::kCappedNegatedProximity,
                    {sites::kTorso, sites::kObject}, 2.0);
  t.d_thresh = 1.0;
  EXPECT_EQ(EvalTerm(t, f, {}), -2.0);
  t.d_thresh = 5.0;
  EXPECT_EQ(EvalTerm(t, f, {}), -6.0);
}

TEST(AxisDotPenalty, Modes) {
  CostTerm t = Term(TermKind::kAxisDotPenalty, {sites::kObjectZ, sites::kWorldZ});
  const SiteFrame f = AxisFrame(-Vec3::UnitZ(), Vec3::UnitZ());
  EXPECT_EQ(EvalTerm(t, f, {}), 2.0);
  t.dot_mode = AxisDotMode::kAbsOneMinusDot;
  EXPECT_EQ(EvalTerm(t, f, {}), 2.0);
  t.dot_mode = AxisDotMode::kOneMinusAbsDot;
  EXPECT_EQ(EvalTerm(t, f, {}), 0.0);
}

TEST(ExpAbsComponent, ZeroComponentGivesOne) {
  SiteFrame f;
  f.SetAxis(sites::kObjectY, Vec3(0, 1, 0));
  CostTerm t = Term(TermKind::kExpAbsComponent, {sites::kObjectY});
  t.sigma = 0.5;
  EXPECT_EQ(EvalTerm(t, f, {}), 1.0);
  f.SetAxis(sites::kObjectY, Vec3(0, 0, -1));
  EXPECT_NEAR(EvalTerm(t, f, {}), std::exp(2.0), 1e-12);
}

TEST(GraspBonus, ResistedAndEmptyClose) {
  SiteFrame f;
  f.SetScalar(sites::kGripperClosedCmd, 1.0);
  f.SetScalar(sites::kGripperError, 0.3);
  CostTerm t = Term(TermKind::kGraspBonus,
                    {sites::kGripperClosedCmd, sites::kGripperError});
  t.resistance_threshold = 0.1;
  t.empty_close_penalty = 0.5;
  EXPECT_EQ(EvalTerm(t, f, {}), -1.0);
  f.SetScalar(sites::kGripperError, 0.01);
  EXPECT_EQ(EvalTerm(t, f, {}), 0.5);
  f.SetScalar(sites::kGripperClosedCmd, 0.0);
  EXPECT_EQ(EvalTerm(t, f, {}), 0.0);
}

TEST(SafetyPenalty, Violations) {
  SiteFrame f;
  f.SetScalar(sites::kTorsoHeight, 0.2);
  f.SetScalar(sites::kTorsoRoll, 0.6);
  f.SetScalar(sites::kTorsoPitch, -0.1);
  f.SetScalar(sites::kFallen, 1.0);
  CostTerm t = Term(TermKind::kSafetyPenalty,
                    {sites::kTorsoHeight, sites::kTorsoRoll, sites::kTorsoPitch,
                     sites::kFallen});
  t.min_height = 0.3;
  t.max_tilt = 0.5;
  EXPECT_NEAR(EvalTerm(t, f, {}), 1.0 + 0.1 + 0.1, 1e-12);
  f.SetScalar(sites::kTorsoHeight, 0.5);
  f.SetScalar(sites::kTorsoRoll, 0.0);
  f.SetScalar(sites::kFallen, 0.0);
  EXPECT_EQ(EvalTerm(t, f, {}), 0.0);
}

TEST(ControlAndVelocityPenalty, Norms) {
  SiteFrame f;
  f.SetVector(sites::kObjectVel, Vec3(3, 4, 0));
  EXPECT_EQ(EvalTerm(Term(TermKind::kVelocityPenalty, {sites::kObjectVel}), f, {}),
            5.0);
  CostTerm sq = Term(TermKind::kVelocityPenalty, {sites::kObjectVel});
  sq.power = 2;
  EXPECT_EQ(EvalTerm(sq, f, {}), 25.0);
  const std::vector<double> u = {3.0, 4.0};
  EXPECT_EQ(EvalTerm(Term(TermKind::kControlPenalty, {}, 0.5), f, u), 2.5);
}

TEST(EvalTerm, MissingSiteNamesTheSite) {
  SiteFrame f;
  f.SetPoint(sites::kObject, Vec3::Zero());
  try {
    EvalTerm(Term(TermKind::kGoalDistance, {sites::kObject, sites::kGoal}), f, {});
    FAIL() << "expected a site resolution error";
  } catch (const SiteResolutionError& e) {
    EXPECT_EQ(e.site(), "goal");
  }
}

TEST(JMove, Examples) {
  SiteFrame f;
  f.SetPoint(sites::kObject, Vec3(1, 1, 0));
  f.SetPoint(sites::kGoal, Vec3(1, 1, 0));
  f.SetPoint(sites::kGripper, Vec3(1, 1, 0));
  f.SetVector(sites::kObjectVel, Vec3::Zero());
  EXPECT_EQ(JMove(f, {}), 0.0);
  f.SetPoint(sites::kGoal, Vec3(3, 1, 0));
  f.SetPoint(sites::kGripper, Vec3(1, 0, 0));
  f.SetVector(sites::kObjectVel, Vec3(0.3, 0.4, 0));
  EXPECT_NEAR(JMove(f, {1, 1, 1}), 3.5, 1e-15);
  EXPECT_NEAR(JMove(f, {1, 1, 0}), 3.0, 1e-15);
}

Vec4 AxisAngleQuat(double angle, const Vec3& axis) {
  const Eigen::Quaterniond q(Eigen::AngleAxisd(angle, axis.normalized()));
  return Vec4(q.w(), q.x(), q.y(), q.z());
}

TEST(JUpright, Examples) {
  SiteFrame f;
  f.SetPoint(sites::kObject, Vec3(1, 0, 0));
  f.SetPoint(sites::kGripper, Vec3(1, 0, 0));
  f.SetQuat(sites::kUprightQuat, Vec4(1, 0, 0, 0));
  f.SetQuat(sites::kObjectQuat, Vec4(1, 0, 0, 0));
  EXPECT_EQ(JUpright(f, {}).value, 0.0);
  f.SetQuat(sites::kObjectQuat, AxisAngleQuat(M_PI / 2, Vec3::UnitX()));
  const double tilted = JUpright(f, {1.0, 0.0}).value;
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  EXPECT_NEAR(tilted, std::sqrt((c - 1) * (c - 1) + s * s), 1e-15);
  EXPECT_NEAR(tilted, std::sqrt(2.0 - std::sqrt(2.0)), 1e-15);
  f.SetQuat(sites::kObjectQuat, -AxisAngleQuat(M_PI / 2, Vec3::UnitX()));
  EXPECT_EQ(JUpright(f, {1.0, 0.0}).value, tilted);
}

TEST(JUpright, FlagsRenormalization) {
  SiteFrame f;
  f.SetPoint(sites::kObject, Vec3::Zero());
  f.SetPoint(sites::kGripper, Vec3::Zero());
  f.SetQuat(sites::kUprightQuat, Vec4(1, 0, 0, 0));
  f.SetQuat(sites::kObjectQuat, Vec4(2, 0, 0, 0));
  const UprightValue v = JUpright(f, {});
  EXPECT_TRUE(v.renormalized);
  EXPECT_NEAR(v.value, 0.0, 1e-15);
}

TEST(JUpright, DoubleCoverInvariance) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n;
  SiteFrame f;
  f.SetPoint(sites::kObject, Vec3::Zero());
  f.SetPoint(sites::kGripper, Vec3(0.1, 0, 0));
  for (int i = 0; i < 1000; ++i) {
    const Vec4 q = Vec4(n(gen), n(gen), n(gen), n(gen)).normalized();
    const Vec4 u = Vec4(n(gen), n(gen), n(gen), n(gen)).normalized();
    double values[4];
    int k = 0;
    for (double sq : {1.0, -1.0}) {
      for (double su : {1.0, -1.0}) {
        f.SetQuat(sites::kObjectQuat, sq * q);
        f.SetQuat(sites::kUprightQuat, su * u);
        values[k++] = JUpright(f, {}).value;
      }
    }
    for (int j = 1; j < 4; ++j) EXPECT_NEAR(values[j], values[0], 1e-12);
  }
}

TEST(EvalTaskCost, AdditivityPermutationAndScaling) {
  const SiteFrame f = testing::CanonicalFrame();
  TaskCost cost;
  cost.terms = {Term(TermKind::kGoalDistance, {sites::kObject, sites::kGoal}, 0.7),
                Term(TermKind::kSiteDistance, {sites::kGripper, sites::kObject}, 0.3),
                Term(TermKind::kVelocityPenalty, {sites::kObjectVel}, 1.1),
                Term(TermKind::kAxisDotPenalty, {sites::kObjectZ, sites::kWorldZ}, 0.4),
                Term(TermKind::kCappedNegatedProximity,
                     {sites::kTorso, sites::kObject}, 0.2)};
  const std::vector<double> u = {0.1, -0.2};
  const double total = EvalTaskCost(cost, f, u);
  // compensated summation oracle
  double sum = 0.0, comp = 0.0;
  for (const CostTerm& t : cost.terms) {
    const double y = EvalTerm(t, f, u) - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  EXPECT_NEAR(total, sum, 1e-12);
  std::vector<int> order = {0, 1, 2, 3, 4};
  while (std::next_permutation(order.begin(), order.end())) {
    TaskCost p;
    for (int i : order) p.terms.push_back(cost.terms[i]);
    EXPECT_NEAR(EvalTaskCost(p, f, u), total, 1e-12);
  }
  TaskCost scaled = cost;
  for (CostTerm& t : scaled.terms) t.weight *= 3.0;
  EXPECT_NEAR(EvalTaskCost(scaled, f, u), 3.0 * total, 1e-12);
}

TEST(EvalTaskCost, TwoTermsSum) {
  SiteFrame f;
  f.SetScalar(sites::kTorsoHeight, 0.0);
  f.SetVector(sites::kObjectVel, Vec3(1.5, 0, 0));
  f.SetVector(sites::kBaseVel, Vec3(0, 2.0, 0));
  TaskCost cost;
  cost.terms = {Term(TermKind::kVelocityPenalty, {sites::kObjectVel}),
                Term(TermKind::kVelocityPenalty, {sites::kBaseVel})};
  EXPECT_EQ(EvalTaskCost(cost, f, {}), 3.5);
}

TEST(EvalTaskCost, TerminalOnlyAndTerminalTerms) {
  const SiteFrame f = testing::CanonicalFrame();
  TaskCost cost;
  cost.terms = {Term(TermKind::kGoalDistance, {sites::kObject, sites::kGoal})};
  cost.terminal_terms = {Term(TermKind::kVelocityPenalty, {sites::kObjectVel})};
  const double running = EvalTerm(cost.terms[0], f, {});
  const double terminal = EvalTerm(cost.terminal_terms[0], f, {});
  EXPECT_EQ(EvalTaskCost(cost, f, {}, false), running);
  EXPECT_EQ(EvalTaskCost(cost, f, {}, true), running + terminal);
  cost.terminal_only = true;
  EXPECT_EQ(EvalTaskCost(cost, f, {}, false), 0.0);
  EXPECT_EQ(EvalTaskCost(cost, f, {}, true), running + terminal);
}

TEST(ApplyRules, DesiredSites) {
  SiteFrame f = testing::CanonicalFrame();
  const SiteId out = InternSite("test.rule_out");
  DesiredSiteRule behind;
  behind.kind = DesiredSiteRule::Kind::kBehindFromGoal;
  behind.output = out;
  behind.source = sites::kObject;
  behind.reference = sites::kGoal;
  behind.distance = 0.5;
  const SiteFrame r = ApplyRules(std::vector<DesiredSiteRule>{behind}, f);
  Vec3 dir = f.Point(sites::kGoal) - f.Point(sites::kObject);
  dir.z() = 0.0;
  const Vec3 expected = f.Point(sites::kObject) - 0.5 * dir.normalized();
  EXPECT_NEAR((r.Point(out) - expected).norm(), 0.0, 1e-12);
  // recomputed from the current frame
  f.SetPoint(sites::kObject, Vec3(0, 0, 0.3));
  const SiteFrame r2 = ApplyRules(std::vector<DesiredSiteRule>{behind}, f);
  EXPECT_GT((r2.Point(out) - r.Point(out)).norm(), 0.1);

  DesiredSiteRule local;
  local.kind = DesiredSiteRule::Kind::kOffsetInObjectFrame;
  local.output = out;
  local.source = sites::kObject;
  local.reference = sites::kUprightQuat;  // identity
  local.offset = Vec3(0.1, 0.2, 0.3);
  EXPECT_EQ(ApplyRules(std::vector<DesiredSiteRule>{local}, f).Point(out),
            f.Point(sites::kObject) + local.offset);

  DesiredSiteRule height;
  height.kind = DesiredSiteRule::Kind::kReplaceHeight;
  height.output = out;
  height.source = sites::kTorso;
  height.offset = Vec3(0, 0, 0.7);
  const Vec3 h = ApplyRules(std::vector<DesiredSiteRule>{height}, f).Point(out);
  EXPECT_EQ(h.z(), 0.7);
  EXPECT_EQ(h.x(), f.Point(sites::kTorso).x());

  DesiredSiteRule unit;
  unit.kind = DesiredSiteRule::Kind::kUnitDirection;
  unit.output = out;
  unit.source = sites::kObject;
  unit.reference = sites::kGoal;
  EXPECT_NEAR(ApplyRules(std::vector<DesiredSiteRule>{unit}, f).Axis(out).norm(),
              1.0, 1e-12);
}

TEST(QuatDistance, Symmetric) {
  const Vec4 q = AxisAngleQuat(0.4, Vec3(1, 2, 3));
  EXPECT_EQ(QuatDistance(q, q), 0.0);
  EXPECT_EQ(QuatDistance(q, -q), 0.0);
}

}  // namespace
}  // namespace steer
