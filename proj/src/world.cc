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

#include "steer/world.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace steer {
namespace {

Vec2 Perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

Eigen::Matrix2d Rot(double yaw) {
  return Eigen::Rotation2Dd(yaw).toRotationMatrix();
}

bool Finite(const WorldState& s) {
  const RobotState& r = s.robot;
  const ObjectState& o = s.object;
  auto ok = [](const auto& v) {
    return v.allFinite() && v.cwiseAbs().maxCoeff() < 1e6;
  };
  return ok(r.base_pose) && ok(r.base_vel) && ok(r.arm_joints) &&
         ok(r.arm_vel) && ok(r.torso) && ok(r.torso_rate) &&
         ok(r.leg_joints) && ok(r.leg_vel) && std::isfinite(r.gripper_pos) &&
         ok(o.pose) && ok(o.vel) && std::isfinite(o.theta) &&
         std::isfinite(o.theta_rate) && o.quat.allFinite();
}

}  // namespace

JointControls::Vector ActuatorLimits::Upper() const {
  JointControls c;
  c.base() = base;
  c.arm().setConstant(arm);
  c.gripper() = gripper_hi;
  c.legs().setConstant(leg);
  c.torso().setConstant(torso);
  return c.u;
}

JointControls::Vector ActuatorLimits::Lower() const {
  JointControls c;
  c.u = -Upper();
  c.gripper() = gripper_lo;
  return c.u;
}

JointControls ActuatorLimits::Clamp(const JointControls& controls) const {
  JointControls out;
  out.u = controls.u.cwiseMax(Lower()).cwiseMin(Upper());
  return out;
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kRunning:
      return "running";
    case Outcome::kSuccess:
      return "success";
    case Outcome::kTimeout:
      return "timeout";
    case Outcome::kFailure:
      return "failure";
  }
  return "unknown";
}

void TaskSpec::Validate() const {
  if (!(pos_tol > 0.0 && vel_tol > 0.0 && orient_tol > 0.0 &&
        angvel_tol > 0.0 && time_limit > 0.0)) {
    throw ConfigError("task '" + task_id + "' tolerances must be positive");
  }
  if (!goal_pos.allFinite() || !q_upright.allFinite() ||
      q_upright.norm() < 1e-9) {
    throw ConfigError("task '" + task_id + "' has an invalid goal");
  }
}

double OrientationDistance(const Vec4& q, const Vec4& q_ref) {
  const double dot =
      std::min(1.0, std::abs(q.normalized().dot(q_ref.normalized())));
  return 2.0 * std::acos(dot);
}

Outcome CheckSuccess(const WorldState& state, const TaskSpec& spec,
                     double elapsed) {
  const ObjectState& o = state.object;
  bool success = false;
  if (spec.kind == TaskKind::kMove) {
    success = (o.pose.head<2>() - spec.goal_pos).norm() < spec.pos_tol &&
              o.vel.head<2>().norm() < spec.vel_tol;
  } else {
    const double rate = std::hypot(o.vel.z(), o.theta_rate);
    success = OrientationDistance(o.quat, spec.q_upright) < spec.orient_tol &&
              rate < spec.angvel_tol;
  }
  if (success) return Outcome::kSuccess;
  if (elapsed > spec.time_limit) return Outcome::kTimeout;
  return Outcome::kRunning;
}

PointKinematics ForwardArm(const RobotParams& p, const Vec3& base_pose,
                           const Vec6& q, double torso_height) {
  const double yaw = base_pose.z();
  const Vec2 shoulder_arm = Rot(yaw) * Vec2(p.shoulder_offset, 0.0);
  const Vec2 e1 = p.link1 * Vec2(std::cos(yaw + q[0]), std::sin(yaw + q[0]));
  const Vec2 e2 = p.link2 * Vec2(std::cos(yaw + q[0] + q[1]),
                                 std::sin(yaw + q[0] + q[1]));
  PointKinematics kin;
  const Vec2 xy = base_pose.head<2>() + shoulder_arm + e1 + e2;
  kin.position = Vec3(xy.x(), xy.y(), torso_height + p.lift * std::sin(q[2]));
  kin.jacobian(0, 0) = 1.0;
  kin.jacobian(1, 1) = 1.0;
  kin.jacobian.block<2, 1>(0, 2) = Perp(shoulder_arm + e1 + e2);
  kin.jacobian.block<2, 1>(0, 3) = Perp(e1 + e2);
  kin.jacobian.block<2, 1>(0, 4) = Perp(e2);
  kin.jacobian(2, 5) = p.lift * std::cos(q[2]);
  return kin;
}

PointKinematics BasePoint(const RobotParams& p, const Vec3& base_pose,
                          const Vec2& toward) {
  Vec2 d = toward - base_pose.head<2>();
  const double n = d.norm();
  d = n > 1e-12 ? Vec2(d / n) : Vec2::UnitX();
  const Vec2 r = p.base_radius * d;
  PointKinematics kin;
  kin.position = Vec3(base_pose.x() + r.x(), base_pose.y() + r.y(), 0.0);
  kin.jacobian(0, 0) = 1.0;
  kin.jacobian(1, 1) = 1.0;
  kin.jacobian.block<2, 1>(0, 2) = Perp(r);
  return kin;
}

Vec3 RobotUpAxis(const RobotState& robot) {
  const Eigen::Matrix3d r =
      (Eigen::AngleAxisd(robot.base_pose.z(), Vec3::UnitZ()) *
       Eigen::AngleAxisd(robot.torso.x(), Vec3::UnitY()) *
       Eigen::AngleAxisd(robot.torso.y(), Vec3::UnitX()))
          .toRotationMatrix();
  return r.col(2);
}

Vec6 World::ContactVelocity(const RobotState& robot) const {
  Vec6 v;
  v.head<2>() = Rot(robot.base_pose.z()) * robot.base_vel.head<2>();
  v[2] = robot.base_vel.z();
  v.tail<3>() = robot.arm_vel.head<3>();
  return v;
}

Eigen::Matrix3d World::Mobility(const PointKinematics& kin) const {
  Vec6 inv_mass;
  inv_mass << 1.0 / robot_.mass, 1.0 / robot_.mass, 1.0 / robot_.yaw_inertia,
      1.0 / robot_.arm_inertia, 1.0 / robot_.arm_inertia,
      1.0 / robot_.arm_inertia;
  return kin.jacobian * inv_mass.asDiagonal() * kin.jacobian.transpose();
}

void World::ApplyImpulse(RobotState* robot, const PointKinematics& kin,
                         const Vec3& impulse) const {
  Vec6 inv_mass;
  inv_mass << 1.0 / robot_.mass, 1.0 / robot_.mass, 1.0 / robot_.yaw_inertia,
      1.0 / robot_.arm_inertia, 1.0 / robot_.arm_inertia,
      1.0 / robot_.arm_inertia;
  const Vec6 dv = inv_mass.cwiseProduct(kin.jacobian.transpose() * impulse);
  robot->base_vel.head<2>() +=
      Rot(robot->base_pose.z()).transpose() * dv.head<2>();
  robot->base_vel.z() += dv[2];
  robot->arm_vel.head<3>() += dv.tail<3>();
}

double World::NormalImpulse(double depth, double vn, double k_nn,
                            double stiffness, double damping,
                            double separation, double h) {
  const double penalty = std::max(0.0, stiffness * depth - damping * vn) * h;
  return std::min(penalty, std::max(0.0, separation - vn) / k_nn);
}

PointKinematics World::Effector(const RobotState& robot) const {
  return ForwardArm(robot_, robot.base_pose, robot.arm_joints, robot.torso.z());
}

void World::Accelerate(WorldState* state, const JointControls& raw,
                       double h) const {
  const JointControls c = robot_.limits.Clamp(raw);
  RobotState& r = state->robot;
  if (!state->fallen) r.base_vel += h * c.base();
  r.arm_vel += h * c.arm();
  r.leg_vel += h * c.legs();
  r.gripper_target = c.gripper();
  if (!state->fallen) {
    for (int i = 0; i < 2; ++i) {
      r.torso_rate[i] +=
          h * (robot_.pendulum_gain * std::sin(r.torso[i]) + c.torso()[i]);
    }
    r.torso_rate[2] += h * c.torso()[2];
  }
}

void World::Integrate(WorldState* state, double h) const {
  RobotState& r = state->robot;
  r.base_pose.head<2>() += h * Rot(r.base_pose.z()) * r.base_vel.head<2>();
  r.base_pose.z() += h * r.base_vel.z();
  r.arm_joints += h * r.arm_vel;
  r.leg_joints += h * r.leg_vel;
  r.gripper_pos += (r.gripper_target - r.gripper_pos) *
                   (1.0 - std::exp(-robot_.gripper_rate * h));
  if (!state->fallen) r.torso += h * r.torso_rate;
  r.effector_pos = Effector(r).position;
  const FallLimits& f = robot_.fall;
  if (std::abs(r.torso.x()) > f.max_tilt ||
      std::abs(r.torso.y()) > f.max_tilt || r.torso.z() < f.min_height) {
    state->fallen = true;
    r.torso_rate.setZero();
    r.base_vel.setZero();
  }
}

WorldState World::Step(const WorldState& state, const JointControls& controls,
                       double dt) const {
  if (!(dt > 0.0)) throw InvalidInputError("step dt must be positive");
  WorldState next = state;
  if (state.diverged) return next;
  const int n = std::max(1, static_cast<int>(std::ceil(dt / substep_dt() - 1e-9)));
  const double h = dt / n;
  for (int i = 0; i < n; ++i) {
    Accelerate(&next, controls, h);
    StepObject(&next, h);
    Integrate(&next, h);
  }
  next.time = state.time + dt;
  if (!Finite(next) || !controls.u.allFinite()) next.diverged = true;
  return next;
}

void World::FillSites(const WorldState& state, SiteFrame* frame) const {
  const RobotState& r = state.robot;
  const double yaw = r.base_pose.z();
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  frame->SetAxis(sites::kWorldX, Vec3::UnitX());
  frame->SetAxis(sites::kWorldY, Vec3::UnitY());
  frame->SetAxis(sites::kWorldZ, Vec3::UnitZ());
  frame->SetAxis(sites::kRobotX, rz.col(0));
  frame->SetAxis(sites::kRobotY, rz.col(1));
  frame->SetAxis(sites::kRobotZ, RobotUpAxis(r));

  const Vec3 torso(r.base_pose.x(), r.base_pose.y(), r.torso.z());
  frame->SetPoint(sites::kTorso, torso);
  frame->SetPoint(sites::kPelvis, torso - Vec3(0.0, 0.0, 0.1));

  const PointKinematics eff = Effector(r);
  frame->SetPoint(sites::kGripper, eff.position);
  const double heading = yaw + r.arm_joints[0] + r.arm_joints[1];
  const Eigen::Matrix3d grip =
      (Eigen::AngleAxisd(heading, Vec3::UnitZ()) *
       Eigen::AngleAxisd(r.arm_joints[3], Vec3::UnitX()))
          .toRotationMatrix();
  frame->SetAxis(sites::kGripperX, grip.col(0));
  frame->SetAxis(sites::kGripperY, grip.col(1));
  frame->SetAxis(sites::kGripperZ, grip.col(2));
  frame->SetPoint(sites::kLeftPalm, eff.position + 0.08 * grip.col(1));
  frame->SetPoint(sites::kRightPalm, eff.position - 0.08 * grip.col(1));

  // front feet from hip, abduction and knee joints
  for (int leg = 0; leg < 2; ++leg) {
    const Vec3 q = r.leg_joints.segment<3>(3 * leg);
    const double side = leg == 0 ? 1.0 : -1.0;
    const Vec3 local(0.3 + 0.25 * std::sin(q[0]),
                     side * 0.15 + 0.1 * std::sin(q[1]),
                     0.05 + 0.2 * std::max(0.0, std::sin(q[2])));
    frame->SetPoint(leg == 0 ? sites::kFlFoot : sites::kFrFoot,
                    Vec3(r.base_pose.x(), r.base_pose.y(), 0.0) + rz * local);
  }

  frame->SetVector(sites::kBaseVel, r.base_vel);
  frame->SetVector(sites::kArmDeviation, r.arm_joints);
  frame->SetScalar(sites::kTorsoHeight, r.torso.z());
  frame->SetScalar(sites::kTorsoRoll, r.torso.y());
  frame->SetScalar(sites::kTorsoPitch, r.torso.x());
  frame->SetScalar(sites::kFallen, state.fallen ? 1.0 : 0.0);
  frame->SetScalar(sites::kGripperClosedCmd, r.gripper_target > 0.5 ? 1.0 : 0.0);
  frame->SetScalar(sites::kGripperError,
                   std::abs(r.gripper_target - r.gripper_pos));
}

void World::RefreshDerived(WorldState* state) const {
  state->robot.effector_pos = Effector(state->robot).position;
}

double World::KineticEnergy(const WorldState& state) const {
  const RobotState& r = state.robot;
  return 0.5 * robot_.mass * r.base_vel.head<2>().squaredNorm() +
         0.5 * robot_.yaw_inertia * r.base_vel.z() * r.base_vel.z() +
         0.5 * robot_.arm_inertia *
             (r.arm_vel.squaredNorm() + r.leg_vel.squaredNorm());
}

void AddTaskSites(const TaskSpec& spec, SiteFrame* frame) {
  const double z =
      frame->Has(sites::kObject) ? frame->Point(sites::kObject).z() : 0.0;
  frame->SetPoint(sites::kGoal, Vec3(spec.goal_pos.x(), spec.goal_pos.y(), z));
  frame->SetQuat(sites::kUprightQuat, spec.q_upright);
}

SiteFrame BuildFrame(const World& world, const WorldState& state,
                     const TaskSpec& spec) {
  SiteFrame frame;
  world.FillSites(state, &frame);
  AddTaskSites(spec, &frame);
  return frame;
}

}  // namespace steer
