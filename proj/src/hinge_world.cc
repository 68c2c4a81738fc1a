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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "steer/world.h"

namespace steer {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// plate direction from the hinge toward its free edge, in (x, z)
Vec2 PlateDir(double theta) { return Vec2(-std::cos(theta), std::sin(theta)); }

}  // namespace

HingeWorld::HingeWorld(HingeParams params, RobotParams robot)
    : World(std::move(robot)), params_(params) {
  if (!(params_.length > 0.0 && params_.width > 0.0 && params_.mass > 0.0 &&
        params_.stiffness > 0.0 && params_.damping >= 0.0 &&
        params_.contact_friction >= 0.0 && params_.hinge_damping >= 0.0 &&
        params_.balance_angle > 0.0 && params_.balance_angle < kHalfPi &&
        params_.substeps >= 1)) {
    throw ConfigError("invalid hinge world parameters");
  }
}

double HingeWorld::substep_dt() const { return 0.02 / params_.substeps; }

Vec4 HingeWorld::PlateQuat(double theta) {
  const double half = 0.5 * (theta - kHalfPi);
  return Vec4(std::cos(half), 0.0, std::sin(half), 0.0);
}

Vec3 HingeWorld::PlateCenter(double theta) const {
  const Vec2 d = PlateDir(theta);
  return params_.hinge + 0.5 * params_.length * Vec3(d.x(), 0.0, d.y());
}

WorldState HingeWorld::MakeState(const Vec3& robot_pose, double theta) const {
  WorldState s;
  s.robot.base_pose = robot_pose;
  s.robot.effector_pos = Effector(s.robot).position;
  s.object.theta = std::clamp(theta, 0.0, kHalfPi);
  s.object.quat = PlateQuat(s.object.theta);
  s.object.mass = params_.mass;
  s.object.friction = 0.0;
  s.object.pose = PlateCenter(s.object.theta);
  return s;
}

void HingeWorld::StepObject(WorldState* state, double h) const {
  ObjectState& o = state->object;
  RobotState& r = state->robot;
  const HingeParams& p = params_;
  const double inertia = p.mass * p.length * p.length / 3.0;

  // gravity about the balance angle plus hinge damping
  const double torque =
      p.mass * p.gravity * 0.5 * p.length * std::sin(o.theta - p.balance_angle) -
      p.hinge_damping * o.theta_rate;
  o.theta_rate += h * torque / inertia;

  // effector sphere against the plate in the x-z plane
  const PointKinematics kin = Effector(r);
  const Vec3 eff = kin.position;
  if (std::abs(eff.y() - p.hinge.y()) <= 0.5 * p.width) {
    const Vec2 hinge(p.hinge.x(), p.hinge.z());
    const Vec2 dir = PlateDir(o.theta);
    const Vec2 pe(eff.x(), eff.z());
    const double s = std::clamp((pe - hinge).dot(dir), 0.0, p.length);
    const Vec2 closest = hinge + s * dir;
    const Vec2 d = pe - closest;
    const double dist = d.norm();
    const double depth = robot_.effector_radius + 0.5 * p.thickness - dist;
    if (depth > 0.0 && dist > 1e-12) {
      const Vec2 n = d / dist;  // plate toward effector
      const Vec2 t(-n.y(), n.x());
      // plate point velocity per unit theta rate
      const Vec2 g = s * Vec2(std::sin(o.theta), std::cos(o.theta));
      // a plate pressed into its stop does not move
      const bool locked = (o.theta <= 0.0 && g.dot(n) > 0.0) ||
                          (o.theta >= kHalfPi && g.dot(n) < 0.0);

      const Vec6 qd = ContactVelocity(r);
      const Vec3 v3 = kin.jacobian * qd;
      const Vec2 v_eff(v3.x(), v3.z());
      const Vec2 rel = locked ? v_eff : Vec2(v_eff - o.theta_rate * g);

      const Eigen::Matrix3d m3 = Mobility(kin);
      Eigen::Matrix2d k;
      k << m3(0, 0), m3(0, 2), m3(2, 0), m3(2, 2);
      if (!locked) k += g * g.transpose() / inertia;

      const double vn = rel.dot(n);
      // pushes out of the plate over about 0.1 s
      const double jn = NormalImpulse(depth, vn, n.dot(k * n), p.stiffness,
                                      p.damping, depth / 0.1, h);
      const double vt = rel.dot(t) + t.dot(k * n) * jn;
      const double cap = p.contact_friction * jn;
      const double jt = std::clamp(-vt / t.dot(k * t), -cap, cap);

      // impulse acts on the effector; the plate receives the opposite
      const Vec2 impulse = jn * n + jt * t;
      ApplyImpulse(&r, kin, Vec3(impulse.x(), 0.0, impulse.y()));
      if (!locked) o.theta_rate -= g.dot(impulse) / inertia;
    }
  }

  o.theta += h * o.theta_rate;
  // inelastic stops
  if (o.theta <= 0.0) {
    o.theta = 0.0;
    o.theta_rate = std::max(0.0, o.theta_rate);
  } else if (o.theta >= kHalfPi) {
    o.theta = kHalfPi;
    o.theta_rate = std::min(0.0, o.theta_rate);
  }
  o.quat = PlateQuat(o.theta);
  o.pose = PlateCenter(o.theta);
}

void HingeWorld::FillSites(const WorldState& state, SiteFrame* frame) const {
  World::FillSites(state, frame);
  const ObjectState& o = state.object;
  const Eigen::Quaterniond q(o.quat[0], o.quat[1], o.quat[2], o.quat[3]);
  const Eigen::Matrix3d rot = q.normalized().toRotationMatrix();
  const Vec3 center = PlateCenter(o.theta);
  frame->SetPoint(sites::kObject, center);
  frame->SetAxis(sites::kObjectX, rot.col(0));
  frame->SetAxis(sites::kObjectY, rot.col(1));
  frame->SetAxis(sites::kObjectZ, rot.col(2));
  frame->SetQuat(sites::kObjectQuat, o.quat);
  const Vec2 g = 0.5 * params_.length *
                 Vec2(std::sin(o.theta), std::cos(o.theta)) * o.theta_rate;
  frame->SetVector(sites::kObjectVel, Vec3(g.x(), 0.0, g.y()));
  frame->SetVector(sites::kObjectAngVel, Vec3(0.0, o.theta_rate, 0.0));
  // free edge
  const Vec2 d = PlateDir(o.theta);
  frame->SetPoint(sites::kHandle,
                  params_.hinge + params_.length * Vec3(d.x(), 0.0, d.y()));
}

void HingeWorld::RefreshDerived(WorldState* state) const {
  World::RefreshDerived(state);
  ObjectState& o = state->object;
  o.theta = std::clamp(o.theta, 0.0, kHalfPi);
  o.quat = PlateQuat(o.theta);
  o.pose = PlateCenter(o.theta);
}

double HingeWorld::KineticEnergy(const WorldState& state) const {
  const double inertia = params_.mass * params_.length * params_.length / 3.0;
  return World::KineticEnergy(state) +
         0.5 * inertia * state.object.theta_rate * state.object.theta_rate;
}

}  // namespace steer
