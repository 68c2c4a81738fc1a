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

#include <Eigen/Geometry>

#include "steer/world.h"

namespace steer {
namespace {

Vec2 Perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

}  // namespace

PushWorld::PushWorld(PushParams params, RobotParams robot)
    : World(std::move(robot)), params_(params) {
  if (!(params_.object_radius > 0.0 && params_.object_mass > 0.0 &&
        params_.ground_friction >= 0.0 && params_.contact_friction >= 0.0 &&
        params_.stiffness > 0.0 && params_.damping >= 0.0 &&
        params_.substeps >= 1)) {
    throw ConfigError("invalid push world parameters");
  }
}

double PushWorld::substep_dt() const { return 0.02 / params_.substeps; }

WorldState PushWorld::MakeState(const Vec3& robot_pose,
                                const Vec3& object) const {
  WorldState s;
  s.robot.base_pose = robot_pose;
  s.robot.effector_pos = Effector(s.robot).position;
  s.object.pose = object;
  s.object.mass = params_.object_mass;
  s.object.friction = params_.ground_friction;
  const Eigen::Quaterniond q(Eigen::AngleAxisd(object.z(), Vec3::UnitZ()));
  s.object.quat = Vec4(q.w(), q.x(), q.y(), q.z());
  return s;
}

void PushWorld::StepObject(WorldState* state, double h) const {
  ObjectState& o = state->object;
  RobotState& r = state->robot;
  const double radius = params_.object_radius;
  const double inv_mass = 1.0 / o.mass;
  const double inv_inertia = 2.0 / (o.mass * radius * radius);

  // effector and base disk against the object disk
  auto contact = [&](const PointKinematics& kin, double robot_radius) {
    const Vec2 d = o.pose.head<2>() - kin.position.head<2>();
    const double dist = d.norm();
    const double depth = robot_radius + radius - dist;
    if (depth <= 0.0 || dist < 1e-12) return;
    const Vec2 n = d / dist;
    const Vec2 t = Perp(n);
    const Vec2 arm = -radius * n;  // object center to contact point

    const Vec6 qd = ContactVelocity(r);
    const Vec2 v_robot = (kin.jacobian * qd).head<2>();
    const Vec2 v_object = o.vel.head<2>() + o.vel.z() * Perp(arm);
    const Vec2 rel = v_object - v_robot;

    const Vec2 arm_perp = Perp(arm);
    const Eigen::Matrix2d k =
        inv_mass * Eigen::Matrix2d::Identity() +
        inv_inertia * arm_perp * arm_perp.transpose() +
        Mobility(kin).topLeftCorner<2, 2>();

    const double vn = rel.dot(n);
    const double jn = NormalImpulse(depth, vn, n.dot(k * n), params_.stiffness,
                                    params_.damping, 0.0, h);
    const double vt = rel.dot(t) + t.dot(k * n) * jn;
    const double cap = params_.contact_friction * jn;
    const double jt = std::clamp(-vt / t.dot(k * t), -cap, cap);

    const Vec2 impulse = jn * n + jt * t;
    o.vel.head<2>() += inv_mass * impulse;
    o.vel.z() += inv_inertia * (arm.x() * impulse.y() - arm.y() * impulse.x());
    ApplyImpulse(&r, kin, Vec3(-impulse.x(), -impulse.y(), 0.0));
  };
  contact(Effector(r), robot_.effector_radius);
  // base boundary point facing the object, treated as a zero-radius point
  contact(BasePoint(robot_, r.base_pose, o.pose.head<2>()), 0.0);

  // ground friction: reduce speed, never reverse
  const double mu_g = o.friction * params_.gravity;
  const double speed = o.vel.head<2>().norm();
  if (speed > 0.0) {
    o.vel.head<2>() *= std::max(0.0, 1.0 - mu_g * h / speed);
  }
  const double spin = std::abs(o.vel.z());
  if (spin > 0.0) {
    const double drop = 4.0 / 3.0 * mu_g * h / radius;
    o.vel.z() *= std::max(0.0, 1.0 - drop / spin);
  }

  o.pose += h * o.vel;
  const Eigen::Quaterniond q(Eigen::AngleAxisd(o.pose.z(), Vec3::UnitZ()));
  o.quat = Vec4(q.w(), q.x(), q.y(), q.z());
}

void PushWorld::FillSites(const WorldState& state, SiteFrame* frame) const {
  World::FillSites(state, frame);
  const ObjectState& o = state.object;
  const Vec3 center(o.pose.x(), o.pose.y(), params_.object_height);
  frame->SetPoint(sites::kObject, center);
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(o.pose.z(), Vec3::UnitZ()).toRotationMatrix();
  frame->SetAxis(sites::kObjectX, rot.col(0));
  frame->SetAxis(sites::kObjectY, rot.col(1));
  frame->SetAxis(sites::kObjectZ, rot.col(2));
  frame->SetQuat(sites::kObjectQuat, o.quat);
  frame->SetVector(sites::kObjectVel, Vec3(o.vel.x(), o.vel.y(), 0.0));
  frame->SetVector(sites::kObjectAngVel, Vec3(0.0, 0.0, o.vel.z()));
  frame->SetPoint(sites::kHandle, center + rot * Vec3(-params_.object_radius,
                                                      0.0, 0.2));
}

void PushWorld::RefreshDerived(WorldState* state) const {
  World::RefreshDerived(state);
  const Eigen::Quaterniond q(
      Eigen::AngleAxisd(state->object.pose.z(), Vec3::UnitZ()));
  state->object.quat = Vec4(q.w(), q.x(), q.y(), q.z());
}

double PushWorld::KineticEnergy(const WorldState& state) const {
  const ObjectState& o = state.object;
  const double inertia =
      0.5 * o.mass * params_.object_radius * params_.object_radius;
  return World::KineticEnergy(state) +
         0.5 * o.mass * o.vel.head<2>().squaredNorm() +
         0.5 * inertia * o.vel.z() * o.vel.z();
}

}  // namespace steer
