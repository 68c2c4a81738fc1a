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

#ifndef STEER_WORLD_H_
#define STEER_WORLD_H_

#include <memory>
#include <string>
#include <string_view>

#include "steer/site_frame.h"
#include "steer/types.h"

namespace steer {

struct RobotState {
  Vec3 base_pose = Vec3::Zero();  // x, y, yaw
  Vec3 base_vel = Vec3::Zero();   // body frame vx, vy, wz
  Vec6 arm_joints = Vec6::Zero();
  Vec6 arm_vel = Vec6::Zero();
  // derived from base_pose, arm_joints and torso height by the world
  Vec3 effector_pos = Vec3::Zero();
  double gripper_pos = 1.0;
  double gripper_target = 1.0;
  Vec3 torso = Vec3(0.0, 0.0, 0.5);  // pitch, roll, height
  Vec3 torso_rate = Vec3::Zero();
  Vec12 leg_joints = Vec12::Zero();
  Vec12 leg_vel = Vec12::Zero();
};

struct ObjectState {
  Vec3 pose = Vec3::Zero();  // push world: x, y, yaw
  Vec3 vel = Vec3::Zero();   // push world: vx, vy, wz (world frame)
  double theta = 0.0;        // hinge world: plate angle
  double theta_rate = 0.0;
  Vec4 quat = Vec4(1.0, 0.0, 0.0, 0.0);  // w, x, y, z
  double mass = 1.5;
  double friction = 0.5;
};

struct WorldState {
  double time = 0.0;
  RobotState robot;
  ObjectState object;
  bool fallen = false;
  bool diverged = false;
};

// Joint-level controls, ordered like the command: base body accelerations
// (3), arm joint accelerations (6), gripper position target (1), leg joint
// accelerations (12), torso pitch/roll/height accelerations (3).
struct JointControls {
  static constexpr int kDim = 25;
  using Vector = Eigen::Matrix<double, kDim, 1>;

  Vector u = Vector::Zero();

  auto base() { return u.segment<3>(0); }
  auto arm() { return u.segment<6>(3); }
  double& gripper() { return u[9]; }
  auto legs() { return u.segment<12>(10); }
  auto torso() { return u.segment<3>(22); }
  auto base() const { return u.segment<3>(0); }
  auto arm() const { return u.segment<6>(3); }
  double gripper() const { return u[9]; }
  auto legs() const { return u.segment<12>(10); }
  auto torso() const { return u.segment<3>(22); }
};

struct ActuatorLimits {
  Vec3 base = Vec3(4.0, 4.0, 6.0);
  double arm = 25.0;
  double leg = 25.0;
  double torso = 30.0;
  double gripper_lo = 0.0;
  double gripper_hi = 1.0;

  // symmetric bound per control (gripper maps to its range)
  JointControls::Vector Upper() const;
  JointControls::Vector Lower() const;
  JointControls Clamp(const JointControls& controls) const;
};

enum class TaskKind { kMove, kUpright };
enum class Outcome { kRunning, kSuccess, kTimeout, kFailure };

std::string_view OutcomeName(Outcome outcome);

struct TaskSpec {
  std::string task_id = "move";
  TaskKind kind = TaskKind::kMove;
  Vec2 goal_pos = Vec2(2.0, 0.5);
  Vec4 q_upright = Vec4(1.0, 0.0, 0.0, 0.0);
  double pos_tol = 0.1;
  double vel_tol = 0.05;
  double orient_tol = 0.1;
  double angvel_tol = 0.05;
  double time_limit = 30.0;

  void Validate() const;
};

// angle of the relative rotation between two unit quaternions
double OrientationDistance(const Vec4& q, const Vec4& q_ref);

Outcome CheckSuccess(const WorldState& state, const TaskSpec& spec,
                     double elapsed);

struct FallLimits {
  double max_tilt = 0.7;
  double min_height = 0.25;
};

// Shared robot model. The base is a disk driven by body-frame accelerations;
// joints are double integrators; torso pitch and roll are inverted pendulums.
struct RobotParams {
  double mass = 25.0;
  double yaw_inertia = 2.0;
  double arm_inertia = 1.0;  // generalized inertia seen by arm contacts
  double base_radius = 0.3;
  double shoulder_offset = 0.2;
  double link1 = 0.35;
  double link2 = 0.35;
  double lift = 0.35;  // effector height swing of joint 2
  double effector_radius = 0.05;
  double pendulum_gain = 9.0;
  double gripper_rate = 8.0;  // first-order gripper tracking, 1/s
  FallLimits fall;
  ActuatorLimits limits;
};

// Position of a robot point and its Jacobian with respect to the contact
// coordinates (vx_world, vy_world, wz, q0, q1, q2).
struct PointKinematics {
  Vec3 position = Vec3::Zero();
  Eigen::Matrix<double, 3, 6> jacobian = Eigen::Matrix<double, 3, 6>::Zero();
};

// effector: planar two-link chain from a shoulder ahead of the base, joint 2
// sets the height above the torso
PointKinematics ForwardArm(const RobotParams& params, const Vec3& base_pose,
                           const Vec6& arm_joints, double torso_height);

// point on the base disk boundary facing `toward`
PointKinematics BasePoint(const RobotParams& params, const Vec3& base_pose,
                          const Vec2& toward);

// Deterministic world. Implementations are immutable after construction and
// safe to share across rollout workers.
class World {
 public:
  virtual ~World() = default;

  virtual std::string_view name() const = 0;
  virtual TaskKind task_kind() const = 0;
  // largest internal integration step
  virtual double substep_dt() const = 0;

  // integrates dt with internal substeps; never throws on divergence, sets
  // the diverged flag instead
  WorldState Step(const WorldState& state, const JointControls& controls,
                  double dt) const;

  // robot and object sites; task sites (goal, upright) are added separately
  virtual void FillSites(const WorldState& state, SiteFrame* frame) const;

  // recomputes effector position and object orientation from the state
  virtual void RefreshDerived(WorldState* state) const;

  // kinetic energy of base, joints and object (torso pendulum excluded)
  virtual double KineticEnergy(const WorldState& state) const;

  const RobotParams& robot_params() const { return robot_; }

 protected:
  explicit World(RobotParams robot) : robot_(std::move(robot)) {}

  // one substep of contacts and object motion; robot velocities are already
  // updated and robot positions are integrated afterwards
  virtual void StepObject(WorldState* state, double h) const = 0;

  // contact coordinates velocity (vx_world, vy_world, wz, q0d, q1d, q2d)
  Vec6 ContactVelocity(const RobotState& robot) const;
  // adds a world-frame impulse acting on a robot point
  void ApplyImpulse(RobotState* robot, const PointKinematics& kin,
                    const Vec3& impulse) const;
  // J M^-1 J^T of a robot point
  Eigen::Matrix3d Mobility(const PointKinematics& kin) const;
  PointKinematics Effector(const RobotState& robot) const;
  // Penalty impulse, capped so the normal velocity never exceeds
  // `separation` (zero: perfectly inelastic). `k_nn` is the effective
  // inverse mass along the normal.
  static double NormalImpulse(double depth, double vn, double k_nn,
                              double stiffness, double damping,
                              double separation, double h);

  RobotParams robot_;

 private:
  void Accelerate(WorldState* state, const JointControls& controls,
                  double h) const;
  void Integrate(WorldState* state, double h) const;
};

// adds the goal and upright sites of a task
void AddTaskSites(const TaskSpec& spec, SiteFrame* frame);

// robot, object and task sites
SiteFrame BuildFrame(const World& world, const WorldState& state,
                     const TaskSpec& spec);

struct PushParams {
  double object_radius = 0.2;
  double object_height = 0.2;  // center height of the object site
  double object_mass = 1.5;
  double ground_friction = 0.5;
  double contact_friction = 0.5;
  double stiffness = 20000.0;
  double damping = 200.0;
  double gravity = 9.81;
  int substeps = 4;  // per 0.02 s
};

struct HingeParams {
  Vec3 hinge = Vec3(1.3, 0.0, 0.35);
  double length = 0.6;
  double width = 0.8;
  double thickness = 0.04;
  double mass = 1.5;
  double balance_angle = 1.0471975511965976;  // 60 degrees
  double stiffness = 20000.0;
  double damping = 200.0;
  double contact_friction = 0.5;
  double hinge_damping = 0.2;
  double gravity = 9.81;
  int substeps = 4;  // per 0.02 s
};

class PushWorld : public World {
 public:
  explicit PushWorld(PushParams params = {}, RobotParams robot = {});

  std::string_view name() const override { return "push"; }
  TaskKind task_kind() const override { return TaskKind::kMove; }
  double substep_dt() const override;
  void FillSites(const WorldState& state, SiteFrame* frame) const override;
  double KineticEnergy(const WorldState& state) const override;
  void RefreshDerived(WorldState* state) const override;
  const PushParams& params() const { return params_; }

  // state with the robot at `robot_pose` and the object resting at `object`
  WorldState MakeState(const Vec3& robot_pose, const Vec3& object) const;

 protected:
  void StepObject(WorldState* state, double h) const override;

 private:
  PushParams params_;
};

class HingeWorld : public World {
 public:
  explicit HingeWorld(HingeParams params = {}, RobotParams robot = {});

  std::string_view name() const override { return "hinge"; }
  TaskKind task_kind() const override { return TaskKind::kUpright; }
  double substep_dt() const override;
  void FillSites(const WorldState& state, SiteFrame* frame) const override;
  double KineticEnergy(const WorldState& state) const override;
  void RefreshDerived(WorldState* state) const override;
  const HingeParams& params() const { return params_; }

  WorldState MakeState(const Vec3& robot_pose, double theta) const;

  // rotation about +y by theta - pi/2: identity when upright
  static Vec4 PlateQuat(double theta);
  Vec3 PlateCenter(double theta) const;

 protected:
  void StepObject(WorldState* state, double h) const override;

 private:
  HingeParams params_;
};

// robot body z axis from yaw, pitch and roll
Vec3 RobotUpAxis(const RobotState& robot);

}  // namespace steer

#endif  // STEER_WORLD_H_
