#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "mmcoop/errors.hpp"
#include "mmcoop/geometry.hpp"

namespace mmcoop {

/// One revolute joint of the serial arm: a fixed transform from the previous
/// joint frame followed by a rotation about `axis` (unit vector, local frame).
template <class S>
struct JointSpec {
  RigidPose<S> origin;
  Eigen::Matrix<S, 3, 1> axis = Eigen::Matrix<S, 3, 1>::UnitZ();
  S lower = S(-3.14159265358979323846);
  S upper = S(3.14159265358979323846);
};

/// Kinematic description of a mobile manipulator: 3-DOF planar omnidirectional
/// platform, fixed arm mount, 6R serial arm, fixed tool transform.
template <class S>
struct KinematicModel {
  std::array<JointSpec<S>, 6> joints;
  RigidPose<S> mount_offset;  // platform frame -> arm base frame, constant
  RigidPose<S> tool;          // last joint frame -> end-effector frame
  std::string name = "arm6r";

  /// Conservative workspace radius about the arm base.
  S total_reach() const {
    S r = tool.translation.norm();
    for (const auto& j : joints) r += j.origin.translation.norm();
    return r;
  }
};

/// Platform configuration (x, y, heading) and arm joint angles.
template <class S>
struct RobotConfig {
  Eigen::Matrix<S, 3, 1> platform = Eigen::Matrix<S, 3, 1>::Zero();
  Eigen::Matrix<S, 6, 1> arm = Eigen::Matrix<S, 6, 1>::Zero();
};

template <class S>
using JacobianMatrix = Eigen::Matrix<S, 6, 9>;

template <class S>
void check_joint_limits(const KinematicModel<S>& model, const Eigen::Matrix<S, 6, 1>& q) {
  for (int i = 0; i < 6; ++i) {
    if (q[i] < model.joints[size_t(i)].lower || q[i] > model.joints[size_t(i)].upper)
      throw JointLimitViolation("joint " + std::to_string(i + 1) + " out of limits");
  }
}

/// World pose of the platform frame from (x, y, heading).
template <class S>
RigidPose<S> platform_pose(const Eigen::Matrix<S, 3, 1>& q_p) {
  RigidPose<S> p;
  p.rotation = rot_z(q_p[2]);
  p.translation = Eigen::Matrix<S, 3, 1>(q_p[0], q_p[1], S(0));
  return p;
}

/// Arm-base-to-end-effector pose for joint angles q (limits not checked here).
template <class S>
RigidPose<S> arm_forward(const KinematicModel<S>& model, const Eigen::Matrix<S, 6, 1>& q) {
  RigidPose<S> t;
  for (int i = 0; i < 6; ++i) {
    const auto& j = model.joints[size_t(i)];
    RigidPose<S> rot;
    rot.rotation = axis_angle_rotation<S>(j.axis, q[i]);
    t = t * j.origin * rot;
  }
  return t * model.tool;
}

/// End-effector pose in the world frame: platform * mount * arm chain.
template <class S>
RigidPose<S> forward_kinematics(const KinematicModel<S>& model, const RobotConfig<S>& cfg) {
  check_joint_limits(model, cfg.arm);
  return platform_pose(cfg.platform) * model.mount_offset * arm_forward(model, cfg.arm);
}

/// Geometric arm Jacobian (6x6) in the world frame, for a given arm base pose.
/// Rows: linear velocity of the end-effector origin, then angular velocity.
template <class S>
Eigen::Matrix<S, 6, 6> arm_jacobian(const KinematicModel<S>& model, const RigidPose<S>& base,
                                    const Eigen::Matrix<S, 6, 1>& q) {
  using Vector3 = Eigen::Matrix<S, 3, 1>;
  std::array<Vector3, 6> axes_w;
  std::array<Vector3, 6> origins_w;
  RigidPose<S> t = base;
  for (int i = 0; i < 6; ++i) {
    const auto& j = model.joints[size_t(i)];
    t = t * j.origin;
    axes_w[size_t(i)] = t.rotation * j.axis;
    origins_w[size_t(i)] = t.translation;
    RigidPose<S> rot;
    rot.rotation = axis_angle_rotation<S>(j.axis, q[i]);
    t = t * rot;
  }
  Vector3 p_e = (t * model.tool).translation;
  Eigen::Matrix<S, 6, 6> jac;
  for (int i = 0; i < 6; ++i) {
    jac.template block<3, 1>(0, i) = axes_w[size_t(i)].cross(p_e - origins_w[size_t(i)]);
    jac.template block<3, 1>(3, i) = axes_w[size_t(i)];
  }
  return jac;
}

/// Full 6x9 Jacobian, column partition [J_platform(3) | J_arm(6)].
template <class S>
JacobianMatrix<S> jacobian(const KinematicModel<S>& model, const RobotConfig<S>& cfg) {
  using Vector3 = Eigen::Matrix<S, 3, 1>;
  check_joint_limits(model, cfg.arm);
  RigidPose<S> base = platform_pose(cfg.platform) * model.mount_offset;
  RigidPose<S> ee = base * arm_forward(model, cfg.arm);

  JacobianMatrix<S> jac = JacobianMatrix<S>::Zero();
  jac(0, 0) = S(1);
  jac(1, 1) = S(1);
  Vector3 z = Vector3::UnitZ();
  Vector3 p_platform(cfg.platform[0], cfg.platform[1], S(0));
  jac.template block<3, 1>(0, 2) = z.cross(ee.translation - p_platform);
  jac.template block<3, 1>(3, 2) = z;
  jac.template block<6, 6>(0, 3) = arm_jacobian(model, base, cfg.arm);
  return jac;
}

template <class S>
struct IkOptions {
  S damping = S(1e-3);
  int max_iterations = 100;
  S tolerance = S(1e-8);
  S max_step = S(0.5);           // per-iteration joint step bound (rad)
  S max_translation = S(0.1);    // per-iteration Cartesian error clamp (m)
  S max_rotation = S(0.3);       // per-iteration Cartesian error clamp (rad)
};

/// One damped-least-squares joint step for a Cartesian correction.
template <class S>
Eigen::Matrix<S, 6, 1> dls_step(const Eigen::Matrix<S, 6, 6>& jac,
                                const Eigen::Matrix<S, 6, 1>& cartesian_error, S damping) {
  Eigen::Matrix<S, 6, 6> jtj = jac.transpose() * jac;
  jtj.diagonal().array() += damping * damping;
  return jtj.ldlt().solve(jac.transpose() * cartesian_error);
}

/// Damped-least-squares inverse kinematics for the arm about a fixed base.
/// Returns the joint solution on the branch nearest the seed.
template <class S>
Eigen::Matrix<S, 6, 1> inverse_kinematics_arm(const KinematicModel<S>& model,
                                              const RigidPose<S>& base, const RigidPose<S>& target,
                                              const Eigen::Matrix<S, 6, 1>& seed,
                                              const IkOptions<S>& opts = IkOptions<S>{}) {
  check_joint_limits(model, seed);
  if ((target.translation - base.translation).norm() > model.total_reach())
    throw UnreachableTarget("inverse_kinematics_arm: target beyond arm reach");
  Eigen::Matrix<S, 6, 1> q = seed;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    RigidPose<S> current = base * arm_forward(model, q);
    Eigen::Matrix<S, 6, 1> err = pose_error(target, current);
    const S t_norm = err.template head<3>().norm();
    const S r_norm = err.template tail<3>().norm();
    if (t_norm + r_norm < opts.tolerance) return q;
    // Clamp the Cartesian error so the joint-step bound discriminates
    // singularity blowup from plain distance to the target.
    if (t_norm > opts.max_translation)
      err.template head<3>() *= opts.max_translation / t_norm;
    if (r_norm > opts.max_rotation) err.template tail<3>() *= opts.max_rotation / r_norm;
    Eigen::Matrix<S, 6, 1> step = dls_step(arm_jacobian(model, base, q), err, opts.damping);
    if (step.norm() > opts.max_step)
      throw NearSingular("inverse_kinematics_arm: damped step exceeds bound");
    q += step;
  }
  throw UnreachableTarget("inverse_kinematics_arm: no convergence within iteration budget");
}

using KinematicModeld = KinematicModel<double>;
using RobotConfigd = RobotConfig<double>;

}  // namespace mmcoop
