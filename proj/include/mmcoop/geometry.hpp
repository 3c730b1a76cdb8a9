#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mmcoop/errors.hpp"

namespace mmcoop {

/// Skew-symmetric cross-product matrix: skew(v) * w == v.cross(w).
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> skew(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, 3, 3> m;
  m << S(0), -v[2], v[1], v[2], S(0), -v[0], -v[1], v[0], S(0);
  return m;
}

/// Rotation about a unit axis by an angle (Rodrigues).
template <class S, class Derived>
Eigen::Matrix<S, 3, 3> axis_angle_rotation(const Eigen::MatrixBase<Derived>& axis, S angle) {
  return Eigen::AngleAxis<S>(angle, axis.normalized()).toRotationMatrix();
}

template <class S>
Eigen::Matrix<S, 3, 3> rot_x(S a) {
  return axis_angle_rotation<S>(Eigen::Matrix<S, 3, 1>::UnitX(), a);
}
template <class S>
Eigen::Matrix<S, 3, 3> rot_y(S a) {
  return axis_angle_rotation<S>(Eigen::Matrix<S, 3, 1>::UnitY(), a);
}
template <class S>
Eigen::Matrix<S, 3, 3> rot_z(S a) {
  return axis_angle_rotation<S>(Eigen::Matrix<S, 3, 1>::UnitZ(), a);
}

/// Deviation of R from a proper rotation: max of ||R R^T - I||_inf and |det R - 1|.
template <class Derived>
typename Derived::Scalar orthonormality_error(const Eigen::MatrixBase<Derived>& r) {
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, 3, 3> g = r * r.transpose() - Eigen::Matrix<S, 3, 3>::Identity();
  return std::max(g.cwiseAbs().maxCoeff(), std::abs(r.determinant() - S(1)));
}

/// Logarithm of a rotation matrix as a rotation vector (axis * angle).
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> rotation_log(const Eigen::MatrixBase<Derived>& r) {
  using S = typename Derived::Scalar;
  Eigen::AngleAxis<S> aa(r.derived().eval());
  return aa.angle() * aa.axis();
}

template <class S>
Eigen::Matrix<S, 3, 3> rotation_exp(const Eigen::Matrix<S, 3, 1>& w) {
  S angle = w.norm();
  if (angle < S(1e-14)) return Eigen::Matrix<S, 3, 3>::Identity();
  return Eigen::AngleAxis<S>(angle, w / angle).toRotationMatrix();
}

/// SE(3) pose: rotation + translation. Validated orthonormal at construction.
template <class S>
struct RigidPose {
  using Matrix3 = Eigen::Matrix<S, 3, 3>;
  using Vector3 = Eigen::Matrix<S, 3, 1>;

  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  RigidPose() = default;

  RigidPose(const Matrix3& r, const Vector3& t) : rotation(r), translation(t) {
    if (orthonormality_error(rotation) > S(1e-9))
      throw PreconditionViolation("RigidPose: rotation is not orthonormal");
  }

  static RigidPose Identity() { return RigidPose(); }

  RigidPose inverse() const {
    RigidPose out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }

  Vector3 apply(const Vector3& p) const { return rotation * p + translation; }

  Eigen::Matrix<S, 4, 4> homogeneous() const {
    Eigen::Matrix<S, 4, 4> m = Eigen::Matrix<S, 4, 4>::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }
};

template <class S>
RigidPose<S> compose(const RigidPose<S>& a, const RigidPose<S>& b) {
  RigidPose<S> out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

template <class S>
RigidPose<S> operator*(const RigidPose<S>& a, const RigidPose<S>& b) {
  return compose(a, b);
}

/// Pose difference of `a` relative to `b` as a 6-vector
/// (translation delta, rotation-log delta), both in the common parent frame.
template <class S>
Eigen::Matrix<S, 6, 1> pose_error(const RigidPose<S>& a, const RigidPose<S>& b) {
  Eigen::Matrix<S, 6, 1> e;
  e.template head<3>() = a.translation - b.translation;
  e.template tail<3>() = rotation_log((a.rotation * b.rotation.transpose()).eval());
  return e;
}

/// Translation + rotation-log magnitude of the relative pose.
template <class S>
S pose_distance(const RigidPose<S>& a, const RigidPose<S>& b) {
  Eigen::Matrix<S, 6, 1> e = pose_error(a, b);
  return e.template head<3>().norm() + e.template tail<3>().norm();
}

using RigidPosed = RigidPose<double>;

}  // namespace mmcoop
