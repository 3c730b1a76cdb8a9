#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mmcoop/errors.hpp"
#include "mmcoop/geometry.hpp"

namespace mmcoop {

/// 6-DOF force/torque pair. Planar scenarios use plain 2-vectors instead.
template <class S>
struct Wrench {
  Eigen::Matrix<S, 3, 1> force = Eigen::Matrix<S, 3, 1>::Zero();
  Eigen::Matrix<S, 3, 1> torque = Eigen::Matrix<S, 3, 1>::Zero();

  Wrench() = default;
  Wrench(const Eigen::Matrix<S, 3, 1>& f, const Eigen::Matrix<S, 3, 1>& t) : force(f), torque(t) {}

  static Wrench Zero() { return Wrench(); }

  Eigen::Matrix<S, 6, 1> to_vector() const {
    Eigen::Matrix<S, 6, 1> v;
    v << force, torque;
    return v;
  }

  static Wrench from_vector(const Eigen::Matrix<S, 6, 1>& v) {
    return Wrench(v.template head<3>(), v.template tail<3>());
  }

  bool is_finite() const { return force.allFinite() && torque.allFinite(); }

  Wrench operator+(const Wrench& o) const { return Wrench(force + o.force, torque + o.torque); }
  Wrench operator-(const Wrench& o) const { return Wrench(force - o.force, torque - o.torque); }
};

/// Rotates a sensor-frame wrench into the world frame.
template <class S, class Derived>
Wrench<S> world_wrench(const Wrench<S>& sensor, const Eigen::MatrixBase<Derived>& orientation) {
  const Eigen::Matrix<S, 3, 3> r = orientation;
  if (orthonormality_error(r) > S(1e-9))
    throw PreconditionViolation("world_wrench: orientation is not orthonormal");
  return Wrench<S>(r * sensor.force, r * sensor.torque);
}

/// Drift and gripper-gravity parameters of a force-torque sensor.
template <class S>
struct SensorCalibration {
  Eigen::Matrix<S, 3, 1> drift_force = Eigen::Matrix<S, 3, 1>::Zero();
  Eigen::Matrix<S, 3, 1> drift_torque = Eigen::Matrix<S, 3, 1>::Zero();
  Eigen::Matrix<S, 3, 1> com_offset = Eigen::Matrix<S, 3, 1>::Zero();  // sensor frame (m)
  S weight = S(0);                                                     // gripper weight mg (N)
};

/// Predicted unloaded sensor reading in the sensor frame, for a sensor whose
/// orientation in the world is `orientation`. World gravity is (0, 0, -1)*mg.
template <class S, class Derived>
Wrench<S> unloaded_reading(const SensorCalibration<S>& calib,
                           const Eigen::MatrixBase<Derived>& orientation) {
  const Eigen::Matrix<S, 3, 3> r = orientation;
  if (orthonormality_error(r) > S(1e-9))
    throw PreconditionViolation("unloaded_reading: orientation is not orthonormal");
  Eigen::Matrix<S, 3, 1> gravity_sensor =
      r.transpose() * Eigen::Matrix<S, 3, 1>(S(0), S(0), -calib.weight);
  return Wrench<S>(calib.drift_force + gravity_sensor,
                   calib.drift_torque + calib.com_offset.cross(gravity_sensor));
}

/// Removes drift and gravity from a raw sensor-frame reading.
template <class S, class Derived>
Wrench<S> compensate(const Wrench<S>& raw, const Eigen::MatrixBase<Derived>& orientation,
                     const SensorCalibration<S>& calib) {
  return raw - unloaded_reading(calib, orientation);
}

template <class S>
struct CalibrationFit {
  SensorCalibration<S> calibration;
  S residual_rms = S(0);
  S condition = S(0);
};

/// Least-squares fit of the 10 calibration parameters (drift force, drift
/// torque, weight, weight-scaled center of mass) from unloaded readings at
/// several orientations. The stacked system is linear:
///   f = f0 - mg * u,  t = t0 + [u]x (mg * p),  u = R^T z_world.
template <class S>
CalibrationFit<S> calibrate_sensor(
    const std::vector<std::pair<Eigen::Matrix<S, 3, 3>, Wrench<S>>>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 6) throw DegenerateOrientations("calibrate_sensor: need at least 6 samples");

  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a(6 * n, 10);
  Eigen::Matrix<S, Eigen::Dynamic, 1> b(6 * n);
  a.setZero();
  for (int s = 0; s < n; ++s) {
    const auto& [orientation, reading] = samples[size_t(s)];
    if (orthonormality_error(orientation) > S(1e-9))
      throw PreconditionViolation("calibrate_sensor: orientation is not orthonormal");
    if (!reading.is_finite()) throw PreconditionViolation("calibrate_sensor: non-finite reading");
    Eigen::Matrix<S, 3, 1> u = orientation.transpose() * Eigen::Matrix<S, 3, 1>::UnitZ();
    // Unknowns: [f0(3), t0(3), mg(1), c = mg*p(3)].
    a.template block<3, 3>(6 * s, 0).setIdentity();
    a.template block<3, 1>(6 * s, 6) = -u;
    a.template block<3, 3>(6 * s + 3, 3).setIdentity();
    a.template block<3, 3>(6 * s + 3, 7) = skew(u);
    b.template segment<3>(6 * s) = reading.force;
    b.template segment<3>(6 * s + 3) = reading.torque;
  }

  Eigen::JacobiSVD<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>> svd(a);
  S sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  S cond = sigma_min > S(0) ? svd.singularValues()(0) / sigma_min
                            : std::numeric_limits<S>::infinity();
  if (!(cond < S(1e8)))
    throw DegenerateOrientations("calibrate_sensor: orientations do not excite all parameters");

  // Normal equations; conditioning was checked on the stacked matrix above.
  Eigen::Matrix<S, 10, 10> ata = a.transpose() * a;
  Eigen::Matrix<S, 10, 1> x = ata.ldlt().solve(a.transpose() * b);

  CalibrationFit<S> fit;
  fit.calibration.drift_force = x.template segment<3>(0);
  fit.calibration.drift_torque = x.template segment<3>(3);
  fit.calibration.weight = x(6);
  fit.calibration.com_offset = std::abs(x(6)) > S(1e-12)
                                   ? Eigen::Matrix<S, 3, 1>(x.template segment<3>(7) / x(6))
                                   : Eigen::Matrix<S, 3, 1>::Zero();
  fit.residual_rms = std::sqrt((a * x - b).squaredNorm() / S(6 * n));
  fit.condition = cond;
  return fit;
}

/// Grasp-point offsets r_i from the object's center of mass, world frame.
struct GraspMap {
  std::vector<Eigen::Vector3d> offsets;
};

/// Assembles the 6 x 6n grasp matrix
///   [ I 0 I 0 ... ; [r1]x I [r2]x I ... ].
inline Eigen::MatrixXd grasp_matrix(const GraspMap& map) {
  const int n = static_cast<int>(map.offsets.size());
  if (n < 1) throw PreconditionViolation("grasp_matrix: need at least one grasp point");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(6, 6 * n);
  for (int i = 0; i < n; ++i) {
    g.block<3, 3>(0, 6 * i).setIdentity();
    g.block<3, 3>(3, 6 * i) = skew(map.offsets[size_t(i)]);
    g.block<3, 3>(3, 6 * i + 3).setIdentity();
  }
  return g;
}

/// Net wrench applied to the object: h_o = -G * [h_1; ...; h_n].
inline Wrench<double> object_wrench(const GraspMap& map, const std::vector<Wrench<double>>& h) {
  if (h.size() != map.offsets.size())
    throw DimensionMismatch("object_wrench: wrench count does not match grasp points");
  const int n = static_cast<int>(h.size());
  Eigen::VectorXd stacked(6 * n);
  for (int i = 0; i < n; ++i) stacked.segment<6>(6 * i) = h[size_t(i)].to_vector();
  Eigen::Matrix<double, 6, 1> v = -(grasp_matrix(map) * stacked);
  return Wrench<double>::from_vector(v);
}

using Wrenchd = Wrench<double>;
using SensorCalibrationd = SensorCalibration<double>;

}  // namespace mmcoop
