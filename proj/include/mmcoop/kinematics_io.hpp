#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "mmcoop/kinematics.hpp"

namespace mmcoop {

namespace detail {

inline Eigen::Vector3d vec3_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + ": expected 3 numbers");
  return Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline RigidPosed pose_from_json(const nlohmann::json& j) {
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
  if (j.contains("xyz")) xyz = vec3_from_json(j["xyz"], "xyz");
  if (j.contains("rpy")) rpy = vec3_from_json(j["rpy"], "rpy");
  Eigen::Matrix3d r = rot_z(rpy[2]) * rot_y(rpy[1]) * rot_x(rpy[0]);
  return RigidPosed(r, xyz);
}

}  // namespace detail

/// Parses a kinematic model definition: 6 joints (origin xyz/rpy, axis,
/// limits), mount offset, tool transform.
inline KinematicModeld kinematic_model_from_json(const nlohmann::json& j) {
  KinematicModeld model;
  if (j.contains("name")) model.name = j["name"].get<std::string>();
  if (!j.contains("joints") || !j["joints"].is_array() || j["joints"].size() != 6)
    throw ConfigError("kinematic model: expected 6 joints");
  for (size_t i = 0; i < 6; ++i) {
    const auto& ji = j["joints"][i];
    JointSpec<double> spec;
    spec.origin = detail::pose_from_json(ji);
    if (ji.contains("axis")) spec.axis = detail::vec3_from_json(ji["axis"], "axis").normalized();
    if (ji.contains("limits")) {
      if (!ji["limits"].is_array() || ji["limits"].size() != 2)
        throw ConfigError("joint limits: expected [lower, upper]");
      spec.lower = ji["limits"][0].get<double>();
      spec.upper = ji["limits"][1].get<double>();
      if (spec.lower >= spec.upper) throw ConfigError("joint limits: lower >= upper");
    }
    model.joints[i] = spec;
  }
  if (j.contains("mount")) model.mount_offset = detail::pose_from_json(j["mount"]);
  if (j.contains("tool")) model.tool = detail::pose_from_json(j["tool"]);
  return model;
}

inline KinematicModeld load_kinematic_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kinematic model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("kinematic model parse error: " + std::string(e.what()));
  }
  return kinematic_model_from_json(j);
}

}  // namespace mmcoop
