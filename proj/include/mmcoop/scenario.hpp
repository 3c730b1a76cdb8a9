#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmcoop/comms.hpp"
#include "mmcoop/errors.hpp"
#include "mmcoop/kinematics.hpp"

namespace mmcoop {

enum class ScenarioMode { Planar, Embodied };
enum class ControllerKind { Proposed, LeaderFollower, None };

/// One axis of a velocity program:
///   v(t) = bias + noise * W(t) + sin_amp * sin(t) + noise_sin * W(t) * sin(t)
/// where W(t) is a fresh uniform [-1, 1] draw per control step per term.
struct VelocityTerm {
  double bias = 0.0;
  double noise = 0.0;
  double sin_amp = 0.0;
  double noise_sin = 0.0;
};

struct VelocityProgram {
  VelocityTerm x;
  VelocityTerm y;
};

struct DelayEdgeSpec {
  int rx = 0;  // receiving robot (0-based)
  int tx = 0;  // transmitting robot (0-based)
  DelayProfile profile;
};

struct DelaySpec {
  double bound = 0.0;
  double nominal_bound = 0.01;  // bound at which edge amplitudes are written
  DelayProfile default_profile{DelayShape::Zero, 0.0};
  std::vector<DelayEdgeSpec> edges;
};

struct ConvergenceSpec {
  double threshold = 0.5;  // N
  double dwell = 1.0;      // s below threshold required to declare convergence
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::Planar;
  ControllerKind controller = ControllerKind::Proposed;
  int n = 0;
  double duration = 60.0;
  double dt = 0.04;            // control period; corrections are zero-order held
  int disturbance_substeps = 40;  // plant/disturbance integration per control period
  double control_onset = 40.0;
  std::uint64_t rng_seed = 1;

  double k = 0.5;
  double beta = 0.1;
  Eigen::VectorXd stiffness;                  // d positive diagonal entries
  Eigen::Vector2d reference_velocity{0.1, 0.1};
  std::vector<Eigen::VectorXd> h_ref;         // per robot, d entries
  std::vector<VelocityProgram> velocities;    // per robot
  std::vector<Eigen::VectorXd> initial_deviation;  // per robot, d entries (optional)

  Eigen::MatrixXi adjacency;
  DelaySpec delays;

  ConvergenceSpec convergence;
  double steady_window = 5.0;
  bool lyapunov = false;

  // Embodied mode only.
  std::string model_path;
  std::vector<Eigen::Vector3d> initial_platforms;  // (x, y, heading) per robot
  Eigen::Matrix<double, 6, 1> arm_home = Eigen::Matrix<double, 6, 1>::Zero();

  int dim() const { return static_cast<int>(stiffness.size()); }
  int steps() const { return static_cast<int>(std::lround(duration / dt)); }

  void validate() const;
};

/// Parses a scenario config from JSON text. Robot indices in the file are
/// 1-based; paths are resolved against `base_dir` when relative.
ScenarioConfig scenario_from_json_text(const std::string& text, const std::string& base_dir = "");
ScenarioConfig load_scenario(const std::string& path);

DelayTable build_delay_table(const ScenarioConfig& config);
CommGraph build_graph(const ScenarioConfig& config);

/// Velocity program evaluation; noise draws are a pure function of
/// (seed, robot, axis, term, substep).
Eigen::Vector2d program_velocity(const VelocityProgram& program, double t, std::int64_t substep,
                                 int robot, std::uint64_t seed);

}  // namespace mmcoop
