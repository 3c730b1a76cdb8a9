#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mmcoop/scenario.hpp"
#include "mmcoop/stability.hpp"

namespace mmcoop {

/// One simulation record: columns are robots.
struct StepRecord {
  double t = 0.0;
  Eigen::MatrixXd e;         // end-effector coordinates (d x n)
  Eigen::MatrixXd delta_e;   // e - e_ref (d x n)
  Eigen::MatrixXd h;         // measured wrench (d x n)
  Eigen::MatrixXd h_err;     // h - h_ref (d x n)
  Eigen::MatrixXd u;         // control correction (d x n, joint-space in embodied mode 6 x n)
  Eigen::VectorXd err_norm;  // per-robot ||h - h_ref||
  std::optional<LyapunovSample> lyapunov;
};

struct TimeSeries {
  int n = 0;
  int dim = 0;
  double dt = 0.0;
  double control_onset = 0.0;
  std::vector<StepRecord> records;
  std::vector<std::string> warnings;
  std::optional<Certificate> certificate;

  double duration() const { return records.empty() ? 0.0 : records.back().t - records.front().t; }
};

/// Runs a scenario deterministically: robots follow their disturbed velocity
/// programs, wrenches evolve through the stiffness coupling, and the selected
/// controller adds joint-velocity corrections after the onset time.
TimeSeries run_scenario(const ScenarioConfig& config);

}  // namespace mmcoop
