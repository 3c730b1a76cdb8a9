#include "mmcoop/simulate.hpp"

#include <cmath>

#include "mmcoop/control.hpp"
#include "mmcoop/geometry.hpp"
#include "mmcoop/kinematics_io.hpp"

namespace mmcoop {

namespace {

// Control correction for every robot at time t from the broadcast wrench-error
// history. Payloads are (h_ref - h); receivers apply K^{-1} and their own
// Cartesian-to-joint map, per the wrench-space law.
std::vector<Eigen::VectorXd> controller_outputs(
    const ScenarioConfig& config, const CommGraph& graph, const DelayTable& delays,
    const StateHistory& history, const std::vector<Eigen::VectorXd>& wrench_err_now,
    const StiffnessModel& stiffness, const ControlGains& gains,
    const std::vector<CartesianToJoint>& joint_maps, double t, int u_dim) {
  const int n = config.n;
  std::vector<Eigen::VectorXd> u(static_cast<std::size_t>(n), Eigen::VectorXd::Zero(u_dim));
  if (config.controller == ControllerKind::None || t < config.control_onset) return u;

  for (int i = 0; i < n; ++i) {
    TrackingState local;
    local.h_ref = wrench_err_now[size_t(i)];  // payload convention: h_ref - h
    local.h = Eigen::VectorXd::Zero(local.h_ref.size());
    if (config.controller == ControllerKind::Proposed) {
      std::vector<Eigen::VectorXd> delayed(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        if (graph.has_edge(i, j)) delayed[size_t(j)] = receive_delayed(history, delays, graph, i, j, t);
      u[size_t(i)] = control_input(local, delayed, graph.adjacency().row(i), gains, stiffness,
                                   joint_maps[size_t(i)]);
    } else {  // leader-follower: robot 1 leads and regulates only itself
      const Eigen::VectorXd own =
          joint_maps[size_t(i)](stiffness.apply_inverse(wrench_err_now[size_t(i)]));
      if (i == 0) {
        u[size_t(i)] = -gains.k * own;
      } else {
        const Eigen::VectorXd leader = history.sample_at(0, t - delays.delay(i, 0, t));
        u[size_t(i)] =
            -gains.k * (own - gains.beta * joint_maps[size_t(i)](stiffness.apply_inverse(leader)));
      }
    }
  }
  return u;
}

TimeSeries run_planar(const ScenarioConfig& config) {
  const int n = config.n;
  const int d = config.dim();
  const CommGraph graph = build_graph(config);
  const DelayTable delays = build_delay_table(config);
  const StiffnessModel stiffness(config.stiffness);
  const ControlGains gains(config.k, config.beta);

  TimeSeries series;
  series.n = n;
  series.dim = d;
  series.dt = config.dt;
  series.control_onset = config.control_onset;

  if (config.delays.bound > 0.0 && config.controller == ControllerKind::Proposed) {
    FeasibilityOutcome fo = find_certificate(config.k, config.beta, n, config.delays.bound);
    if (fo.feasible)
      series.certificate = fo.certificate;
    else
      series.warnings.push_back("gains (k=" + std::to_string(config.k) +
                                ", beta=" + std::to_string(config.beta) +
                                ") are not certified for delay bound " +
                                std::to_string(config.delays.bound) + " s");
  }

  // Grasp points on a regular polygon; only deviations matter to the coupling.
  Eigen::MatrixXd e(d, n), e_ref(d, n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    e_ref.col(i) = Eigen::Vector2d(0.5 * std::cos(th), 0.5 * std::sin(th));
    e.col(i) = e_ref.col(i);
    if (!config.initial_deviation.empty()) e.col(i) += config.initial_deviation[size_t(i)];
  }

  StateHistory history(n, Eigen::VectorXd::Zero(d));
  std::vector<CartesianToJoint> joint_maps(static_cast<std::size_t>(n),
                                           identity_correction_map());

  // Separate joint-error history for the Lyapunov monitor (xi = K^{-1}(h_ref - h)).
  const bool monitor = config.lyapunov && series.certificate.has_value();
  std::optional<StateHistory> xi_history;
  if (monitor) xi_history.emplace(n, Eigen::VectorXd::Zero(d));

  const int steps = config.steps();
  series.records.reserve(static_cast<std::size_t>(steps) + 1);

  for (int s = 0; s <= steps; ++s) {
    const double t = s * config.dt;

    StepRecord rec;
    rec.t = t;
    rec.e = e;
    rec.delta_e = e - e_ref;
    rec.h.resize(d, n);
    rec.h_err.resize(d, n);
    rec.err_norm.resize(n);

    const Eigen::VectorXd dev_sum = rec.delta_e.rowwise().sum();
    std::vector<Eigen::VectorXd> wrench_err(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd coupling = dev_sum - n * rec.delta_e.col(i);
      rec.h.col(i) = config.h_ref[size_t(i)] + stiffness.apply(coupling);
      rec.h_err.col(i) = rec.h.col(i) - config.h_ref[size_t(i)];
      rec.err_norm[i] = rec.h_err.col(i).norm();
      wrench_err[size_t(i)] = -rec.h_err.col(i);  // h_ref - h
      history.publish(i, t, wrench_err[size_t(i)]);
    }

    std::vector<Eigen::VectorXd> u = controller_outputs(config, graph, delays, history, wrench_err,
                                                        stiffness, gains, joint_maps, t, d);
    rec.u.resize(d, n);
    for (int i = 0; i < n; ++i) rec.u.col(i) = u[size_t(i)];

    if (monitor) {
      for (int i = 0; i < n; ++i)
        xi_history->publish(i, t, stiffness.apply_inverse(wrench_err[size_t(i)]));
      if (t >= config.delays.bound && t > 0.0)
        rec.lyapunov = lyapunov_value(series.certificate->gamma, config.delays.bound, graph,
                                      *xi_history, t);
    }

    series.records.push_back(std::move(rec));

    if (s == steps) break;
    // The control correction is zero-order held over the control period while
    // the disturbed plant integrates on the finer substep grid.
    const int sub = config.disturbance_substeps;
    const double dt_sub = config.dt / sub;
    for (int ss = 0; ss < sub; ++ss) {
      const double t_sub = t + ss * dt_sub;
      const std::int64_t substep = static_cast<std::int64_t>(s) * sub + ss;
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d v =
            program_velocity(config.velocities[size_t(i)], t_sub, substep, i, config.rng_seed);
        e.col(i) += dt_sub * (v + u[size_t(i)].head<2>());
        e_ref.col(i) += dt_sub * config.reference_velocity;
      }
    }
  }
  return series;
}

TimeSeries run_embodied(const ScenarioConfig& config) {
  const int n = config.n;
  const int d = 6;
  const CommGraph graph = build_graph(config);
  const DelayTable delays = build_delay_table(config);
  const StiffnessModel stiffness(config.stiffness);
  const ControlGains gains(config.k, config.beta);
  const KinematicModeld model = load_kinematic_model(config.model_path);

  TimeSeries series;
  series.n = n;
  series.dim = d;
  series.dt = config.dt;
  series.control_onset = config.control_onset;

  if (config.delays.bound > 0.0 && config.controller == ControllerKind::Proposed) {
    FeasibilityOutcome fo = find_certificate(config.k, config.beta, n, config.delays.bound);
    if (fo.feasible)
      series.certificate = fo.certificate;
    else
      series.warnings.push_back("gains are not certified for delay bound " +
                                std::to_string(config.delays.bound) + " s");
  }

  std::vector<RobotConfigd> robots(static_cast<std::size_t>(n));
  std::vector<RigidPosed> ref0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    robots[size_t(i)].platform = config.initial_platforms[size_t(i)];
    robots[size_t(i)].arm = config.arm_home;
    ref0[size_t(i)] = forward_kinematics(model, robots[size_t(i)]);
  }

  StateHistory history(n, Eigen::VectorXd::Zero(d));
  const int steps = config.steps();
  series.records.reserve(static_cast<std::size_t>(steps) + 1);

  for (int s = 0; s <= steps; ++s) {
    const double t = s * config.dt;

    StepRecord rec;
    rec.t = t;
    rec.e.resize(d, n);
    rec.delta_e.resize(d, n);
    rec.h.resize(d, n);
    rec.h_err.resize(d, n);
    rec.err_norm.resize(n);

    std::vector<RigidPosed> ee(static_cast<std::size_t>(n));
    std::vector<CartesianToJoint> joint_maps(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      ee[size_t(i)] = forward_kinematics(model, robots[size_t(i)]);
      RigidPosed ref = ref0[size_t(i)];
      ref.translation.head<2>() += t * config.reference_velocity;
      rec.e.col(i).head<3>() = ee[size_t(i)].translation;
      rec.e.col(i).tail<3>() = rotation_log(ee[size_t(i)].rotation);
      rec.delta_e.col(i) = pose_error(ee[size_t(i)], ref);

      const RigidPosed base = platform_pose(robots[size_t(i)].platform) * model.mount_offset;
      const Eigen::Matrix<double, 6, 6> jac = arm_jacobian(model, base, robots[size_t(i)].arm);
      joint_maps[size_t(i)] = [jac](const Eigen::VectorXd& cart) -> Eigen::VectorXd {
        return dls_step<double>(jac, cart, 1e-3);
      };
    }

    const Eigen::VectorXd dev_sum = rec.delta_e.rowwise().sum();
    std::vector<Eigen::VectorXd> wrench_err(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rec.h.col(i) = config.h_ref[size_t(i)] + stiffness.apply(dev_sum - n * rec.delta_e.col(i));
      rec.h_err.col(i) = rec.h.col(i) - config.h_ref[size_t(i)];
      rec.err_norm[i] = rec.h_err.col(i).norm();
      wrench_err[size_t(i)] = -rec.h_err.col(i);
      history.publish(i, t, wrench_err[size_t(i)]);
    }

    std::vector<Eigen::VectorXd> u = controller_outputs(config, graph, delays, history, wrench_err,
                                                        stiffness, gains, joint_maps, t, 6);
    rec.u.resize(6, n);
    for (int i = 0; i < n; ++i) rec.u.col(i) = u[size_t(i)];

    series.records.push_back(std::move(rec));

    if (s == steps) break;
    const int sub = config.disturbance_substeps;
    const double dt_sub = config.dt / sub;
    for (int ss = 0; ss < sub; ++ss) {
      const double t_sub = t + ss * dt_sub;
      const std::int64_t substep = static_cast<std::int64_t>(s) * sub + ss;
      for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d v =
            program_velocity(config.velocities[size_t(i)], t_sub, substep, i, config.rng_seed);
        robots[size_t(i)].platform.head<2>() += dt_sub * v;
      }
    }
    for (int i = 0; i < n; ++i) {
      robots[size_t(i)].arm += config.dt * u[size_t(i)];
      for (int q = 0; q < 6; ++q) {
        const auto& joint = model.joints[size_t(q)];
        robots[size_t(i)].arm[q] = std::clamp(robots[size_t(i)].arm[q], joint.lower, joint.upper);
      }
    }
  }
  return series;
}

}  // namespace

TimeSeries run_scenario(const ScenarioConfig& config) {
  config.validate();
  return config.mode == ScenarioMode::Planar ? run_planar(config) : run_embodied(config);
}

}  // namespace mmcoop
