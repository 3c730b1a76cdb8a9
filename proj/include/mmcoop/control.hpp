#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mmcoop/comms.hpp"
#include "mmcoop/errors.hpp"

namespace mmcoop {

/// Positive diagonal stiffness of the grasped object / environment.
/// d = 6 for full wrenches, d = 2 in planar force-only scenarios.
class StiffnessModel {
 public:
  explicit StiffnessModel(Eigen::VectorXd diagonal) : diag_(std::move(diagonal)) {
    if (diag_.size() < 1 || (diag_.array() <= 0.0).any())
      throw PreconditionViolation("StiffnessModel: diagonal entries must be positive");
  }

  int dim() const { return static_cast<int>(diag_.size()); }
  const Eigen::VectorXd& diagonal() const { return diag_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    check(v);
    return diag_.cwiseProduct(v);
  }

  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& v) const {
    check(v);
    return v.cwiseQuotient(diag_);
  }

 private:
  void check(const Eigen::VectorXd& v) const {
    if (v.size() != diag_.size()) throw DimensionMismatch("StiffnessModel: dimension mismatch");
  }
  Eigen::VectorXd diag_;
};

struct ControlGains {
  double k;
  double beta;
  ControlGains(double k_, double beta_) : k(k_), beta(beta_) {
    if (!(k > 0.0) || !(beta > 0.0))
      throw PreconditionViolation("ControlGains: k and beta must be positive");
  }
};

/// Per-robot tracking snapshot: reference and actual end-effector coordinates,
/// correction target, reference and measured wrench, joint error.
struct TrackingState {
  Eigen::VectorXd e_ref;
  Eigen::VectorXd e;
  Eigen::VectorXd e_d;
  Eigen::VectorXd h_ref;
  Eigen::VectorXd h;
  Eigen::VectorXd xi;
};

/// Wrench felt by one robot under the stiffness coupling:
///   h = h_ref + K * sum_{j != i} (dev_j - dev_i).
inline Eigen::VectorXd interaction_wrench(const StiffnessModel& stiffness,
                                          const Eigen::VectorXd& dev_self,
                                          const std::vector<Eigen::VectorXd>& dev_others,
                                          const Eigen::VectorXd& h_ref) {
  if (dev_self.size() != stiffness.dim() || h_ref.size() != stiffness.dim())
    throw DimensionMismatch("interaction_wrench: dimension mismatch");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(stiffness.dim());
  for (const auto& dev : dev_others) {
    if (dev.size() != stiffness.dim())
      throw DimensionMismatch("interaction_wrench: dimension mismatch");
    acc += dev - dev_self;
  }
  return h_ref + stiffness.apply(acc);
}

/// Correction target implied by a wrench error: e_d = e + K^{-1} (h - h_ref).
inline Eigen::VectorXd correction_target(const StiffnessModel& stiffness,
                                         const Eigen::VectorXd& h, const Eigen::VectorXd& h_ref,
                                         const Eigen::VectorXd& e) {
  if (h.size() != h_ref.size() || h.size() != e.size())
    throw DimensionMismatch("correction_target: dimension mismatch");
  return e + stiffness.apply_inverse(h - h_ref);
}

/// Maps a Cartesian correction to a joint-space displacement. Planar scenarios
/// use the identity; embodied ones wrap a damped-least-squares step about the
/// robot's current configuration.
using CartesianToJoint = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline CartesianToJoint identity_correction_map() {
  return [](const Eigen::VectorXd& v) { return v; };
}

/// Distributed wrench-reduction law, wrench-space form:
///   u_i = -k sum_j a_ij [ f^{-1}(K^{-1}(h_i_ref - h_i))
///                         - beta f^{-1}(K^{-1}(h_j_ref - h_j)(t - tau_ij)) ].
/// `delayed_neighbor_wrench_errors[j]` holds the delayed (h_j_ref - h_j) for
/// each in-neighbor j; entries for non-neighbors are ignored.
inline Eigen::VectorXd control_input(
    const TrackingState& local,
    const std::vector<Eigen::VectorXd>& delayed_neighbor_wrench_errors,
    const Eigen::VectorXi& graph_row, const ControlGains& gains, const StiffnessModel& stiffness,
    const CartesianToJoint& joint_map) {
  if (static_cast<int>(delayed_neighbor_wrench_errors.size()) != graph_row.size())
    throw DimensionMismatch("control_input: neighbor list does not match graph row");
  Eigen::VectorXd own = joint_map(stiffness.apply_inverse(local.h_ref - local.h));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(own.size());
  for (int j = 0; j < graph_row.size(); ++j) {
    if (graph_row[j] == 0) continue;
    const Eigen::VectorXd& delayed = delayed_neighbor_wrench_errors[size_t(j)];
    if (delayed.size() != stiffness.dim())
      throw DimensionMismatch("control_input: neighbor payload dimension mismatch");
    u -= gains.k * (own - gains.beta * joint_map(stiffness.apply_inverse(delayed)));
  }
  return u;
}

/// Joint-space form of the same law:
///   u_i = -k sum_j a_ij (xi_i - beta xi_j(t - tau_ij)).
inline Eigen::VectorXd control_input_joint(const Eigen::VectorXd& xi_self,
                                           const std::vector<Eigen::VectorXd>& delayed_neighbor_xi,
                                           const Eigen::VectorXi& graph_row,
                                           const ControlGains& gains) {
  if (static_cast<int>(delayed_neighbor_xi.size()) != graph_row.size())
    throw DimensionMismatch("control_input_joint: neighbor list does not match graph row");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(xi_self.size());
  for (int j = 0; j < graph_row.size(); ++j) {
    if (graph_row[j] == 0) continue;
    const Eigen::VectorXd& xi_j = delayed_neighbor_xi[size_t(j)];
    if (xi_j.size() != xi_self.size())
      throw DimensionMismatch("control_input_joint: neighbor dimension mismatch");
    u -= gains.k * (xi_self - gains.beta * xi_j);
  }
  return u;
}

/// Joint-error consensus dynamics under the control law, with per-edge delays:
///   xi_i' = -k sum_j a_ij xi_i + k beta sum_j a_ij xi_j(t - tau_ij).
/// Integrated by explicit Euler on the broadcast history.
struct ErrorDynamics {
  ErrorDynamics(CommGraph graph, DelayTable delays, ControlGains gains,
                std::vector<Eigen::VectorXd> xi0)
      : graph_(std::move(graph)),
        delays_(std::move(delays)),
        gains_(gains),
        xi_(std::move(xi0)),
        history_(static_cast<int>(xi_.size()), xi_),
        t_(0.0) {
    if (static_cast<int>(xi_.size()) != graph_.n())
      throw DimensionMismatch("ErrorDynamics: one state per robot required");
    for (int i = 0; i < graph_.n(); ++i) history_.publish(i, 0.0, xi_[size_t(i)]);
  }

  double t() const { return t_; }
  const std::vector<Eigen::VectorXd>& xi() const { return xi_; }
  const StateHistory& history() const { return history_; }

  void step(double dt) {
    const int n = graph_.n();
    std::vector<Eigen::VectorXd> next(xi_);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd rate = Eigen::VectorXd::Zero(xi_[size_t(i)].size());
      for (int j = 0; j < n; ++j) {
        if (!graph_.has_edge(i, j)) continue;
        rate -= gains_.k * xi_[size_t(i)];
        rate += gains_.k * gains_.beta * receive_delayed(history_, delays_, graph_, i, j, t_);
      }
      next[size_t(i)] += dt * rate;
    }
    t_ += dt;
    xi_ = std::move(next);
    for (int i = 0; i < n; ++i) history_.publish(i, t_, xi_[size_t(i)]);
  }

 private:
  CommGraph graph_;
  DelayTable delays_;
  ControlGains gains_;
  std::vector<Eigen::VectorXd> xi_;
  StateHistory history_;
  double t_;
};

}  // namespace mmcoop
