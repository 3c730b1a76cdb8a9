#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mmcoop/errors.hpp"

namespace mmcoop {

/// Directed communication graph. adjacency(i, j) == 1 iff robot i receives
/// information from robot j. Every robot must have at least one in-neighbor.
class CommGraph {
 public:
  static CommGraph from_adjacency(const Eigen::MatrixXi& adjacency);

  /// Complete directed graph on n vertices.
  static CommGraph complete(int n);

  /// Directed circulant: robot i receives from i-1, ..., i-in_degree (mod n).
  static CommGraph circulant(int n, int in_degree);

  int n() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  bool has_edge(int rx, int tx) const { return adjacency_(rx, tx) != 0; }
  int in_degree(int i) const { return adjacency_.row(i).sum(); }
  int out_degree(int i) const { return adjacency_.col(i).sum(); }

  Eigen::MatrixXd degree_matrix() const;
  Eigen::MatrixXd laplacian() const;

 private:
  explicit CommGraph(Eigen::MatrixXi a) : adjacency_(std::move(a)) {}
  Eigen::MatrixXi adjacency_;
};

enum class DelayShape {
  Zero,
  Constant,   // a
  AbsSin,     // |a sin t|
  AbsCos,     // |a cos t|
  AbsNoise,   // |a W(t)|, W per-step uniform in [-1, 1]
  InvT,       // a / t
  InvTSq,     // a / t^2
  ExpDecay,   // a e^{-t}
  TExpDecay,  // a t e^{-t}
  LogT,       // a ln t
  InvLogT     // a / ln t
};

DelayShape delay_shape_from_name(const std::string& name);
std::string delay_shape_name(DelayShape shape);

struct DelayProfile {
  DelayShape shape = DelayShape::Zero;
  double amplitude = 0.0;
};

/// Per-edge time-varying delays, clamped into [0, bound]. Profile amplitudes
/// are written for `nominal_bound`; changing `bound` rescales them
/// proportionally so a single edge table serves a whole delay sweep.
class DelayTable {
 public:
  DelayTable(int n, double bound, double nominal_bound, std::uint64_t seed,
             double noise_period = 0.04);

  void set_profile(int rx, int tx, DelayProfile profile);
  void set_all(DelayProfile profile);

  double bound() const { return bound_; }
  int n() const { return n_; }

  /// Delay tau_{rx,tx}(t) in seconds.
  double delay(int rx, int tx, double t) const;

  static DelayTable zero(int n);

 private:
  int n_;
  double bound_;
  double scale_;
  std::uint64_t seed_;
  double noise_period_;
  std::vector<DelayProfile> profiles_;
};

/// Per-robot append-only timestamped broadcast buffers with zero-order-hold
/// lookup. Before a robot's first sample, lookups return its configured
/// initial payload.
class StateHistory {
 public:
  StateHistory(int n, Eigen::VectorXd initial_payload);
  StateHistory(int n, std::vector<Eigen::VectorXd> initial_payloads);

  int n() const { return static_cast<int>(times_.size()); }
  std::size_t size(int robot) const { return times_[size_t(robot)].size(); }

  /// Appends a sample; timestamps per robot must be strictly increasing.
  void publish(int robot, double t, Eigen::VectorXd sample);

  /// Latest sample of `robot` with timestamp <= t (zero-order hold).
  const Eigen::VectorXd& sample_at(int robot, double t) const;

  double last_time(int robot) const;

  const std::vector<double>& times(int robot) const { return times_[size_t(robot)]; }
  const std::vector<Eigen::VectorXd>& samples(int robot) const { return samples_[size_t(robot)]; }

 private:
  std::vector<std::vector<double>> times_;
  std::vector<std::vector<Eigen::VectorXd>> samples_;
  std::vector<Eigen::VectorXd> initial_;
};

/// Delayed neighbor lookup: robot `rx` reads robot `tx`'s broadcast at
/// effective time t - tau_{rx,tx}(t). Requires the edge to exist.
const Eigen::VectorXd& receive_delayed(const StateHistory& history, const DelayTable& delays,
                                       const CommGraph& graph, int rx, int tx, double t);

}  // namespace mmcoop
