#include "mmcoop/comms.hpp"

#include <algorithm>
#include <cmath>

#include "mmcoop/rng.hpp"

namespace mmcoop {

CommGraph CommGraph::from_adjacency(const Eigen::MatrixXi& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n) throw PreconditionViolation("adjacency matrix must be square");
  for (int i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0) throw PreconditionViolation("adjacency diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (adjacency(i, j) != 0 && adjacency(i, j) != 1)
        throw PreconditionViolation("adjacency entries must be 0 or 1");
    }
    if (adjacency.row(i).sum() < 1)
      throw IsolatedRobot("robot " + std::to_string(i + 1) + " has no in-neighbor");
  }
  return CommGraph(adjacency);
}

CommGraph CommGraph::complete(int n) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Ones(n, n);
  a.diagonal().setZero();
  return from_adjacency(a);
}

CommGraph CommGraph::circulant(int n, int in_degree) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= in_degree; ++k) a(i, ((i - k) % n + n) % n) = 1;
  return from_adjacency(a);
}

Eigen::MatrixXd CommGraph::degree_matrix() const {
  return adjacency_.cast<double>().rowwise().sum().asDiagonal();
}

Eigen::MatrixXd CommGraph::laplacian() const {
  return degree_matrix() - adjacency_.cast<double>();
}

DelayShape delay_shape_from_name(const std::string& name) {
  if (name == "zero") return DelayShape::Zero;
  if (name == "constant") return DelayShape::Constant;
  if (name == "abs_sin") return DelayShape::AbsSin;
  if (name == "abs_cos") return DelayShape::AbsCos;
  if (name == "abs_noise") return DelayShape::AbsNoise;
  if (name == "inv_t") return DelayShape::InvT;
  if (name == "inv_t_sq") return DelayShape::InvTSq;
  if (name == "exp_decay") return DelayShape::ExpDecay;
  if (name == "t_exp_decay") return DelayShape::TExpDecay;
  if (name == "log_t") return DelayShape::LogT;
  if (name == "inv_log_t") return DelayShape::InvLogT;
  throw ConfigError("unknown delay profile: " + name);
}

std::string delay_shape_name(DelayShape shape) {
  switch (shape) {
    case DelayShape::Zero: return "zero";
    case DelayShape::Constant: return "constant";
    case DelayShape::AbsSin: return "abs_sin";
    case DelayShape::AbsCos: return "abs_cos";
    case DelayShape::AbsNoise: return "abs_noise";
    case DelayShape::InvT: return "inv_t";
    case DelayShape::InvTSq: return "inv_t_sq";
    case DelayShape::ExpDecay: return "exp_decay";
    case DelayShape::TExpDecay: return "t_exp_decay";
    case DelayShape::LogT: return "log_t";
    case DelayShape::InvLogT: return "inv_log_t";
  }
  return "zero";
}

DelayTable::DelayTable(int n, double bound, double nominal_bound, std::uint64_t seed,
                       double noise_period)
    : n_(n),
      bound_(bound),
      scale_(nominal_bound > 0.0 ? bound / nominal_bound : 0.0),
      seed_(seed),
      noise_period_(noise_period),
      profiles_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
  if (bound < 0.0) throw PreconditionViolation("delay bound must be non-negative");
}

DelayTable DelayTable::zero(int n) { return DelayTable(n, 0.0, 0.0, 0); }

void DelayTable::set_profile(int rx, int tx, DelayProfile profile) {
  profiles_[static_cast<std::size_t>(rx) * static_cast<std::size_t>(n_) +
            static_cast<std::size_t>(tx)] = profile;
}

void DelayTable::set_all(DelayProfile profile) {
  for (auto& p : profiles_) p = profile;
}

double DelayTable::delay(int rx, int tx, double t) const {
  if (bound_ <= 0.0) return 0.0;
  const DelayProfile& p = profiles_[static_cast<std::size_t>(rx) * static_cast<std::size_t>(n_) +
                                    static_cast<std::size_t>(tx)];
  const double a = p.amplitude * scale_;
  double v = 0.0;
  switch (p.shape) {
    case DelayShape::Zero: return 0.0;
    case DelayShape::Constant: v = a; break;
    case DelayShape::AbsSin: v = std::abs(a * std::sin(t)); break;
    case DelayShape::AbsCos: v = std::abs(a * std::cos(t)); break;
    case DelayShape::AbsNoise: {
      auto step = static_cast<std::uint64_t>(std::llround(t / noise_period_));
      double w = hash_symmetric(seed_, 0xde1a9ull + static_cast<std::uint64_t>(rx),
                                static_cast<std::uint64_t>(tx), step);
      v = std::abs(a * w);
      break;
    }
    case DelayShape::InvT: v = a / t; break;
    case DelayShape::InvTSq: v = a / (t * t); break;
    case DelayShape::ExpDecay: v = a * std::exp(-t); break;
    case DelayShape::TExpDecay: v = a * t * std::exp(-t); break;
    case DelayShape::LogT: v = a * std::log(t); break;
    case DelayShape::InvLogT: v = a / std::log(t); break;
  }
  if (std::isnan(v)) return bound_;
  return std::clamp(v, 0.0, bound_);
}

StateHistory::StateHistory(int n, Eigen::VectorXd initial_payload)
    : times_(static_cast<std::size_t>(n)),
      samples_(static_cast<std::size_t>(n)),
      initial_(static_cast<std::size_t>(n), std::move(initial_payload)) {}

StateHistory::StateHistory(int n, std::vector<Eigen::VectorXd> initial_payloads)
    : times_(static_cast<std::size_t>(n)),
      samples_(static_cast<std::size_t>(n)),
      initial_(std::move(initial_payloads)) {
  if (initial_.size() != static_cast<std::size_t>(n))
    throw DimensionMismatch("StateHistory: one initial payload per robot required");
}

void StateHistory::publish(int robot, double t, Eigen::VectorXd sample) {
  auto& ts = times_[size_t(robot)];
  if (!ts.empty() && t <= ts.back())
    throw NonMonotonicTime("publish: timestamps must be strictly increasing");
  ts.push_back(t);
  samples_[size_t(robot)].push_back(std::move(sample));
}

const Eigen::VectorXd& StateHistory::sample_at(int robot, double t) const {
  const auto& ts = times_[size_t(robot)];
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) return initial_[size_t(robot)];
  auto idx = static_cast<std::size_t>(std::distance(ts.begin(), it)) - 1;
  return samples_[size_t(robot)][idx];
}

double StateHistory::last_time(int robot) const {
  const auto& ts = times_[size_t(robot)];
  return ts.empty() ? -std::numeric_limits<double>::infinity() : ts.back();
}

const Eigen::VectorXd& receive_delayed(const StateHistory& history, const DelayTable& delays,
                                       const CommGraph& graph, int rx, int tx, double t) {
  if (!graph.has_edge(rx, tx))
    throw NotNeighbor("receive_delayed: robot " + std::to_string(rx + 1) +
                      " has no edge from robot " + std::to_string(tx + 1));
  return history.sample_at(tx, t - delays.delay(rx, tx, t));
}

}  // namespace mmcoop
