#include "mmcoop/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mmcoop/rng.hpp"

namespace mmcoop {

using nlohmann::json;

void ScenarioConfig::validate() const {
  if (n < 1) throw ConfigError("scenario: n must be at least 1");
  if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
  if (disturbance_substeps < 1) throw ConfigError("scenario: disturbance_substeps must be >= 1");
  if (!(duration > 0.0)) throw ConfigError("scenario: duration must be positive");
  if (control_onset < 0.0 || control_onset > duration)
    throw ConfigError("scenario: control_onset must lie in [0, duration]");
  if (!(k > 0.0) || !(beta > 0.0)) throw ConfigError("scenario: gains must be positive");
  if (stiffness.size() < 1 || (stiffness.array() <= 0.0).any())
    throw ConfigError("scenario: stiffness diagonal must be positive");
  if (mode == ScenarioMode::Planar && stiffness.size() != 2)
    throw ConfigError("scenario: planar mode uses a 2-entry stiffness diagonal");
  if (mode == ScenarioMode::Embodied && stiffness.size() != 6)
    throw ConfigError("scenario: embodied mode uses a 6-entry stiffness diagonal");
  if (static_cast<int>(h_ref.size()) != n) throw ConfigError("scenario: h_ref per robot required");
  for (const auto& h : h_ref)
    if (h.size() != stiffness.size()) throw ConfigError("scenario: h_ref dimension mismatch");
  if (static_cast<int>(velocities.size()) != n)
    throw ConfigError("scenario: velocity program per robot required");
  if (!initial_deviation.empty()) {
    if (static_cast<int>(initial_deviation.size()) != n)
      throw ConfigError("scenario: initial_deviation per robot required");
    for (const auto& d : initial_deviation)
      if (d.size() != stiffness.size())
        throw ConfigError("scenario: initial_deviation dimension mismatch");
  }
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw ConfigError("scenario: adjacency must be n x n");
  if (delays.bound < 0.0) throw ConfigError("scenario: delay bound must be non-negative");
  if (!(convergence.threshold > 0.0)) throw ConfigError("scenario: threshold must be positive");
  if (mode == ScenarioMode::Embodied) {
    if (model_path.empty()) throw ConfigError("scenario: embodied mode requires a model file");
    if (static_cast<int>(initial_platforms.size()) != n)
      throw ConfigError("scenario: embodied mode requires initial platform poses");
  }
}

namespace {

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

VelocityTerm term_from_json(const json& j) {
  VelocityTerm t;
  t.bias = j.value("bias", 0.0);
  t.noise = j.value("noise", 0.0);
  t.sin_amp = j.value("sin", 0.0);
  t.noise_sin = j.value("noise_sin", 0.0);
  return t;
}

DelayProfile profile_from_json(const json& j) {
  DelayProfile p;
  p.shape = delay_shape_from_name(j.value("profile", std::string("zero")));
  p.amplitude = j.value("amplitude", 0.0);
  return p;
}

int robot_index(const json& j, const char* what, int n) {
  int idx = j.get<int>();
  if (idx < 1 || idx > n) throw ConfigError(std::string(what) + ": robot index out of range");
  return idx - 1;
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("scenario parse error: " + std::string(e.what()));
  }

  ScenarioConfig cfg;
  cfg.name = j.value("name", std::string("scenario"));
  const std::string mode = j.value("mode", std::string("planar"));
  if (mode == "planar")
    cfg.mode = ScenarioMode::Planar;
  else if (mode == "embodied")
    cfg.mode = ScenarioMode::Embodied;
  else
    throw ConfigError("scenario: unknown mode " + mode);

  const std::string controller = j.value("controller", std::string("proposed"));
  if (controller == "proposed")
    cfg.controller = ControllerKind::Proposed;
  else if (controller == "leader_follower")
    cfg.controller = ControllerKind::LeaderFollower;
  else if (controller == "none")
    cfg.controller = ControllerKind::None;
  else
    throw ConfigError("scenario: unknown controller " + controller);

  cfg.n = j.value("n", 0);
  cfg.duration = j.value("duration", 60.0);
  cfg.dt = j.value("dt", 0.04);
  cfg.disturbance_substeps = j.value("disturbance_substeps", 40);
  cfg.control_onset = j.value("control_onset", 40.0);
  cfg.rng_seed = j.value("rng_seed", std::uint64_t(1));

  if (j.contains("gains")) {
    cfg.k = j["gains"].value("k", 0.5);
    cfg.beta = j["gains"].value("beta", 0.1);
  }
  if (j.contains("stiffness")) cfg.stiffness = vector_from_json(j["stiffness"], "stiffness");
  if (j.contains("reference_velocity")) {
    Eigen::VectorXd rv = vector_from_json(j["reference_velocity"], "reference_velocity");
    if (rv.size() != 2) throw ConfigError("reference_velocity: expected 2 entries");
    cfg.reference_velocity = rv.head<2>();
  }

  if (j.contains("h_ref")) {
    for (const auto& h : j["h_ref"]) cfg.h_ref.push_back(vector_from_json(h, "h_ref"));
  } else if (cfg.stiffness.size() > 0) {
    cfg.h_ref.assign(static_cast<std::size_t>(cfg.n),
                     Eigen::VectorXd::Zero(cfg.stiffness.size()));
  }

  if (j.contains("velocities")) {
    for (const auto& v : j["velocities"]) {
      VelocityProgram p;
      if (v.contains("x")) p.x = term_from_json(v["x"]);
      if (v.contains("y")) p.y = term_from_json(v["y"]);
      cfg.velocities.push_back(p);
    }
  }

  if (j.contains("initial_deviation")) {
    for (const auto& d : j["initial_deviation"])
      cfg.initial_deviation.push_back(vector_from_json(d, "initial_deviation"));
  }

  if (!j.contains("graph") || !j["graph"].contains("adjacency"))
    throw ConfigError("scenario: graph.adjacency required");
  {
    const auto& a = j["graph"]["adjacency"];
    const int n = static_cast<int>(a.size());
    cfg.adjacency = Eigen::MatrixXi::Zero(n, n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(a[size_t(r)].size()) != n)
        throw ConfigError("scenario: adjacency must be square");
      for (int c = 0; c < n; ++c) cfg.adjacency(r, c) = a[size_t(r)][size_t(c)].get<int>();
    }
  }

  if (j.contains("delays")) {
    const auto& d = j["delays"];
    cfg.delays.bound = d.value("bound", 0.0);
    cfg.delays.nominal_bound = d.value("nominal_bound", cfg.delays.bound);
    if (d.contains("default")) cfg.delays.default_profile = profile_from_json(d["default"]);
    if (d.contains("edges")) {
      for (const auto& e : d["edges"]) {
        DelayEdgeSpec spec;
        spec.rx = robot_index(e.at("rx"), "delays.edges.rx", cfg.n);
        spec.tx = robot_index(e.at("tx"), "delays.edges.tx", cfg.n);
        spec.profile = profile_from_json(e);
        cfg.delays.edges.push_back(spec);
      }
    }
  }

  if (j.contains("convergence")) {
    cfg.convergence.threshold = j["convergence"].value("threshold", 0.5);
    cfg.convergence.dwell = j["convergence"].value("dwell", 1.0);
  }
  cfg.steady_window = j.value("steady_window", 5.0);
  cfg.lyapunov = j.value("lyapunov", false);

  if (j.contains("model")) {
    std::filesystem::path p = j["model"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    cfg.model_path = p.string();
  }
  if (j.contains("initial_platforms")) {
    for (const auto& q : j["initial_platforms"]) {
      Eigen::VectorXd v = vector_from_json(q, "initial_platforms");
      if (v.size() != 3) throw ConfigError("initial_platforms: expected (x, y, heading)");
      cfg.initial_platforms.emplace_back(v[0], v[1], v[2]);
    }
  }
  if (j.contains("arm_home")) {
    Eigen::VectorXd v = vector_from_json(j["arm_home"], "arm_home");
    if (v.size() != 6) throw ConfigError("arm_home: expected 6 joint angles");
    cfg.arm_home = v.head<6>();
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_json_text(text, std::filesystem::path(path).parent_path().string());
}

DelayTable build_delay_table(const ScenarioConfig& config) {
  DelayTable table(config.n, config.delays.bound, config.delays.nominal_bound, config.rng_seed,
                   config.dt);
  table.set_all(config.delays.default_profile);
  for (const auto& e : config.delays.edges) table.set_profile(e.rx, e.tx, e.profile);
  return table;
}

CommGraph build_graph(const ScenarioConfig& config) {
  return CommGraph::from_adjacency(config.adjacency);
}

Eigen::Vector2d program_velocity(const VelocityProgram& program, double t, std::int64_t substep,
                                 int robot, std::uint64_t seed) {
  const double s = std::sin(t);
  auto axis = [&](const VelocityTerm& term, int axis_id) {
    double v = term.bias + term.sin_amp * s;
    if (term.noise != 0.0)
      v += term.noise * hash_symmetric(seed, static_cast<std::uint64_t>(robot) * 8 +
                                                 static_cast<std::uint64_t>(axis_id) * 2,
                                       0, static_cast<std::uint64_t>(substep));
    if (term.noise_sin != 0.0)
      v += term.noise_sin * s *
           hash_symmetric(seed, static_cast<std::uint64_t>(robot) * 8 +
                                    static_cast<std::uint64_t>(axis_id) * 2 + 1,
                          1, static_cast<std::uint64_t>(substep));
    return v;
  };
  return {axis(program.x, 0), axis(program.y, 1)};
}

}  // namespace mmcoop
