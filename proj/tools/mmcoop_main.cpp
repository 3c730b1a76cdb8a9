#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "mmcoop/outputs.hpp"
#include "mmcoop/sensing.hpp"
#include "mmcoop/simulate.hpp"
#include "mmcoop/stability.hpp"
#include "mmcoop/sweeps.hpp"

namespace {

using nlohmann::json;

json summary_to_json(const mmcoop::RunSummary& s) {
  json j;
  if (s.convergence_time)
    j["convergence_time"] = *s.convergence_time;
  else
    j["convergence_time"] = nullptr;
  j["steady_state_error"] = s.steady_state_error;
  j["max_error"] = s.max_error;
  j["windowed_mean"] = s.windowed_mean;
  return j;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::int64_t seed) {
  mmcoop::ScenarioConfig cfg = mmcoop::load_scenario(config_path);
  if (seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(seed);
  mmcoop::TimeSeries series = mmcoop::run_scenario(cfg);
  for (const auto& w : series.warnings) std::cerr << "warning: " << w << "\n";
  mmcoop::RunSummary summary =
      mmcoop::summarize(series, cfg.convergence, cfg.control_onset, cfg.steady_window);
  if (!out_dir.empty()) mmcoop::emit_outputs(series, summary, out_dir);
  json j = summary_to_json(summary);
  j["scenario"] = cfg.name;
  j["seed"] = cfg.rng_seed;
  if (series.certificate) {
    j["certificate"] = {{"gamma", {series.certificate->gamma[0], series.certificate->gamma[1],
                                   series.certificate->gamma[2]}},
                        {"alpha", {series.certificate->alpha[0], series.certificate->alpha[1],
                                   series.certificate->alpha[2]}}};
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_certify(int n, double tau, double k, double beta, bool with_max_delay) {
  json j;
  j["inputs"] = {{"n", n}, {"tau", tau}, {"k", k}, {"beta", beta}};
  mmcoop::FeasibilityOutcome fo = mmcoop::find_certificate(k, beta, n, tau);
  j["feasible"] = fo.feasible;
  if (fo.feasible) {
    j["gamma"] = {fo.certificate.gamma[0], fo.certificate.gamma[1], fo.certificate.gamma[2]};
    j["alpha"] = {fo.certificate.alpha[0], fo.certificate.alpha[1], fo.certificate.alpha[2]};
  }
  if (with_max_delay) j["max_certifiable_delay"] = mmcoop::max_certifiable_delay(k, beta, n);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& bounds, int repeats,
              const std::string& out_dir) {
  mmcoop::ScenarioConfig cfg = mmcoop::load_scenario(config_path);
  auto table = mmcoop::run_delay_sweep(cfg, bounds, repeats);
  json rows = json::array();
  for (const auto& row : table) {
    rows.push_back({{"bound", row.bound},
                    {"mean_convergence_time", row.mean_convergence_time},
                    {"mean_steady_state_error", row.mean_steady_state_error},
                    {"converged", row.converged},
                    {"repeats", row.repeats}});
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    mmcoop::write_sweep_table(table, out_dir + "/delay_sweep.dat");
  }
  std::cout << json{{"scenario", cfg.name}, {"rows", rows}}.dump(2) << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir) {
  mmcoop::ScenarioConfig cfg = mmcoop::load_scenario(config_path);
  mmcoop::ComparisonResult res = mmcoop::run_baseline_comparison(cfg);
  json j;
  j["scenario"] = cfg.name;
  j["proposed"] = summary_to_json(res.proposed);
  j["baseline"] = summary_to_json(res.baseline);
  j["max_reduction_pct"] =
      std::vector<double>(res.reduction.max_reduction_pct.data(),
                          res.reduction.max_reduction_pct.data() + res.reduction.max_reduction_pct.size());
  j["avg_reduction_pct"] =
      std::vector<double>(res.reduction.avg_reduction_pct.data(),
                          res.reduction.avg_reduction_pct.data() + res.reduction.avg_reduction_pct.size());
  if (!out_dir.empty()) {
    mmcoop::ScenarioConfig p = cfg;
    p.controller = mmcoop::ControllerKind::Proposed;
    mmcoop::ScenarioConfig b = cfg;
    b.controller = mmcoop::ControllerKind::LeaderFollower;
    mmcoop::emit_outputs(mmcoop::run_scenario(p), res.proposed, out_dir + "/proposed");
    mmcoop::emit_outputs(mmcoop::run_scenario(b), res.baseline, out_dir + "/baseline");
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_calibrate(const std::string& samples_path) {
  auto samples = mmcoop::load_calibration_csv(samples_path);
  mmcoop::CalibrationFit<double> fit = mmcoop::calibrate_sensor(samples);
  json j;
  j["samples"] = samples.size();
  j["drift_force"] = {fit.calibration.drift_force[0], fit.calibration.drift_force[1],
                      fit.calibration.drift_force[2]};
  j["drift_torque"] = {fit.calibration.drift_torque[0], fit.calibration.drift_torque[1],
                       fit.calibration.drift_torque[2]};
  j["com_offset"] = {fit.calibration.com_offset[0], fit.calibration.com_offset[1],
                     fit.calibration.com_offset[2]};
  j["weight"] = fit.calibration.weight;
  j["residual_rms"] = fit.residual_rms;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed multi-robot cooperative manipulation simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, samples_path;
  std::int64_t seed = -1;
  int n = 5;
  double tau = 0.01, k = 0.5, beta = 0.1;
  bool with_max_delay = false;
  std::vector<double> bounds;
  int repeats = 100;

  auto* run = app.add_subcommand("run", "Run a scenario and report its summary");
  run->add_option("config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Directory for CSV/JSON/plot outputs");
  run->add_option("--seed", seed, "Override the scenario RNG seed");

  auto* certify = app.add_subcommand("certify", "Evaluate the stability certificate");
  certify->add_option("--n", n, "Robot count")->required();
  certify->add_option("--tau", tau, "Delay bound (s)")->required();
  certify->add_option("--k", k, "Gain k")->required();
  certify->add_option("--beta", beta, "Gain beta")->required();
  certify->add_flag("--max-delay", with_max_delay, "Also report the largest certifiable delay");

  auto* sweep = app.add_subcommand("sweep", "Average metrics across delay bounds");
  sweep->add_option("config", config_path, "Scenario JSON file")->required();
  sweep->add_option("--bounds", bounds, "Delay bounds (s)")->required()->expected(-1);
  sweep->add_option("--repeats", repeats, "Seeds per bound");
  sweep->add_option("--out", out_dir, "Directory for the sweep table");

  auto* compare = app.add_subcommand("compare", "Proposed law vs. leader-follower baseline");
  compare->add_option("config", config_path, "Scenario JSON file (zero delay)")->required();
  compare->add_option("--out", out_dir, "Directory for paired outputs");

  auto* calibrate = app.add_subcommand("calibrate", "Fit sensor calibration from unloaded samples");
  calibrate->add_option("samples", samples_path, "CSV of (R11..R33, fx..fz, tx..tz)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed);
    if (certify->parsed()) return cmd_certify(n, tau, k, beta, with_max_delay);
    if (sweep->parsed()) return cmd_sweep(config_path, bounds, repeats, out_dir);
    if (compare->parsed()) return cmd_compare(config_path, out_dir);
    if (calibrate->parsed()) return cmd_calibrate(samples_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
