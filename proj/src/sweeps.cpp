#include "mmcoop/sweeps.hpp"

#include <atomic>
#include <thread>

#include "mmcoop/rng.hpp"
#include "mmcoop/simulate.hpp"

namespace mmcoop {

std::uint64_t derived_seed(std::uint64_t base_seed, std::uint64_t stream, std::uint64_t repeat) {
  return hash_combine(hash_combine(base_seed, stream), repeat);
}

namespace {

// Applies fn(i) for i in [0, count) on a small worker pool; results are
// written by index, so the outcome is independent of scheduling.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()),
                                                std::min(count, 8)));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SweepRow> run_delay_sweep(const ScenarioConfig& base, const std::vector<double>& bounds,
                                      int repeats) {
  if (repeats < 1) throw PreconditionViolation("run_delay_sweep: repeats must be at least 1");
  std::vector<SweepRow> table;
  table.reserve(bounds.size());
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    std::vector<std::optional<double>> conv(static_cast<std::size_t>(repeats));
    std::vector<double> steady(static_cast<std::size_t>(repeats));
    parallel_for(repeats, [&](int r) {
      ScenarioConfig cfg = base;
      cfg.delays.bound = bounds[b];
      cfg.rng_seed = derived_seed(base.rng_seed, b, static_cast<std::uint64_t>(r));
      cfg.lyapunov = false;
      TimeSeries series = run_scenario(cfg);
      conv[size_t(r)] =
          convergence_time(series, cfg.convergence.threshold, cfg.control_onset, cfg.convergence.dwell);
      steady[size_t(r)] = steady_state_error(series, cfg.steady_window);
    });
    SweepRow row;
    row.bound = bounds[b];
    row.repeats = repeats;
    double conv_sum = 0.0, steady_sum = 0.0;
    for (int r = 0; r < repeats; ++r) {
      if (conv[size_t(r)]) {
        conv_sum += *conv[size_t(r)];
        ++row.converged;
      }
      steady_sum += steady[size_t(r)];
    }
    row.mean_convergence_time = row.converged > 0 ? conv_sum / row.converged : 0.0;
    row.mean_steady_state_error = steady_sum / repeats;
    table.push_back(row);
  }
  return table;
}

ComparisonResult run_baseline_comparison(const ScenarioConfig& base) {
  if (base.delays.bound != 0.0)
    throw PreconditionViolation("run_baseline_comparison: requires a zero-delay configuration");
  ScenarioConfig proposed_cfg = base;
  proposed_cfg.controller = ControllerKind::Proposed;
  ScenarioConfig baseline_cfg = base;
  baseline_cfg.controller = ControllerKind::LeaderFollower;

  TimeSeries proposed = run_scenario(proposed_cfg);
  TimeSeries baseline = run_scenario(baseline_cfg);

  ComparisonResult out;
  out.proposed = summarize(proposed, base.convergence, base.control_onset, base.steady_window);
  out.baseline = summarize(baseline, base.convergence, base.control_onset, base.steady_window);
  const double t_end = proposed.records.empty() ? 0.0 : proposed.records.back().t;
  out.reduction = error_reduction(proposed, baseline, t_end - base.steady_window, t_end);
  return out;
}

}  // namespace mmcoop
