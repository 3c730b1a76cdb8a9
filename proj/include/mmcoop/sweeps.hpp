#pragma once

#include <vector>

#include "mmcoop/metrics.hpp"
#include "mmcoop/scenario.hpp"

namespace mmcoop {

struct SweepRow {
  double bound = 0.0;
  double mean_convergence_time = 0.0;  // over converged repeats, s after onset
  double mean_steady_state_error = 0.0;
  int converged = 0;
  int repeats = 0;
};

/// Runs `repeats` seeds of the base scenario at each delay bound and averages
/// convergence time and steady-state error. Repeat seeds derive
/// deterministically from the base seed; repeats run on parallel workers.
std::vector<SweepRow> run_delay_sweep(const ScenarioConfig& base, const std::vector<double>& bounds,
                                      int repeats);

struct ComparisonResult {
  RunSummary proposed;
  RunSummary baseline;
  ReductionReport reduction;  // proposed vs. baseline over the steady window
};

/// Paired run of the proposed law against the leader-follower baseline on the
/// same seed. Requires a zero-delay configuration.
ComparisonResult run_baseline_comparison(const ScenarioConfig& base);

/// Seed for repeat r of a derived batch.
std::uint64_t derived_seed(std::uint64_t base_seed, std::uint64_t stream, std::uint64_t repeat);

}  // namespace mmcoop
