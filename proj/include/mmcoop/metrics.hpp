#pragma once

#include <limits>
#include <optional>

#include "mmcoop/simulate.hpp"

namespace mmcoop {

/// Seconds after `onset` until the max-over-robots wrench error norm drops
/// below `threshold` and stays below for at least `dwell` seconds (through the
/// end of the run when dwell is infinite). Returns nullopt when never reached.
std::optional<double> convergence_time(const TimeSeries& series, double threshold, double onset,
                                       double dwell = std::numeric_limits<double>::infinity());

/// Mean over the final `window` seconds of the max-over-robots error norm.
double steady_state_error(const TimeSeries& series, double window);

/// Max-over-robots error norm, maximized over records with t in [t0, t1].
double max_error(const TimeSeries& series, double t0, double t1);

/// Mean over robots and over records with t in [t0, t1] of per-robot error norm.
double windowed_mean_error(const TimeSeries& series, double t0, double t1);

struct RunSummary {
  std::optional<double> convergence_time;  // s after onset
  double steady_state_error = 0.0;         // N
  double max_error = 0.0;                  // N, post-onset
  double windowed_mean = 0.0;              // N, over the steady window
};

RunSummary summarize(const TimeSeries& series, const ConvergenceSpec& convergence, double onset,
                     double steady_window);

/// Per-direction reductions (percent) of a run against a paired run, over
/// records with t in [t0, t1]: positive when `run` improves on `paired`.
struct ReductionReport {
  Eigen::VectorXd max_reduction_pct;
  Eigen::VectorXd avg_reduction_pct;
};

ReductionReport error_reduction(const TimeSeries& run, const TimeSeries& paired, double t0,
                                double t1);

}  // namespace mmcoop
