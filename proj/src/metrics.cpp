#include "mmcoop/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mmcoop {

std::optional<double> convergence_time(const TimeSeries& series, double threshold, double onset,
                                       double dwell) {
  if (series.records.empty()) return std::nullopt;
  if (onset < series.records.front().t - 1e-12 || onset > series.records.back().t + 1e-12)
    throw PreconditionViolation("convergence_time: onset outside the series");

  const double t_end = series.records.back().t;
  std::optional<double> run_start;  // start of the current consecutive below-threshold run
  auto qualifies = [&](double start, double last) {
    if (std::isfinite(dwell)) return last - start >= dwell - 1e-12;
    return last >= t_end - 1e-12;  // infinite dwell: must stay below through the end
  };
  for (const auto& rec : series.records) {
    if (rec.t + 1e-12 < onset) continue;
    if (rec.err_norm.maxCoeff() < threshold) {
      if (!run_start) run_start = rec.t;
      if (qualifies(*run_start, rec.t)) return *run_start - onset;
    } else {
      run_start.reset();
    }
  }
  return std::nullopt;
}

double steady_state_error(const TimeSeries& series, double window) {
  if (series.records.empty()) throw PreconditionViolation("steady_state_error: empty series");
  const double t_end = series.records.back().t;
  const double t_begin = series.records.front().t;
  if (window > t_end - t_begin + 1e-12)
    throw WindowTooLong("steady_state_error: window exceeds the series span");
  double sum = 0.0;
  int count = 0;
  for (const auto& rec : series.records) {
    if (rec.t + 1e-12 < t_end - window) continue;
    sum += rec.err_norm.maxCoeff();
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

double max_error(const TimeSeries& series, double t0, double t1) {
  double m = 0.0;
  for (const auto& rec : series.records)
    if (rec.t >= t0 - 1e-12 && rec.t <= t1 + 1e-12) m = std::max(m, rec.err_norm.maxCoeff());
  return m;
}

double windowed_mean_error(const TimeSeries& series, double t0, double t1) {
  double sum = 0.0;
  int count = 0;
  for (const auto& rec : series.records) {
    if (rec.t < t0 - 1e-12 || rec.t > t1 + 1e-12) continue;
    sum += rec.err_norm.mean();
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

RunSummary summarize(const TimeSeries& series, const ConvergenceSpec& convergence, double onset,
                     double steady_window) {
  RunSummary s;
  s.convergence_time = convergence_time(series, convergence.threshold, onset, convergence.dwell);
  s.steady_state_error = steady_state_error(series, steady_window);
  if (!series.records.empty()) {
    const double t_end = series.records.back().t;
    s.max_error = max_error(series, onset, t_end);
    s.windowed_mean = windowed_mean_error(series, t_end - steady_window, t_end);
  }
  return s;
}

ReductionReport error_reduction(const TimeSeries& run, const TimeSeries& paired, double t0,
                                double t1) {
  if (run.dim != paired.dim || run.n != paired.n)
    throw DimensionMismatch("error_reduction: series shapes differ");
  const int d = run.dim;
  Eigen::VectorXd run_max = Eigen::VectorXd::Zero(d), paired_max = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd run_sum = Eigen::VectorXd::Zero(d), paired_sum = Eigen::VectorXd::Zero(d);
  int run_count = 0, paired_count = 0;
  for (const auto& rec : run.records) {
    if (rec.t < t0 - 1e-12 || rec.t > t1 + 1e-12) continue;
    const Eigen::VectorXd abs_max = rec.h_err.cwiseAbs().rowwise().maxCoeff();
    run_max = run_max.cwiseMax(abs_max);
    run_sum += rec.h_err.cwiseAbs().rowwise().mean();
    ++run_count;
  }
  for (const auto& rec : paired.records) {
    if (rec.t < t0 - 1e-12 || rec.t > t1 + 1e-12) continue;
    const Eigen::VectorXd abs_max = rec.h_err.cwiseAbs().rowwise().maxCoeff();
    paired_max = paired_max.cwiseMax(abs_max);
    paired_sum += rec.h_err.cwiseAbs().rowwise().mean();
    ++paired_count;
  }
  ReductionReport rep;
  rep.max_reduction_pct.resize(d);
  rep.avg_reduction_pct.resize(d);
  for (int a = 0; a < d; ++a) {
    const double pm = paired_max[a];
    const double pa = paired_count > 0 ? paired_sum[a] / paired_count : 0.0;
    const double rm = run_max[a];
    const double ra = run_count > 0 ? run_sum[a] / run_count : 0.0;
    rep.max_reduction_pct[a] = pm > 0.0 ? 100.0 * (1.0 - rm / pm) : 0.0;
    rep.avg_reduction_pct[a] = pa > 0.0 ? 100.0 * (1.0 - ra / pa) : 0.0;
  }
  return rep;
}

}  // namespace mmcoop
