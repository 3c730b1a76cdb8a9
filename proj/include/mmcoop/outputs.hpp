#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mmcoop/metrics.hpp"
#include "mmcoop/sensing.hpp"
#include "mmcoop/simulate.hpp"
#include "mmcoop/sweeps.hpp"

namespace mmcoop {

/// CSV time series: planar schema
///   t,robot,ex,ey,hx,hy,href_x,href_y,err_norm,ux,uy
/// and the 6-axis variant for embodied runs. One row per (record, robot).
void write_timeseries_csv(const TimeSeries& series, const std::string& path);

void write_summary_json(const RunSummary& summary, const std::string& path);

/// Gnuplot-ready wrench-error traces: t followed by per-robot error columns.
void write_wrench_traces(const TimeSeries& series, const std::string& path);

/// Gnuplot-ready Lyapunov trace (t V V1 V2 V3) for records carrying samples.
void write_lyapunov_trace(const TimeSeries& series, const std::string& path);

void write_sweep_table(const std::vector<SweepRow>& table, const std::string& path);

/// Writes the CSV time series, the JSON summary and the plot-data files into
/// `dir` (created if missing).
void emit_outputs(const TimeSeries& series, const RunSummary& summary, const std::string& dir);

/// Loads calibration samples from a CSV with columns
/// R11,R12,R13,R21,R22,R23,R31,R32,R33,fx,fy,fz,tx,ty,tz (header optional).
std::vector<std::pair<Eigen::Matrix3d, Wrenchd>> load_calibration_csv(const std::string& path);

}  // namespace mmcoop
