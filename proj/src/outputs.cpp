#include "mmcoop/outputs.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mmcoop {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_timeseries_csv(const TimeSeries& series, const std::string& path) {
  std::ofstream out = open_out(path);
  if (series.dim == 2) {
    out << "t,robot,ex,ey,hx,hy,href_x,href_y,err_norm,ux,uy\n";
  } else {
    out << "t,robot";
    const char* groups[] = {"e", "h", "href", "u"};
    for (const char* g : groups)
      for (int a = 1; a <= 6; ++a) out << ',' << g << a;
    out << ",err_norm\n";
  }
  for (const auto& rec : series.records) {
    for (int i = 0; i < series.n; ++i) {
      out << fmt(rec.t) << ',' << (i + 1);
      const Eigen::VectorXd href = rec.h.col(i) - rec.h_err.col(i);
      if (series.dim == 2) {
        out << ',' << fmt(rec.e(0, i)) << ',' << fmt(rec.e(1, i));
        out << ',' << fmt(rec.h(0, i)) << ',' << fmt(rec.h(1, i));
        out << ',' << fmt(href[0]) << ',' << fmt(href[1]);
        out << ',' << fmt(rec.err_norm[i]);
        out << ',' << fmt(rec.u(0, i)) << ',' << fmt(rec.u(1, i));
      } else {
        for (int a = 0; a < 6; ++a) out << ',' << fmt(rec.e(a, i));
        for (int a = 0; a < 6; ++a) out << ',' << fmt(rec.h(a, i));
        for (int a = 0; a < 6; ++a) out << ',' << fmt(href[a]);
        for (int a = 0; a < 6; ++a) out << ',' << fmt(rec.u(a, i));
        out << ',' << fmt(rec.err_norm[i]);
      }
      out << '\n';
    }
  }
}

void write_summary_json(const RunSummary& summary, const std::string& path) {
  nlohmann::json j;
  if (summary.convergence_time)
    j["convergence_time"] = *summary.convergence_time;
  else
    j["convergence_time"] = nullptr;
  j["steady_state_error"] = summary.steady_state_error;
  j["max_error"] = summary.max_error;
  j["windowed_mean"] = summary.windowed_mean;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_wrench_traces(const TimeSeries& series, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# t";
  for (int i = 1; i <= series.n; ++i)
    for (int a = 1; a <= series.dim; ++a) out << " herr_" << i << '_' << a;
  out << '\n';
  for (const auto& rec : series.records) {
    out << fmt(rec.t);
    for (int i = 0; i < series.n; ++i)
      for (int a = 0; a < series.dim; ++a) out << ' ' << fmt(rec.h_err(a, i));
    out << '\n';
  }
}

void write_lyapunov_trace(const TimeSeries& series, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# t V V1 V2 V3\n";
  for (const auto& rec : series.records) {
    if (!rec.lyapunov) continue;
    out << fmt(rec.t) << ' ' << fmt(rec.lyapunov->V) << ' ' << fmt(rec.lyapunov->V1) << ' '
        << fmt(rec.lyapunov->V2) << ' ' << fmt(rec.lyapunov->V3) << '\n';
  }
}

void write_sweep_table(const std::vector<SweepRow>& table, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# bound mean_convergence_time mean_steady_state_error converged repeats\n";
  for (const auto& row : table) {
    out << fmt(row.bound) << ' ' << fmt(row.mean_convergence_time) << ' '
        << fmt(row.mean_steady_state_error) << ' ' << row.converged << ' ' << row.repeats << '\n';
  }
}

void emit_outputs(const TimeSeries& series, const RunSummary& summary, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
  const std::filesystem::path base(dir);
  write_timeseries_csv(series, (base / "timeseries.csv").string());
  write_summary_json(summary, (base / "summary.json").string());
  write_wrench_traces(series, (base / "wrench_traces.dat").string());
  bool any_lyap = false;
  for (const auto& rec : series.records) any_lyap = any_lyap || rec.lyapunov.has_value();
  if (any_lyap) write_lyapunov_trace(series, (base / "lyapunov.dat").string());
}

std::vector<std::pair<Eigen::Matrix3d, Wrenchd>> load_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calibration samples: " + path);
  std::vector<std::pair<Eigen::Matrix3d, Wrenchd>> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (vals.empty() && line_no == 1) continue;  // header row
    if (vals.size() != 15)
      throw IoError("calibration samples: expected 15 columns at line " + std::to_string(line_no));
    Eigen::Matrix3d r;
    r << vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8];
    Wrenchd w(Eigen::Vector3d(vals[9], vals[10], vals[11]),
              Eigen::Vector3d(vals[12], vals[13], vals[14]));
    samples.emplace_back(r, w);
  }
  return samples;
}

}  // namespace mmcoop
