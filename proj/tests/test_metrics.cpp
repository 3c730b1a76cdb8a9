#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmcoop/metrics.hpp"
#include "mmcoop/rng.hpp"

using namespace mmcoop;

namespace {

// Single-robot series with a prescribed error-norm signal.
TimeSeries synthetic_series(const std::vector<double>& err, double dt) {
  TimeSeries s;
  s.n = 1;
  s.dim = 2;
  s.dt = dt;
  for (std::size_t i = 0; i < err.size(); ++i) {
    StepRecord rec;
    rec.t = dt * static_cast<double>(i);
    rec.e = Eigen::MatrixXd::Zero(2, 1);
    rec.delta_e = Eigen::MatrixXd::Zero(2, 1);
    rec.h = Eigen::MatrixXd::Zero(2, 1);
    rec.h_err = Eigen::MatrixXd::Zero(2, 1);
    rec.h_err(0, 0) = err[i];
    rec.u = Eigen::MatrixXd::Zero(2, 1);
    rec.err_norm = Eigen::VectorXd::Constant(1, std::abs(err[i]));
    s.records.push_back(std::move(rec));
  }
  return s;
}

}  // namespace

TEST_CASE("convergence_time: always below yields zero") {
  TimeSeries s = synthetic_series(std::vector<double>(501, 0.1), 0.04);
  auto t = convergence_time(s, 0.5, 10.0);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(0.0));
}

TEST_CASE("convergence_time: never below yields none") {
  TimeSeries s = synthetic_series(std::vector<double>(501, 2.0), 0.04);
  CHECK_FALSE(convergence_time(s, 0.5, 10.0).has_value());
  CHECK_FALSE(convergence_time(s, 0.5, 10.0, 1.0).has_value());
}

TEST_CASE("convergence_time: analytic crossing of a decaying exponential") {
  // err(t) = 5 exp(-(t - 40)) after onset 40: crosses 0.5 at 40 + ln 10.
  const double dt = 0.04;
  std::vector<double> err;
  for (int i = 0; i <= 1500; ++i) {
    const double t = dt * i;
    err.push_back(t < 40.0 ? 5.0 : 5.0 * std::exp(-(t - 40.0)));
  }
  TimeSeries s = synthetic_series(err, dt);
  auto t = convergence_time(s, 0.5, 40.0);
  REQUIRE(t.has_value());
  CHECK(std::abs(*t - std::log(10.0)) <= dt + 1e-12);
  // A finite dwell gives the same crossing on a monotone signal.
  auto t_dwell = convergence_time(s, 0.5, 40.0, 1.0);
  REQUIRE(t_dwell.has_value());
  CHECK(*t_dwell == *t);
}

TEST_CASE("convergence_time: a late excursion resets the through-end rule") {
  const double dt = 0.1;
  std::vector<double> err(301, 0.1);
  err[200] = 1.0;  // t = 20
  TimeSeries s = synthetic_series(err, dt);
  auto t = convergence_time(s, 0.5, 0.0);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(20.1));
  // With a 2 s dwell the first quiet stretch qualifies.
  auto t_dwell = convergence_time(s, 0.5, 0.0, 2.0);
  REQUIRE(t_dwell.has_value());
  CHECK(*t_dwell == doctest::Approx(0.0));
}

TEST_CASE("convergence_time: onset outside the series is rejected") {
  TimeSeries s = synthetic_series(std::vector<double>(11, 0.1), 0.1);
  CHECK_THROWS_AS(convergence_time(s, 0.5, 5.0), PreconditionViolation);
}

TEST_CASE("steady_state_error: constants and zero") {
  TimeSeries zero = synthetic_series(std::vector<double>(101, 0.0), 0.1);
  CHECK(steady_state_error(zero, 2.0) == 0.0);
  TimeSeries c = synthetic_series(std::vector<double>(101, 0.7), 0.1);
  CHECK(steady_state_error(c, 2.0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(steady_state_error(c, 100.0), WindowTooLong);
}

TEST_CASE("steady_state_error: folded-normal mean within 5 percent") {
  Rng rng(71);
  const double sigma = 0.3;
  std::vector<double> err;
  err.reserve(501);
  for (int i = 0; i <= 500; ++i) err.push_back(std::abs(sigma * rng.normal()));
  TimeSeries s = synthetic_series(err, 0.04);
  const double expected = sigma * std::sqrt(2.0 / M_PI);
  CHECK(steady_state_error(s, 20.0) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("windowed_mean_error and max_error on a step signal") {
  std::vector<double> err(101, 1.0);
  for (int i = 51; i <= 100; ++i) err[size_t(i)] = 3.0;
  TimeSeries s = synthetic_series(err, 0.1);
  CHECK(max_error(s, 0.0, 10.0) == 3.0);
  CHECK(max_error(s, 0.0, 5.0) == 1.0);
  CHECK(windowed_mean_error(s, 5.1, 10.0) == doctest::Approx(3.0));
}

TEST_CASE("summarize bundles the metrics") {
  std::vector<double> err;
  for (int i = 0; i <= 200; ++i) err.push_back(i < 100 ? 2.0 : 0.2);
  TimeSeries s = synthetic_series(err, 0.1);
  ConvergenceSpec spec{0.5, 1.0};
  RunSummary sum = summarize(s, spec, 5.0, 4.0);
  REQUIRE(sum.convergence_time.has_value());
  CHECK(*sum.convergence_time == doctest::Approx(5.0));  // crossing at t = 10
  CHECK(sum.steady_state_error == doctest::Approx(0.2));
  CHECK(sum.max_error == doctest::Approx(2.0));
}

TEST_CASE("error_reduction reports per-direction improvements") {
  TimeSeries a = synthetic_series(std::vector<double>(51, 0.5), 0.1);
  TimeSeries b = synthetic_series(std::vector<double>(51, 2.0), 0.1);
  ReductionReport rep = error_reduction(a, b, 0.0, 5.0);
  CHECK(rep.max_reduction_pct[0] == doctest::Approx(75.0));
  CHECK(rep.avg_reduction_pct[0] == doctest::Approx(75.0));
}
