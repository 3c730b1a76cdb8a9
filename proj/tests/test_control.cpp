#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmcoop/control.hpp"
#include "mmcoop/rng.hpp"

using namespace mmcoop;

namespace {

Eigen::VectorXd v2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("gains and stiffness validate positivity") {
  CHECK_THROWS_AS(ControlGains(0.0, 0.1), PreconditionViolation);
  CHECK_THROWS_AS(ControlGains(0.5, -0.1), PreconditionViolation);
  CHECK_THROWS_AS(StiffnessModel(v2(1.0, 0.0)), PreconditionViolation);
  CHECK_NOTHROW(ControlGains(0.5, 0.1));
}

TEST_CASE("interaction_wrench: equal deviations feel the reference wrench") {
  StiffnessModel k(v2(10.5, 9.5));
  Eigen::VectorXd dev = v2(0.3, -0.2);
  Eigen::VectorXd h_ref = v2(1.0, -2.0);
  Eigen::VectorXd h = interaction_wrench(k, dev, {dev, dev, dev}, h_ref);
  CHECK((h - h_ref).norm() == 0.0);
}

TEST_CASE("interaction_wrench: hand-computed two-robot case") {
  StiffnessModel k(v2(10.5, 9.5));
  Eigen::VectorXd h = interaction_wrench(k, v2(0, 0), {v2(0.1, 0.1)}, v2(0, 0));
  CHECK(h[0] == doctest::Approx(1.05).epsilon(1e-12));
  CHECK(h[1] == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("interaction_wrench: zero deviations everywhere") {
  StiffnessModel k(v2(10.5, 9.5));
  Eigen::VectorXd h_ref = v2(0.7, 0.7);
  CHECK((interaction_wrench(k, v2(0, 0), {v2(0, 0), v2(0, 0)}, h_ref) - h_ref).norm() == 0.0);
  CHECK_THROWS_AS(interaction_wrench(k, Eigen::VectorXd::Zero(3), {}, h_ref), DimensionMismatch);
}

TEST_CASE("correction_target: on-reference wrench keeps the pose") {
  StiffnessModel k(v2(10.5, 9.5));
  Eigen::VectorXd e = v2(0.4, 0.6);
  CHECK((correction_target(k, v2(3, 4), v2(3, 4), e) - e).norm() == 0.0);
}

TEST_CASE("correction_target inverts the hand-computed coupling example") {
  StiffnessModel k(v2(10.5, 9.5));
  Eigen::VectorXd e_d = correction_target(k, v2(1.05, 0.95), v2(0, 0), v2(0, 0));
  CHECK(e_d[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(e_d[1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("correction_target: scaling K scales the correction inversely") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd diag = v2(rng.uniform(0.5, 20.0), rng.uniform(0.5, 20.0));
    const double c = rng.uniform(0.1, 10.0);
    Eigen::VectorXd h = v2(rng.symmetric(), rng.symmetric());
    Eigen::VectorXd e = v2(rng.symmetric(), rng.symmetric());
    Eigen::VectorXd d1 = correction_target(StiffnessModel(diag), h, v2(0, 0), e) - e;
    Eigen::VectorXd d2 = correction_target(StiffnessModel((c * diag).eval()), h, v2(0, 0), e) - e;
    CHECK((d1 - c * d2).norm() < 1e-12 * d1.norm());
  }
}

TEST_CASE("control_input: on-reference wrenches give exactly zero") {
  StiffnessModel k(v2(10.5, 9.5));
  ControlGains gains(0.5, 0.1);
  TrackingState local;
  local.h_ref = v2(0, 0);
  local.h = v2(0, 0);
  Eigen::VectorXi row(3);
  row << 0, 1, 1;
  std::vector<Eigen::VectorXd> delayed{Eigen::VectorXd(), v2(0, 0), v2(0, 0)};
  Eigen::VectorXd u = control_input(local, delayed, row, gains, k, identity_correction_map());
  CHECK(u[0] == 0.0);
  CHECK(u[1] == 0.0);
}

TEST_CASE("control_input: hand-computed planar single-neighbor case") {
  // K^{-1}(h_ref - h) = (0.2, 0.2) locally, (1.0, 1.0) for the neighbor.
  StiffnessModel k(v2(1.0, 1.0));
  ControlGains gains(0.5, 0.1);
  TrackingState local;
  local.h_ref = v2(0.2, 0.2);
  local.h = v2(0, 0);
  Eigen::VectorXi row(2);
  row << 0, 1;
  std::vector<Eigen::VectorXd> delayed{Eigen::VectorXd(), v2(1.0, 1.0)};
  Eigen::VectorXd u = control_input(local, delayed, row, gains, k, identity_correction_map());
  CHECK(u[0] == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("control_input doubles with k") {
  StiffnessModel k(v2(10.5, 9.5));
  TrackingState local;
  local.h_ref = v2(0.3, -0.4);
  local.h = v2(-0.1, 0.2);
  Eigen::VectorXi row(2);
  row << 0, 1;
  std::vector<Eigen::VectorXd> delayed{Eigen::VectorXd(), v2(0.5, 0.6)};
  Eigen::VectorXd u1 =
      control_input(local, delayed, row, ControlGains(0.5, 0.1), k, identity_correction_map());
  Eigen::VectorXd u2 =
      control_input(local, delayed, row, ControlGains(1.0, 0.1), k, identity_correction_map());
  CHECK((u2 - 2.0 * u1).norm() < 1e-15);
}

TEST_CASE("control_input_joint: equilibrium, hand value, consensus point") {
  ControlGains gains(0.5, 0.1);
  Eigen::VectorXi row(2);
  row << 0, 1;
  Eigen::VectorXd zero6 = Eigen::VectorXd::Zero(6);
  std::vector<Eigen::VectorXd> delayed{Eigen::VectorXd(), zero6};
  CHECK(control_input_joint(zero6, delayed, row, gains).norm() == 0.0);

  Eigen::VectorXd xi_i = Eigen::VectorXd::Constant(6, 0.2);
  delayed[1] = Eigen::VectorXd::Constant(6, 1.0);
  Eigen::VectorXd u = control_input_joint(xi_i, delayed, row, gains);
  for (int a = 0; a < 6; ++a) CHECK(u[a] == doctest::Approx(-0.05).epsilon(1e-12));

  // beta = 1, xi_i = xi_j: exactly zero at the consensus point.
  ControlGains unity(0.5, 1.0);
  delayed[1] = xi_i;
  CHECK(control_input_joint(xi_i, delayed, row, unity).norm() == 0.0);
}

TEST_CASE("control_input_joint is jointly linear in (xi_i, xi_j)") {
  Rng rng(52);
  ControlGains gains(0.7, 0.2);
  Eigen::VectorXi row(3);
  row << 0, 1, 1;
  auto rv = [&] {
    Eigen::VectorXd v(4);
    for (int i = 0; i < 4; ++i) v[i] = rng.symmetric();
    return v;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd xa = rv(), xb = rv();
    std::vector<Eigen::VectorXd> da{Eigen::VectorXd(), rv(), rv()};
    std::vector<Eigen::VectorXd> db{Eigen::VectorXd(), rv(), rv()};
    const double s = rng.uniform(-2.0, 2.0);
    std::vector<Eigen::VectorXd> dsum{Eigen::VectorXd(), da[1] + s * db[1], da[2] + s * db[2]};
    Eigen::VectorXd lhs = control_input_joint(xa + s * xb, dsum, row, gains);
    Eigen::VectorXd rhs = control_input_joint(xa, da, row, gains) +
                          s * control_input_joint(xb, db, row, gains);
    CHECK((lhs - rhs).norm() < 1e-14);
  }
}

TEST_CASE("wrench-space and joint-space laws agree in planar mode") {
  Rng rng(53);
  StiffnessModel k(v2(10.5, 9.5));
  ControlGains gains(0.5, 0.1);
  Eigen::VectorXi row(4);
  row << 0, 1, 0, 1;
  for (int trial = 0; trial < 50; ++trial) {
    TrackingState local;
    local.h_ref = v2(rng.symmetric(), rng.symmetric());
    local.h = v2(rng.symmetric(), rng.symmetric());
    std::vector<Eigen::VectorXd> delayed_wrench{Eigen::VectorXd(), v2(rng.symmetric(), rng.symmetric()),
                                                Eigen::VectorXd(), v2(rng.symmetric(), rng.symmetric())};
    Eigen::VectorXd u_wrench =
        control_input(local, delayed_wrench, row, gains, k, identity_correction_map());

    // Joint-space identification: xi = K^{-1}(h_ref - h) in planar mode.
    Eigen::VectorXd xi_self = k.apply_inverse(local.h_ref - local.h);
    std::vector<Eigen::VectorXd> delayed_xi{Eigen::VectorXd(), k.apply_inverse(delayed_wrench[1]),
                                            Eigen::VectorXd(), k.apply_inverse(delayed_wrench[3])};
    Eigen::VectorXd u_joint = control_input_joint(xi_self, delayed_xi, row, gains);
    CHECK((u_wrench - u_joint).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("error dynamics: zero state stays zero") {
  CommGraph g = CommGraph::complete(3);
  ErrorDynamics dyn(g, DelayTable::zero(3), ControlGains(0.5, 0.1),
                    std::vector<Eigen::VectorXd>(3, Eigen::VectorXd::Zero(2)));
  for (int s = 0; s < 100; ++s) dyn.step(0.04);
  for (int i = 0; i < 3; ++i) CHECK(dyn.xi()[size_t(i)].norm() == 0.0);
}

TEST_CASE("error dynamics: two-robot difference matches the closed form") {
  const double k = 0.5, beta = 1.0, dt = 0.04;
  CommGraph g = CommGraph::complete(2);
  std::vector<Eigen::VectorXd> xi0{Eigen::VectorXd::Constant(1, 1.0),
                                   Eigen::VectorXd::Constant(1, -0.5)};
  ErrorDynamics dyn(g, DelayTable::zero(2), ControlGains(k, beta), xi0);
  // xi1 - xi2 obeys d' = -k(1+beta) d; explicit Euler multiplies by
  // (1 - k(1+beta) dt) each step.
  double expected = 1.5;
  const double factor = 1.0 - k * (1.0 + beta) * dt;
  for (int s = 0; s < 50; ++s) {
    dyn.step(dt);
    expected *= factor;
    const double actual = dyn.xi()[0][0] - dyn.xi()[1][0];
    CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("error dynamics: degenerate gains are rejected") {
  CHECK_THROWS_AS(ControlGains(0.0, 0.0), PreconditionViolation);
}

TEST_CASE("error dynamics: max norm contracts without delays") {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(5));
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (i != j && rng.uniform() < 0.5) a(i, j) = 1;
      if (a.row(i).sum() == 0) a(i, (i + 1) % n) = 1;
    }
    std::vector<Eigen::VectorXd> xi0;
    for (int i = 0; i < n; ++i)
      xi0.push_back(Eigen::Vector2d(rng.symmetric(), rng.symmetric()));
    ErrorDynamics dyn(CommGraph::from_adjacency(a), DelayTable::zero(n), ControlGains(0.5, 0.2),
                      xi0);
    double prev = 0.0;
    for (const auto& x : dyn.xi()) prev = std::max(prev, x.norm());
    for (int s = 0; s < 200; ++s) {
      dyn.step(0.04);
      double cur = 0.0;
      for (const auto& x : dyn.xi()) cur = std::max(cur, x.norm());
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}
