#pragma once

#include <Eigen/Dense>

#include "mmcoop/comms.hpp"
#include "mmcoop/errors.hpp"

namespace mmcoop {

/// Stability certificate for the delayed consensus error dynamics: a gain set
/// (k, beta), robot count n, delay bound tau, Lyapunov coefficients gamma and
/// the three scalar condition values alpha. Valid iff all alpha > 0.
struct Certificate {
  int n = 0;
  double tau = 0.0;
  double k = 0.0;
  double beta = 0.0;
  Eigen::Vector3d gamma = Eigen::Vector3d::Zero();
  Eigen::Vector3d alpha = Eigen::Vector3d::Zero();
};

struct FeasibilityOutcome {
  bool feasible = false;
  Certificate certificate;  // populated when feasible
  double margin = 0.0;      // best achievable min(alpha) at gamma1 = 1
};

/// The three scalar certificate conditions:
///   alpha1 = 2 g1 k - 2 g3 tau n^3 k^2 - (g2 + g3/(2 tau) + g1 beta k) n
///   alpha2 = g3/(2 tau) - g1 beta k - 2 g3 tau n^2 beta^2 k^2
///   alpha3 = g2 - g3/(2 tau)
/// Linear homogeneous in gamma.
Eigen::Vector3d alpha_conditions(const Eigen::Vector3d& gamma, double k, double beta, int n,
                                 double tau);

/// Searches for gamma > 0 with all alpha > eps. Homogeneity makes gamma1 = 1
/// lossless; the remaining 2-variable linear feasibility problem is solved
/// exactly at its optimal corner, equalizing the three margins.
FeasibilityOutcome find_certificate(double k, double beta, int n, double tau, double eps = 1e-9);

/// Independent feasibility check: dense log-spaced scan over the normalized
/// (gamma2, gamma3) quadrant. Used to cross-check Infeasible outcomes.
bool grid_scan_feasible(double k, double beta, int n, double tau, int resolution = 400,
                        double eps = 1e-9, double lo = 1e-9, double hi = 1e6);

/// Largest certifiable delay bound, by bisection on find_certificate.
/// Always <= 1/(2 n beta k); returns 0 when no delay is certifiable.
double max_certifiable_delay(double k, double beta, int n, double tol = 1e-6);

struct LyapunovSample {
  double t = 0.0;
  double V = 0.0;
  double V1 = 0.0;
  double V2 = 0.0;
  double V3 = 0.0;
};

/// Numerically evaluates the delay-window Lyapunov functional at time t from a
/// sampled trajectory:
///   V1 = g1 sum_i |xi_i|^2
///   V2 = g2 sum_i w_i  int_{t-tau}^t |xi_i(s)|^2 ds
///   V3 = g3 sum_i w_i  int_{t-tau}^t (s - (t - tau)) |xi_i'(s)|^2 ds
/// with w_i = sum_j a_ji. Integrals use the trapezoid rule on the sample grid;
/// xi' uses forward differences per segment. The trajectory must cover
/// [t - tau, t].
LyapunovSample lyapunov_value(const Eigen::Vector3d& gamma, double tau, const CommGraph& graph,
                              const StateHistory& trajectory, double t);

}  // namespace mmcoop
