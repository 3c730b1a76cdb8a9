#include "mmcoop/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mmcoop {

namespace {

void check_params(double k, double beta, int n, double tau) {
  if (!(k > 0.0) || !(beta > 0.0)) throw PreconditionViolation("gains must be positive");
  if (n < 2) throw PreconditionViolation("robot count must be at least 2");
  if (!(tau > 0.0)) throw PreconditionViolation("delay bound must be positive");
}

}  // namespace

Eigen::Vector3d alpha_conditions(const Eigen::Vector3d& gamma, double k, double beta, int n,
                                 double tau) {
  check_params(k, beta, n, tau);
  if ((gamma.array() <= 0.0).any())
    throw PreconditionViolation("Lyapunov coefficients must be positive");
  const double g1 = gamma[0], g2 = gamma[1], g3 = gamma[2];
  const double nn = static_cast<double>(n);
  Eigen::Vector3d alpha;
  alpha[0] = 2.0 * g1 * k - 2.0 * g3 * tau * nn * nn * nn * k * k -
             (g2 + g3 / (2.0 * tau) + g1 * beta * k) * nn;
  alpha[1] = g3 / (2.0 * tau) - g1 * beta * k - 2.0 * g3 * tau * nn * nn * beta * beta * k * k;
  alpha[2] = g2 - g3 / (2.0 * tau);
  return alpha;
}

FeasibilityOutcome find_certificate(double k, double beta, int n, double tau, double eps) {
  check_params(k, beta, n, tau);
  FeasibilityOutcome out;
  const double nn = static_cast<double>(n);

  // alpha2 = c * g3 - beta k (at g1 = 1); infeasible for any g3 > 0 if c <= 0.
  const double c = 1.0 / (2.0 * tau) - 2.0 * tau * nn * nn * beta * beta * k * k;
  if (c <= 0.0) return out;

  // alpha1 is strictly decreasing in g2 and g3, and the tightest admissible
  // values under alpha2 >= m, alpha3 >= m are g3(m) = (beta k + m)/c and
  // g2(m) = g3(m)/(2 tau) + m. Substituting gives alpha1(m) affine in m, so
  // the maximal equalized margin m* (alpha1 = alpha2 = alpha3 = m*) is exact.
  const double p = (2.0 * tau * nn * nn * nn * k * k + nn / tau) / c;
  const double m_star = (2.0 * k - nn * beta * k - beta * k * p) / (1.0 + nn + p);
  out.margin = m_star;
  if (!(m_star > eps)) return out;

  const double g3 = (beta * k + m_star) / c;
  const double g2 = g3 / (2.0 * tau) + m_star;
  out.feasible = true;
  out.certificate.n = n;
  out.certificate.tau = tau;
  out.certificate.k = k;
  out.certificate.beta = beta;
  out.certificate.gamma = Eigen::Vector3d(1.0, g2, g3);
  out.certificate.alpha = alpha_conditions(out.certificate.gamma, k, beta, n, tau);
  return out;
}

bool grid_scan_feasible(double k, double beta, int n, double tau, int resolution, double eps,
                        double lo, double hi) {
  check_params(k, beta, n, tau);
  const double nn = static_cast<double>(n);
  const double log_lo = std::log(lo);
  const double log_step = (std::log(hi) - log_lo) / (resolution - 1);
  const double inv_2tau = 1.0 / (2.0 * tau);
  const double a1_g3 = 2.0 * tau * nn * nn * nn * k * k + inv_2tau * nn;
  const double a2_g3 = inv_2tau - 2.0 * tau * nn * nn * beta * beta * k * k;
  const double a1_const = 2.0 * k - beta * k * nn;
  for (int ig3 = 0; ig3 < resolution; ++ig3) {
    const double g3 = std::exp(log_lo + ig3 * log_step);
    if (a2_g3 * g3 - beta * k <= eps) continue;  // alpha2
    for (int ig2 = 0; ig2 < resolution; ++ig2) {
      const double g2 = std::exp(log_lo + ig2 * log_step);
      if (g2 - g3 * inv_2tau <= eps) continue;                 // alpha3
      if (a1_const - a1_g3 * g3 - nn * g2 > eps) return true;  // alpha1
    }
  }
  return false;
}

double max_certifiable_delay(double k, double beta, int n, double tol) {
  if (!(k > 0.0) || !(beta > 0.0)) throw PreconditionViolation("gains must be positive");
  if (n < 2) throw PreconditionViolation("robot count must be at least 2");
  const double upper = 1.0 / (2.0 * n * beta * k);  // alpha2 requires tau < upper
  double lo = std::min(1e-9, upper * 0.5);
  if (!find_certificate(k, beta, n, lo).feasible) return 0.0;
  double hi = upper;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (find_certificate(k, beta, n, mid).feasible ? lo : hi) = mid;
  }
  return lo;
}

namespace {

// Integrals of squared signal / squared segment slope over [t0, t] from a
// timestamped sample sequence. Trapezoid rule for the value integral (the
// squared norm interpolated linearly between samples), forward-difference
// segment slopes for the weighted derivative integral.
struct WindowIntegrals {
  double value = 0.0;     // int |x(s)|^2 ds
  double weighted = 0.0;  // int (s - t0) |x'(s)|^2 ds
};

WindowIntegrals window_integrals(const std::vector<double>& ts,
                                 const std::vector<Eigen::VectorXd>& xs, double t0, double t) {
  WindowIntegrals out;
  if (ts.empty() || ts.front() > t0 + 1e-12 || ts.back() < t - 1e-12)
    throw InsufficientHistory("lyapunov_value: trajectory does not cover the delay window");

  const auto sq = [&](std::size_t idx) { return xs[idx].squaredNorm(); };
  // First segment index whose right endpoint exceeds t0.
  std::size_t j = static_cast<std::size_t>(
      std::distance(ts.begin(), std::upper_bound(ts.begin(), ts.end(), t0)));
  if (j > 0) --j;
  for (; j + 1 < ts.size() && ts[j] < t; ++j) {
    const double a = std::max(ts[j], t0);
    const double b = std::min(ts[j + 1], t);
    if (b <= a) continue;
    const double span = ts[j + 1] - ts[j];
    const double ga = sq(j) + (sq(j + 1) - sq(j)) * (a - ts[j]) / span;
    const double gb = sq(j) + (sq(j + 1) - sq(j)) * (b - ts[j]) / span;
    out.value += 0.5 * (ga + gb) * (b - a);
    const double slope_sq = ((xs[j + 1] - xs[j]) / span).squaredNorm();
    out.weighted += 0.5 * slope_sq * ((b - t0) * (b - t0) - (a - t0) * (a - t0));
  }
  return out;
}

}  // namespace

LyapunovSample lyapunov_value(const Eigen::Vector3d& gamma, double tau, const CommGraph& graph,
                              const StateHistory& trajectory, double t) {
  if ((gamma.array() <= 0.0).any())
    throw PreconditionViolation("Lyapunov coefficients must be positive");
  if (!(tau > 0.0)) throw PreconditionViolation("delay bound must be positive");
  if (trajectory.n() != graph.n())
    throw DimensionMismatch("lyapunov_value: history/graph robot count mismatch");

  LyapunovSample out;
  out.t = t;
  for (int i = 0; i < graph.n(); ++i) {
    out.V1 += gamma[0] * trajectory.sample_at(i, t).squaredNorm();
    const double w = static_cast<double>(graph.out_degree(i));  // sum_j a_ji
    if (w == 0.0) continue;
    WindowIntegrals wi = window_integrals(trajectory.times(i), trajectory.samples(i), t - tau, t);
    out.V2 += gamma[1] * w * wi.value;
    out.V3 += gamma[2] * w * wi.weighted;
  }
  out.V = out.V1 + out.V2 + out.V3;
  return out;
}

}  // namespace mmcoop
