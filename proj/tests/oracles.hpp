#pragma once

// Independent reference solutions used only by the test suite: classical
// shooting methods for the 1d two-point boundary value problems, integrated
// with fixed-step RK4 at high resolution. Nothing here shares code with the
// library under test beyond <cmath>.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

// First eigenvalue of -(|u'|^{p-2}u')' = lambda |u|^{p-2} u, u(0) = u(1) = 0,
// via the flux variable w = |u'|^{p-2}u'. The first eigenfunction is symmetric
// about 1/2, so lambda is the root of w(1/2; lambda) = 0.
inline double eigen_shoot_whalf(double p, double lambda, int steps) {
  const double h = 0.5 / steps;
  double u = 0.0, w = 1.0;
  auto du = [p](double wv) {
    return (wv >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(wv), 1.0 / (p - 1.0));
  };
  auto dw = [p, lambda](double uv) {
    return -lambda * (uv >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(uv), p - 1.0);
  };
  for (int i = 0; i < steps; ++i) {
    const double k1u = du(w), k1w = dw(u);
    const double k2u = du(w + 0.5 * h * k1w), k2w = dw(u + 0.5 * h * k1u);
    const double k3u = du(w + 0.5 * h * k2w), k3w = dw(u + 0.5 * h * k2u);
    const double k4u = du(w + h * k3w), k4w = dw(u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
  return w;
}

inline double plaplace_eigenvalue_1d(double p, int steps = 100000) {
  double lo = 1.0;
  while (eigen_shoot_whalf(p, lo, steps) < 0.0) lo *= 0.5;
  double hi = 2.0 * lo;
  while (eigen_shoot_whalf(p, hi, steps) > 0.0) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eigen_shoot_whalf(p, mid, steps) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Singular problem -u'' = u^{-1/2}, u(0) = u(1) = 0. Shooting on the initial
// slope with a series start u = s x - (4/3) s^{-1/2} x^{3/2} through the
// integrable singularity at x = 0; symmetry gives u'(1/2) = 0 at the solution.
struct SingularBvp {
  double slope = 0.0;  // u'(0)
  double umax = 0.0;   // u(1/2)
};

inline double singular_shoot_vhalf(double s, int steps, double* umax = nullptr) {
  const double x0 = 1e-8;
  double u = s * x0 - (4.0 / 3.0) * std::pow(s, -0.5) * std::pow(x0, 1.5);
  double v = s - 2.0 * std::pow(s, -0.5) * std::sqrt(x0);
  const double h = (0.5 - x0) / steps;
  auto acc = [](double uv) {
    if (uv <= 0.0) return -std::numeric_limits<double>::infinity();
    return -1.0 / std::sqrt(uv);
  };
  for (int i = 0; i < steps; ++i) {
    const double k1u = v, k1v = acc(u);
    const double k2u = v + 0.5 * h * k1v, k2v = acc(u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = acc(u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = acc(u + h * k3u);
    if (!std::isfinite(k1v + k2v + k3v + k4v))
      return -std::numeric_limits<double>::infinity();  // slope too small
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  if (umax) *umax = u;
  return v;
}

inline SingularBvp singular_bvp_1d(int steps = 100000) {
  double lo = 1.0, hi = 2.0;
  while (singular_shoot_vhalf(lo, steps) > 0.0) lo *= 0.5;
  while (singular_shoot_vhalf(hi, steps) < 0.0) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (singular_shoot_vhalf(mid, steps) < 0.0 ? lo : hi) = mid;
  }
  SingularBvp r;
  r.slope = 0.5 * (lo + hi);
  singular_shoot_vhalf(r.slope, steps, &r.umax);
  return r;
}

}  // namespace oracle
