#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "plap/operators.hpp"

namespace plap {

/// First Dirichlet eigenpair of the p-Laplacian on the mesh.
struct Eigenpair {
  double lambda1 = 0.0;
  FeFunction phi1;
  double p = 2.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Rayleigh quotient ||u||_{1,p}^p / ||u||_p^p.
inline double rayleigh_quotient(const FeFunction& u, double p) {
  const double num = std::pow(norm_W1p(u, p), p);
  const double den = std::pow(norm_Lq(u, p), p);
  if (den == 0.0) throw std::invalid_argument("rayleigh_quotient: u vanishes");
  return num / den;
}

/// Minimizes the Rayleigh quotient over zero-trace P1 functions by
/// preconditioned descent with p-norm renormalization. The iterate starts from
/// the (positive) interpolant of the boundary distance and the line search is
/// clamped to preserve interior positivity, which selects the first mode.
inline Eigenpair first_eigenpair(const Mesh& m, double p, double tol = 1e-9) {
  detail::check_p_eta(p, 0.0);
  if (!(tol > 0.0)) throw std::invalid_argument("first_eigenpair: tol must be > 0");
  const double eta = std::sqrt(tol);

  FeFunction u = interpolate(m, [&](const Vec2&) { return 0.0; });
  for (int i = 0; i < m.n_nodes(); ++i) u.coeff[i] = m.nodal_distance[i];
  u.enforce_zero_trace();
  auto normalize = [&](FeFunction& w) {
    const double n = norm_Lq(w, p);
    for (double& c : w.coeff) c /= n;
  };
  normalize(u);

  std::unique_ptr<InteriorSolver> solver;  // reused across iterations for p = 2
  double q = rayleigh_quotient(u, p);
  int iters = 0;
  const int max_iters = 2000;
  for (; iters < max_iters; ++iters) {
    if (!solver || p != 2.0)
      solver = std::make_unique<InteriorSolver>(m, weighted_stiffness(m, u, p, eta));

    // gradient of the quotient at a p-normalized iterate (up to the factor p)
    const auto Au = apply_Ap(m, u, p, 0.0);
    const auto Bu = apply_Bp(m, u, p);
    std::vector<double> grad(m.n_nodes());
    for (int i = 0; i < m.n_nodes(); ++i) grad[i] = -(Au[i] - q * Bu[i]);
    const auto dir = solver->solve(grad);

    // positivity clamp on the step
    double t_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.n_nodes(); ++i)
      if (!m.boundary_node_flags[i] && dir[i] < 0.0)
        t_max = std::min(t_max, -u.coeff[i] / dir[i]);
    double t = std::min(1.0, 0.9 * t_max);

    double q_new = q;
    FeFunction cand = u;
    bool accepted = false;
    for (int bt = 0; bt < 40 && !accepted; ++bt, t *= 0.5) {
      cand = u;
      for (int i = 0; i < m.n_nodes(); ++i) cand.coeff[i] += t * dir[i];
      normalize(cand);
      q_new = rayleigh_quotient(cand, p);
      accepted = q_new < q;
    }
    if (!accepted) break;
    u = std::move(cand);
    const bool done = std::abs(q - q_new) <= tol * q;
    q = q_new;
    if (done) {
      ++iters;
      break;
    }
  }

  for (int i = 0; i < m.n_nodes(); ++i)
    if (!m.boundary_node_flags[i] && !(u.coeff[i] > 0.0))
      throw std::runtime_error(
          "first_eigenpair: converged iterate lost interior positivity (higher mode)");

  Eigenpair out;
  out.p = p;
  out.lambda1 = q;
  out.phi1 = std::move(u);
  out.iterations = iters;
  const auto Au = apply_Ap(m, out.phi1, p, 0.0);
  const auto Bu = apply_Bp(m, out.phi1, p);
  double res = 0.0;
  for (int i = 0; i < m.n_nodes(); ++i)
    if (!m.boundary_node_flags[i]) res += std::pow(Au[i] - q * Bu[i], 2);
  out.residual = std::sqrt(res);
  return out;
}

}  // namespace plap
