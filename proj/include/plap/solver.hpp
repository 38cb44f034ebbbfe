#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plap/eigen.hpp"
#include "plap/operators.hpp"
#include "plap/reaction.hpp"

namespace plap {

// ---------------------------------------------------------------------------
// Sub-solution
// ---------------------------------------------------------------------------

struct Subsolution {
  FeFunction ubar;   // = k * phi1 nodewise
  double k = 0.0;
  double delta = 0.0;
};

/// Load vector of the plain (untruncated) reaction at ubar: int f(ubar) psi_i.
inline std::vector<double> reaction_load_at(const Mesh& m, const Reaction& r,
                                            const FeFunction& w) {
  std::vector<double> out(m.n_nodes(), 0.0);
  const auto& q = m.element_quadrature;
  for (int e = 0; e < m.n_elems(); ++e) {
    const double meas = m.measure(e);
    const auto& s = m.simplices[e];
    for (std::size_t kq = 0; kq < q.size(); ++kq) {
      double wv = 0.0;
      for (int v = 0; v < m.nv(); ++v) wv += q.bary[kq][v] * w.coeff[s[v]];
      if (!(wv > 0.0)) continue;  // f undefined at 0; measure-zero boundary set
      const double fv = eval_f(r, wv);
      for (int v = 0; v < m.nv(); ++v)
        out[s[v]] += q.weight[kq] * fv * q.bary[kq][v] * meas;
    }
  }
  return out;
}

/// Builds ubar = k phi1 with ||ubar||_inf < delta/2 (largest dyadic k) and a
/// verified discrete sub-solution inequality at every interior node; k is
/// halved (up to 22 times) while the inequality fails.
inline Subsolution build_subsolution(const Mesh& m, const Eigenpair& eig,
                                     const Reaction& r, const HypothesisReport& rep) {
  if (!rep.holds_iii)
    throw std::invalid_argument("build_subsolution: no lower-bound witness (delta)");
  const double delta = rep.delta_w;
  const double phimax = norm_Linf(eig.phi1);
  double k = std::ldexp(1.0, static_cast<int>(
                                 std::floor(std::log2(0.999 * delta / (2.0 * phimax)))));
  for (int attempt = 0; attempt < 22; ++attempt, k *= 0.5) {
    Subsolution sub;
    sub.k = k;
    sub.delta = delta;
    sub.ubar = eig.phi1;
    for (double& c : sub.ubar.coeff) c *= k;

    const auto a = apply_Ap(m, sub.ubar, eig.p, 0.0);
    const auto load = reaction_load_at(m, r, sub.ubar);
    bool ok = true;
    for (int i = 0; i < m.n_nodes() && ok; ++i)
      if (!m.boundary_node_flags[i] && a[i] > load[i] + 1e-8) ok = false;
    if (ok) return sub;
  }
  throw std::runtime_error(
      "build_subsolution: no verified sub-solution down to the k floor");
}

// ---------------------------------------------------------------------------
// Regularized energy
// ---------------------------------------------------------------------------

/// Evaluates J_eps(u) = (1/p)||u||_{1,p}^p - int G_eps(., u) and the load
/// vector of g_eps(., u). The primitive G_eps is tabulated lazily per
/// quadrature point on a grid of step eps/4 (the integrand is smooth on the
/// eps scale), so repeated energy evaluations amortize the mollification cost.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const Mesh& m, const Reaction& r, const FeFunction& ubar, double eps)
      : m_(m), r_(r), eps_(eps), de_(eps / 4.0) {
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("EnergyEvaluator: eps must lie in (0,1)");
    const auto& q = m.element_quadrature;
    qp_.reserve(m.n_elems() * q.size());
    for (int e = 0; e < m.n_elems(); ++e) {
      const double meas = m.measure(e);
      const auto& s = m.simplices[e];
      for (std::size_t kq = 0; kq < q.size(); ++kq) {
        QPoint p;
        p.e = e;
        p.kq = static_cast<int>(kq);
        p.w = q.weight[kq] * meas;
        p.ub = 0.0;
        for (int v = 0; v < m.nv(); ++v) p.ub += q.bary[kq][v] * ubar.coeff[s[v]];
        if (!(p.ub > 0.0))
          throw std::invalid_argument("EnergyEvaluator: sub-solution not positive");
        qp_.push_back(std::move(p));
      }
    }
  }

  double eps() const { return eps_; }

  double value_at(const FeFunction& u, double p) {
    const auto& q = m_.element_quadrature;
    double gint = 0.0;
    for (auto& pt : qp_) {
      const auto& s = m_.simplices[pt.e];
      double uv = 0.0;
      for (int v = 0; v < m_.nv(); ++v) uv += q.bary[pt.kq][v] * u.coeff[s[v]];
      gint += pt.w * primitive(pt, uv);
    }
    return std::pow(norm_W1p(u, p), p) / p - gint;
  }

  std::vector<double> load_vector(const FeFunction& u) {
    const auto& q = m_.element_quadrature;
    std::vector<double> out(m_.n_nodes(), 0.0);
    for (const auto& pt : qp_) {
      const auto& s = m_.simplices[pt.e];
      double uv = 0.0;
      for (int v = 0; v < m_.nv(); ++v) uv += q.bary[pt.kq][v] * u.coeff[s[v]];
      const double g = mollify(r_, pt.ub, uv, eps_);
      for (int v = 0; v < m_.nv(); ++v)
        out[s[v]] += pt.w * g * q.bary[pt.kq][v];
    }
    return out;
  }

 private:
  struct QPoint {
    int e = 0, kq = 0;
    double w = 0.0, ub = 0.0;
    std::vector<double> Gpos, Gneg;  // G at +/- j*de, lazily extended
  };

  double cell(double ub, double a, double b) const {
    double v = 0.0;
    for (int k = 0; k < 5; ++k)
      v += detail::gl5_w[k] * (b - a) *
           mollify(r_, ub, a + (b - a) * detail::gl5_x[k], eps_);
    return v;
  }

  double primitive(QPoint& pt, double s) {
    if (s == 0.0) return 0.0;
    auto& tab = s > 0.0 ? pt.Gpos : pt.Gneg;
    const double sign = s > 0.0 ? 1.0 : -1.0;
    const double sa = std::abs(s);
    const auto j = static_cast<std::size_t>(std::floor(sa / de_));
    if (tab.empty()) tab.push_back(0.0);
    while (tab.size() <= j) {
      const double a = sign * de_ * static_cast<double>(tab.size() - 1);
      tab.push_back(tab.back() + cell(pt.ub, a, a + sign * de_));
    }
    return tab[j] + cell(pt.ub, sign * de_ * static_cast<double>(j), s);
  }

  const Mesh& m_;
  const Reaction& r_;
  double eps_, de_;
  std::vector<QPoint> qp_;
};

/// One-shot evaluation of J_eps(u) for the given sub-solution.
inline double energy(const Mesh& m, const Reaction& r, const Subsolution& sub,
                     const FeFunction& u, double p, double eps) {
  EnergyEvaluator ev(m, r, sub.ubar, eps);
  return ev.value_at(u, p);
}

// ---------------------------------------------------------------------------
// Minimization and continuation
// ---------------------------------------------------------------------------

struct EnergyTraceEntry {
  int iteration = 0;
  double J = 0.0;
  double step = 0.0;
  double dual_residual = 0.0;
};

struct LineSearchStagnation : std::runtime_error {
  std::vector<EnergyTraceEntry> trace;
  explicit LineSearchStagnation(std::vector<EnergyTraceEntry> t)
      : std::runtime_error("minimize_Jeps: line search stagnated"),
        trace(std::move(t)) {}
};

/// Damped descent on J_eps: directions from a lagged-diffusivity linearization
/// of the p-Laplacian, Armijo backtracking on the energy, termination on the
/// dual norm of the discrete Euler-Lagrange residual.
inline FeFunction minimize_Jeps(const Mesh& m, const Reaction& r, const Subsolution& sub,
                                double p, double eps, double eta, FeFunction init,
                                double tol, std::vector<EnergyTraceEntry>* trace = nullptr,
                                EnergyEvaluator* shared_ev = nullptr) {
  detail::check_p_eta(p, eta);
  if (p != 2.0 && !(eta > 0.0))
    throw std::invalid_argument("minimize_Jeps: eta must be > 0 for p != 2");
  if (!init.is_zero_trace())
    throw std::invalid_argument("minimize_Jeps: init must vanish on the boundary");

  std::unique_ptr<EnergyEvaluator> own_ev;
  if (!shared_ev) {
    own_ev = std::make_unique<EnergyEvaluator>(m, r, sub.ubar, eps);
    shared_ev = own_ev.get();
  }
  EnergyEvaluator& ev = *shared_ev;

  FeFunction u = std::move(init);
  std::vector<EnergyTraceEntry> local_trace;
  double J = ev.value_at(u, p);
  std::unique_ptr<InteriorSolver> solver;

  const int max_iters = 500;
  for (int it = 0; it < max_iters; ++it) {
    if (!solver || p != 2.0)
      solver = std::make_unique<InteriorSolver>(m, weighted_stiffness(m, u, p, eta));
    const auto Au = apply_Ap(m, u, p, 0.0);
    const auto load = ev.load_vector(u);
    std::vector<double> neg_res(m.n_nodes(), 0.0);
    for (int i = 0; i < m.n_nodes(); ++i)
      if (!m.boundary_node_flags[i]) neg_res[i] = load[i] - Au[i];
    const auto dir = solver->solve(neg_res);
    double dd = 0.0, dn2 = 0.0;
    for (int i = 0; i < m.n_nodes(); ++i) {
      dd -= neg_res[i] * dir[i];  // directional derivative of J along dir
      dn2 += neg_res[i] * dir[i];
    }
    const double dual_norm = std::sqrt(std::max(0.0, dn2));
    local_trace.push_back({it, J, 0.0, dual_norm});
    if (dual_norm < tol) break;
    if (!(dd < 0.0)) break;  // at numerical stationarity

    double t = 1.0, J_new = J;
    FeFunction cand = u;
    bool accepted = false;
    for (; t > 1e-14; t *= 0.5) {
      cand = u;
      for (int i = 0; i < m.n_nodes(); ++i) cand.coeff[i] += t * dir[i];
      J_new = ev.value_at(cand, p);
      if (J_new <= J + 1e-4 * t * dd) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (trace) *trace = local_trace;
      throw LineSearchStagnation(std::move(local_trace));
    }
    if (J_new == J) break;  // predicted decrease below the resolution of J
    if (J_new > J)
      throw std::runtime_error("minimize_Jeps: accepted step did not decrease J");
    local_trace.back().step = t;
    u = std::move(cand);
    J = J_new;
  }
  if (trace) *trace = local_trace;
  return u;
}

/// L2 Riesz representative of the discrete operator action: solves
/// (lumped mass matrix) v = apply_Ap(u) at interior nodes. Row-sum lumping is
/// used because the consistent interior mass solve rings at boundary-adjacent
/// nodes (the represented field does not vanish on the boundary). Boundary
/// values are extrapolated from adjacent interior nodes for reporting only.
inline FeFunction residual_v(const Mesh& m, const FeFunction& u, double p,
                             double eta = 0.0) {
  if (!u.is_zero_trace())
    throw std::invalid_argument("residual_v: u must vanish on the boundary");
  const auto a = apply_Ap(m, u, p, eta);
  std::vector<double> lumped(m.n_nodes(), 0.0);
  for (int e = 0; e < m.n_elems(); ++e)
    for (int vv = 0; vv < m.nv(); ++vv)
      lumped[m.simplices[e][vv]] += m.measure(e) / m.nv();
  FeFunction v(m);
  for (int i = 0; i < m.n_nodes(); ++i)
    if (!m.boundary_node_flags[i]) v.coeff[i] = a[i] / lumped[i];
  // constant extrapolation into boundary nodes
  std::vector<double> acc(m.n_nodes(), 0.0);
  std::vector<int> cnt(m.n_nodes(), 0);
  for (int e = 0; e < m.n_elems(); ++e) {
    const auto& s = m.simplices[e];
    for (int i = 0; i < m.nv(); ++i)
      for (int j = 0; j < m.nv(); ++j)
        if (m.boundary_node_flags[s[i]] && !m.boundary_node_flags[s[j]]) {
          acc[s[i]] += v.coeff[s[j]];
          ++cnt[s[i]];
        }
  }
  for (int i = 0; i < m.n_nodes(); ++i)
    if (m.boundary_node_flags[i] && cnt[i] > 0) v.coeff[i] = acc[i] / cnt[i];
  return v;
}

struct Schedule {
  int n_start = 2;
  int n_end = 64;
  bool geometric = true;
};

struct ContinuationResult {
  std::vector<double> epsilons;
  std::vector<FeFunction> solutions;
  std::vector<double> w1p_norms;
  std::vector<double> cauchy_increments;  // ||u_n - u_prev||_{1,p}, per step > 0
  std::vector<std::vector<EnergyTraceEntry>> traces;
  FeFunction limit;
  FeFunction residual_field;
  double L = 0.0;  // max w1p norm over the schedule
};

/// Solves the regularized problems along eps = 1/n with warm starts (first
/// start: ubar itself) and eta tied to eps; stops early once the W^{1,p}
/// increments drop below tol_cauchy (relative).
inline ContinuationResult continuation(const Mesh& m, const Reaction& r,
                                       const Subsolution& sub, double p,
                                       const Schedule& sched, double tol_inner = 1e-8,
                                       double tol_cauchy = 1e-5) {
  if (sched.n_start < 2 || sched.n_end < sched.n_start)
    throw std::invalid_argument("continuation: schedule requires 2 <= n_start <= n_end");
  ContinuationResult out;
  FeFunction u = sub.ubar;
  for (int n = sched.n_start; n <= sched.n_end;
       n = sched.geometric ? 2 * n : n + 1) {
    const double eps = 1.0 / n;
    std::vector<EnergyTraceEntry> trace;
    FeFunction u_new =
        minimize_Jeps(m, r, sub, p, eps, /*eta=*/eps, u, tol_inner, &trace);
    out.epsilons.push_back(eps);
    out.w1p_norms.push_back(norm_W1p(u_new, p));
    out.traces.push_back(std::move(trace));
    if (!out.solutions.empty()) {
      FeFunction diff = u_new;
      for (int i = 0; i < m.n_nodes(); ++i) diff.coeff[i] -= u.coeff[i];
      out.cauchy_increments.push_back(norm_W1p(diff, p));
    }
    out.solutions.push_back(u_new);
    u = std::move(u_new);
    if (!out.cauchy_increments.empty() &&
        out.cauchy_increments.back() < tol_cauchy * std::max(1.0, out.w1p_norms.back()))
      break;
  }
  out.limit = u;
  out.residual_field = residual_v(m, out.limit, p, 0.0);
  out.L = 0.0;
  for (double n : out.w1p_norms) out.L = std::max(out.L, n);
  return out;
}

}  // namespace plap
