#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "plap/quadrature.hpp"
#include "plap/reaction.hpp"
#include "plap/solver.hpp"

namespace plap {

// ---------------------------------------------------------------------------
// Differential-inclusion sandwich
// ---------------------------------------------------------------------------

struct InclusionResult {
  double fraction = 0.0;      // share of quadrature points inside the sandwich
  double worst = 0.0;         // largest violation distance
  int n_points = 0;
};

namespace detail {

/// Range [inf, sup] of the essential values of f over (a, b): one-sided
/// envelope limits at the endpoints and at every breakpoint inside, plus a
/// small interior sample of each overlapped analytic piece.
inline std::pair<double, double> envelope_range(const Reaction& r, double a, double b) {
  a = std::max(a, 1e-12);
  b = std::max(b, a);
  auto [lo, hi] = eval_envelopes(r, a);
  const auto acc = [&](double s) {
    const auto [l, h] = eval_envelopes(r, s);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  };
  acc(b);
  const auto first = std::upper_bound(r.breakpoints.begin(), r.breakpoints.end(), a);
  for (auto it = first; it != r.breakpoints.end() && *it < b; ++it) acc(*it);
  for (int k = 1; k < 8; ++k) acc(a + (b - a) * k / 8.0);
  return {lo, hi};
}

}  // namespace detail

/// Counts interior quadrature points with f_lower(u) - tol - slack <= v <=
/// f_upper(u) + tol + slack, slack = slack_coeff * (element diameter).
/// A positive `window` widens the envelopes to the essential range of f over
/// (u - window, u + window): the certificate a run truncated at mollification
/// width eps actually supports is the windowed sandwich with window = eps,
/// which tightens to the pointwise envelopes as eps -> 0.
inline InclusionResult check_inclusion(const Mesh& m, const FeFunction& u,
                                       const FeFunction& v, const Reaction& r,
                                       double tol, double slack_coeff = 1.0,
                                       double window = 0.0) {
  for (int i = 0; i < m.n_nodes(); ++i)
    if (!m.boundary_node_flags[i] && !(u.coeff[i] > 0.0))
      throw std::invalid_argument("check_inclusion: u must be positive at interior nodes");
  InclusionResult out;
  int good = 0;
  const auto& q = m.element_quadrature;
  for (int e = 0; e < m.n_elems(); ++e) {
    const double slack = slack_coeff * m.elem_diameter(e);
    const auto& s = m.simplices[e];
    for (std::size_t k = 0; k < q.size(); ++k) {
      double uq = 0.0, vq = 0.0;
      for (int vv = 0; vv < m.nv(); ++vv) {
        uq += q.bary[k][vv] * u.coeff[s[vv]];
        vq += q.bary[k][vv] * v.coeff[s[vv]];
      }
      ++out.n_points;
      if (!(uq > 0.0)) {
        out.worst = std::max(out.worst, 1.0);
        continue;
      }
      const auto [flo, fhi] =
          window > 0.0 ? detail::envelope_range(r, uq - window, uq + window)
                       : eval_envelopes(r, uq);
      const double viol =
          std::max(flo - tol - slack - vq, vq - fhi - tol - slack);
      if (viol <= 0.0)
        ++good;
      else
        out.worst = std::max(out.worst, viol);
    }
  }
  out.fraction = out.n_points ? static_cast<double>(good) / out.n_points : 1.0;
  return out;
}

/// Minimum nodal margin of u over ubar.
inline double check_subsolution(const FeFunction& u, const FeFunction& ubar) {
  double margin = kInf;
  for (std::size_t i = 0; i < u.coeff.size(); ++i)
    margin = std::min(margin, u.coeff[i] - ubar.coeff[i]);
  return margin;
}

// ---------------------------------------------------------------------------
// Boundary growth u >= l d
// ---------------------------------------------------------------------------

struct BoundaryGrowth {
  double l_hat = 0.0;      // min of u/d over the near-boundary band
  double ratio_sup = 0.0;  // max of u/d over all interior nodes
};

inline BoundaryGrowth check_boundary_growth(const Mesh& m, const FeFunction& u,
                                            double band_frac = 0.1) {
  const double band = band_frac * m.diameter();
  BoundaryGrowth out;
  out.l_hat = kInf;
  for (int i = 0; i < m.n_nodes(); ++i) {
    if (m.boundary_node_flags[i]) continue;
    const double ratio = u.coeff[i] / m.nodal_distance[i];
    out.ratio_sup = std::max(out.ratio_sup, ratio);
    if (m.nodal_distance[i] < band) out.l_hat = std::min(out.l_hat, ratio);
  }
  if (!std::isfinite(out.l_hat)) out.l_hat = out.ratio_sup;  // no node in the band
  return out;
}

// ---------------------------------------------------------------------------
// Hardy-type inequality int d^{-gamma} |u| <= K ||u||_{1,p}
// ---------------------------------------------------------------------------

/// Ratio (graded integral of d^{-gamma}|u|) / ||u||_{1,p} for one function.
inline double hardy_ratio(const Mesh& m, const FeFunction& u, double gamma, double p) {
  const double num = integrate_graded(m, [&](int e, const Vec2& x) {
    return std::pow(std::max(m.distance_at(e, x), 1e-300), -gamma) *
           std::abs(u.eval(e, x));
  });
  return num / norm_W1p(u, p);
}

/// Empirical lower estimate of the Hardy constant: max ratio over random
/// zero-trace functions plus the distance interpolant.
inline double check_hardy(const Mesh& m, double p, double gamma, int n_samples,
                          unsigned seed = 31) {
  if (!(gamma > 0.0 && gamma < 1.0 && p > 1.0))
    throw std::invalid_argument("check_hardy: requires 0 < gamma < 1 < p");
  FeFunction dint(m);
  dint.coeff = m.nodal_distance;
  double K = hardy_ratio(m, dint, gamma, p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < n_samples; ++it) {
    FeFunction u(m);
    bool nonzero = false;
    for (int i = 0; i < m.n_nodes(); ++i)
      if (!m.boundary_node_flags[i]) {
        u.coeff[i] = uni(rng);
        nonzero = true;
      }
    if (!nonzero) continue;
    K = std::max(K, hardy_ratio(m, u, gamma, p));
  }
  return K;
}

// ---------------------------------------------------------------------------
// Strong-solution residual and locality diagnostic
// ---------------------------------------------------------------------------

struct StrongSolutionReport {
  double far_q50 = 0.0, far_q90 = 0.0, far_q99 = 0.0;  // |v - f(u)| off D_f
  double near_fraction = 0.0;   // share of points with u near a jump level
  double plateau_max_v = 0.0;   // max |v| where additionally |grad u| < band
  int plateau_points = 0;
  bool vacuous = true;          // no plateau point found
};

inline StrongSolutionReport check_strong_solution(const Mesh& m, const FeFunction& u,
                                                  const FeFunction& v, const Reaction& r,
                                                  double band) {
  for (int i = 0; i < m.n_nodes(); ++i)
    if (!m.boundary_node_flags[i] && !(u.coeff[i] > 0.0))
      throw std::invalid_argument(
          "check_strong_solution: u must be positive at interior nodes");
  StrongSolutionReport out;
  std::vector<double> far;
  int near = 0, total = 0;
  const auto& q = m.element_quadrature;
  // Flat-region detection is eroded by one element layer: the nodal residual
  // field bleeds values from adjacent steep elements (where the represented
  // field may legitimately jump) into the first flat element.
  std::vector<double> gnorms(m.n_elems());
  std::vector<double> node_gmax(m.n_nodes(), 0.0);
  for (int e = 0; e < m.n_elems(); ++e) {
    gnorms[e] = norm2(u.grad(e));
    for (int vv = 0; vv < m.nv(); ++vv) {
      double& ng = node_gmax[m.simplices[e][vv]];
      ng = std::max(ng, gnorms[e]);
    }
  }
  for (int e = 0; e < m.n_elems(); ++e) {
    const double gnorm = gnorms[e];
    bool flat = gnorm < band;
    for (int vv = 0; flat && vv < m.nv(); ++vv)
      flat = node_gmax[m.simplices[e][vv]] < band;
    const auto& s = m.simplices[e];
    for (std::size_t k = 0; k < q.size(); ++k) {
      double uq = 0.0, vq = 0.0;
      for (int vv = 0; vv < m.nv(); ++vv) {
        uq += q.bary[k][vv] * u.coeff[s[vv]];
        vq += q.bary[k][vv] * v.coeff[s[vv]];
      }
      ++total;
      double dist = kInf;
      for (double b : r.breakpoints) dist = std::min(dist, std::abs(uq - b));
      if (dist < band) {
        ++near;
        if (flat) {
          out.vacuous = false;
          ++out.plateau_points;
          out.plateau_max_v = std::max(out.plateau_max_v, std::abs(vq));
        }
      } else if (uq > 0.0) {
        far.push_back(std::abs(vq - eval_f(r, uq)));
      }
    }
  }
  std::sort(far.begin(), far.end());
  auto quant = [&](double a) {
    if (far.empty()) return 0.0;
    return far[std::min(far.size() - 1,
                        static_cast<std::size_t>(a * (far.size() - 1)))];
  };
  out.far_q50 = quant(0.50);
  out.far_q90 = quant(0.90);
  out.far_q99 = quant(0.99);
  out.near_fraction = total ? static_cast<double>(near) / total : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Growth-envelope sampling and the boundary-weighted bound on v
// ---------------------------------------------------------------------------

/// Samples (x_q, s, eps) triples and asserts the growth bound
/// g_eps(x, s) <= c1 ubar(x)^{-gamma} + c2 |s|^{p-1} + c3; throws on violation.
inline bool check_growth_envelope(const Mesh& m, const Reaction& r,
                                  const Subsolution& sub, double p, double lambda1,
                                  int n_samples, unsigned seed = 17) {
  const GrowthConstants gc = growth_constants(r, p, lambda1);
  if (!(gc.c2 < lambda1))
    throw std::runtime_error("check_growth_envelope: c2 must stay below lambda1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto& q = m.element_quadrature;
  const double eps_grid[3] = {0.5, 0.1, 0.01};
  for (int it = 0; it < n_samples; ++it) {
    const int e = static_cast<int>(uni(rng) * m.n_elems()) % m.n_elems();
    const int k = static_cast<int>(uni(rng) * q.size()) % static_cast<int>(q.size());
    double ub = 0.0;
    for (int vv = 0; vv < m.nv(); ++vv)
      ub += q.bary[k][vv] * sub.ubar.coeff[m.simplices[e][vv]];
    if (!(ub > 0.0)) continue;
    double s;
    if (it % 2 == 0) {
      s = -10.0 + 20.0 * uni(rng);  // linear net
    } else {
      s = std::exp(std::log(1e-4) + std::log(1e5) * uni(rng));  // log net
      if (uni(rng) < 0.5) s = -s;
    }
    const double eps = eps_grid[it % 3];
    const double lhs = mollify(r, ub, s, eps);
    const double rhs = gc.c1 * std::pow(ub, -gc.gamma) +
                       gc.c2 * std::pow(std::abs(s), p - 1.0) + gc.c3;
    if (lhs > rhs + 1e-9) throw GrowthBoundViolation(s, ub, eps);
  }
  return true;
}

/// C_hat = max over interior quadrature points of v_+ d^gamma.
inline double check_vbound(const Mesh& m, const FeFunction& u, const FeFunction& v,
                           double gamma) {
  (void)u;
  double C = 0.0;
  const auto& q = m.element_quadrature;
  for (int e = 0; e < m.n_elems(); ++e) {
    const auto& s = m.simplices[e];
    for (std::size_t k = 0; k < q.size(); ++k) {
      double vq = 0.0;
      for (int vv = 0; vv < m.nv(); ++vv) vq += q.bary[k][vv] * v.coeff[s[vv]];
      const Vec2 x = m.point(e, q.bary[k]);
      const double d = m.distance_at(e, x);
      if (vq > 0.0 && d > 0.0) C = std::max(C, vq * std::pow(d, gamma));
    }
  }
  return C;
}

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

struct VerificationReport {
  InclusionResult inclusion;            // strict pointwise envelopes
  InclusionResult inclusion_windowed;   // envelopes widened by the final eps
  double envelope_window = 0.0;
  double subsolution_margin = 0.0;
  BoundaryGrowth boundary_growth;
  double uniform_bound = 0.0;      // max ||u_eps||_{1,p}
  double hardy_constant = 0.0;
  bool dist_integrable = false;    // gamma-weight integrability flag
  double dist_integral = 0.0;
  StrongSolutionReport strong;
  double vbound_C = 0.0;
  double u_inf = 0.0;
  std::vector<std::string> skipped;
};

inline VerificationReport make_report(const Mesh& m, const Reaction& r,
                                      const Subsolution& sub,
                                      const ContinuationResult& cont, double p,
                                      double tol_inclusion = 1e-2,
                                      double locality_band = 1e-2,
                                      int hardy_samples = 50, unsigned seed = 31) {
  VerificationReport rep;
  rep.inclusion =
      check_inclusion(m, cont.limit, cont.residual_field, r, tol_inclusion);
  rep.envelope_window = cont.epsilons.empty() ? 0.0 : cont.epsilons.back();
  rep.inclusion_windowed = check_inclusion(m, cont.limit, cont.residual_field, r,
                                           tol_inclusion, 1.0, rep.envelope_window);
  rep.subsolution_margin = check_subsolution(cont.limit, sub.ubar);
  rep.boundary_growth = check_boundary_growth(m, cont.limit);
  rep.uniform_bound = cont.L;
  rep.u_inf = norm_Linf(cont.limit);
  const double gamma = r.gamma > 0.0 ? r.gamma : 0.5;
  rep.hardy_constant = check_hardy(m, p, gamma, hardy_samples, seed);
  if (std::abs(gamma - 1.0) > 1e-12) {
    const auto di = integrate_distance_power(m, gamma, 1.0);
    rep.dist_integrable = di.converged;
    rep.dist_integral = di.value;
  } else {
    rep.skipped.push_back("dist_integrability: borderline gamma");
  }
  rep.strong = check_strong_solution(m, cont.limit, cont.residual_field, r,
                                     locality_band);
  rep.vbound_C = check_vbound(m, cont.limit, cont.residual_field, gamma);
  return rep;
}

}  // namespace plap
