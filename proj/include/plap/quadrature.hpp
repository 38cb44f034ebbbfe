#pragma once

#include <cmath>
#include <stdexcept>

#include "plap/mesh.hpp"

namespace plap {

/// Integrate f(e, x) over element e with the mesh quadrature rule.
template <class Fn>
double integrate_element(const Mesh& m, int e, Fn&& f) {
  const auto& q = m.element_quadrature;
  const double meas = m.measure(e);
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    s += q.weight[k] * f(e, m.point(e, q.bary[k]));
  return s * meas;
}

namespace detail {

// 4-point Gauss-Legendre on [0,1]
inline constexpr double gl4_x[4] = {0.06943184420297371, 0.33000947820757187,
                                    0.66999052179242813, 0.93056815579702629};
inline constexpr double gl4_w[4] = {0.17392742256872693, 0.32607257743127307,
                                    0.32607257743127307, 0.17392742256872693};

inline double tri_area(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const Vec2 u = p1 - p0, v = p2 - p0;
  return 0.5 * std::abs(u[0] * v[1] - u[1] * v[0]);
}

// All layer accumulators below ADD their deepest-layer contribution into
// *last_layer (callers zero-initialize), so split elements aggregate cleanly.

template <class Fn>
double graded_segment(const Mesh& m, int e, double x_sing, double x_far, Fn&& f,
                      int depth, double* last_layer) {
  // geometric layers toward the singular endpoint, ratio 1/2
  const double len = x_far - x_sing;  // signed
  double total = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const double hi = std::ldexp(1.0, -k);
    const double lo = (k == depth) ? 0.0 : std::ldexp(1.0, -(k + 1));
    double layer = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double t = lo + (hi - lo) * gl4_x[i];
      const Vec2 x = {x_sing + len * t, 0.0};
      layer += gl4_w[i] * (hi - lo) * std::abs(len) * f(e, x);
    }
    total += layer;
    if (k == depth - 1 && last_layer) *last_layer += layer;
  }
  return total;
}

// Duffy-type map grading toward the edge [B0, B1]; C is the off-edge vertex.
template <class Fn>
double duffy_edge(int e, const Vec2& B0, const Vec2& B1, const Vec2& C, Fn&& f,
                  int depth, double* last_layer) {
  const double area = tri_area(B0, B1, C);
  double total = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const double bhi = std::ldexp(1.0, -k);
    const double blo = (k == depth) ? 0.0 : std::ldexp(1.0, -(k + 1));
    double layer = 0.0;
    for (int ib = 0; ib < 4; ++ib) {
      const double b = blo + (bhi - blo) * gl4_x[ib];
      for (int ia = 0; ia < 4; ++ia) {
        const double a = gl4_x[ia];
        const Vec2 x = {(1.0 - b) * ((1.0 - a) * B0[0] + a * B1[0]) + b * C[0],
                        (1.0 - b) * ((1.0 - a) * B0[1] + a * B1[1]) + b * C[1]};
        layer += gl4_w[ia] * gl4_w[ib] * (bhi - blo) * 2.0 * area * (1.0 - b) * f(e, x);
      }
    }
    total += layer;
    if (k == depth - 1 && last_layer) *last_layer += layer;
  }
  return total;
}

// Duffy-type map grading toward the single vertex V0.
template <class Fn>
double duffy_vertex(int e, const Vec2& V0, const Vec2& P1, const Vec2& P2, Fn&& f,
                    int depth, double* last_layer) {
  const double area = tri_area(V0, P1, P2);
  const Vec2 E1 = P1 - V0, E2 = P2 - V0;
  double total = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const double bhi = std::ldexp(1.0, -k);
    const double blo = (k == depth) ? 0.0 : std::ldexp(1.0, -(k + 1));
    double layer = 0.0;
    for (int ib = 0; ib < 4; ++ib) {
      const double b = blo + (bhi - blo) * gl4_x[ib];
      for (int ia = 0; ia < 4; ++ia) {
        const double a = gl4_x[ia];
        const Vec2 x = {V0[0] + b * ((1.0 - a) * E1[0] + a * E2[0]),
                        V0[1] + b * ((1.0 - a) * E1[1] + a * E2[1])};
        layer += gl4_w[ia] * gl4_w[ib] * (bhi - blo) * 2.0 * area * b * f(e, x);
      }
    }
    total += layer;
    if (k == depth - 1 && last_layer) *last_layer += layer;
  }
  return total;
}

template <class Fn>
double graded_triangle(const Mesh& m, int e, Fn&& f, int depth, double* last_layer) {
  const auto& s = m.simplices[e];
  int bnd[3], nb = 0;
  for (int v = 0; v < 3; ++v)
    if (m.boundary_node_flags[s[v]]) bnd[nb++] = v;

  if (nb == 1) {
    const int i = bnd[0];
    return duffy_vertex(e, m.nodes[s[i]], m.nodes[s[(i + 1) % 3]],
                        m.nodes[s[(i + 2) % 3]], f, depth, last_layer);
  }
  if (nb == 2) {
    return duffy_edge(e, m.nodes[s[bnd[0]]], m.nodes[s[bnd[1]]],
                      m.nodes[s[3 - bnd[0] - bnd[1]]], f, depth, last_layer);
  }
  // nb == 3: a corner element whose two legs lie on the boundary. The interior
  // (longest) edge is split at its midpoint; each half is graded toward the
  // boundary leg through the shared corner vertex.
  int corner = 0;
  double longest = -1.0;
  for (int v = 0; v < 3; ++v) {
    const double len = norm2(m.nodes[s[(v + 1) % 3]] - m.nodes[s[(v + 2) % 3]]);
    if (len > longest) {
      longest = len;
      corner = v;
    }
  }
  const Vec2 K = m.nodes[s[corner]];
  const Vec2 A = m.nodes[s[(corner + 1) % 3]], B = m.nodes[s[(corner + 2) % 3]];
  const Vec2 M = {0.5 * (A[0] + B[0]), 0.5 * (A[1] + B[1])};
  return duffy_edge(e, A, K, M, f, depth, last_layer) +
         duffy_edge(e, K, B, M, f, depth, last_layer);
}

}  // namespace detail

/// Integrate f(e, x) over a boundary-touching element with geometric grading
/// (ratio 1/2) toward the boundary. `last_layer` receives the contribution of
/// the deepest geometric layer, which drives the convergence diagnostics.
template <class Fn>
double integrate_element_graded(const Mesh& m, int e, Fn&& f, int depth = 20,
                                double* last_layer = nullptr) {
  if (!m.touches_boundary(e)) return integrate_element(m, e, f);
  if (m.dim == 1) {
    const auto& s = m.simplices[e];
    const bool sing_left = m.boundary_node_flags[s[0]];
    const double x0 = m.nodes[s[0]][0], x1 = m.nodes[s[1]][0];
    return sing_left ? detail::graded_segment(m, e, x0, x1, f, depth, last_layer)
                     : detail::graded_segment(m, e, x1, x0, f, depth, last_layer);
  }
  return detail::graded_triangle(m, e, f, depth, last_layer);
}

/// Integrate f(e, x) over the whole mesh, graded on boundary elements.
template <class Fn>
double integrate_graded(const Mesh& m, Fn&& f, int depth = 20,
                        double* last_layer_sum = nullptr) {
  double total = 0.0, layers = 0.0;
  for (int e = 0; e < m.n_elems(); ++e) {
    if (m.touches_boundary(e)) {
      double ll = 0.0;
      total += integrate_element_graded(m, e, f, depth, &ll);
      layers += ll;
    } else {
      total += integrate_element(m, e, f);
    }
  }
  if (last_layer_sum) *last_layer_sum = layers;
  return total;
}

template <class Fn>
double integrate(const Mesh& m, Fn&& f) {
  double total = 0.0;
  for (int e = 0; e < m.n_elems(); ++e) total += integrate_element(m, e, f);
  return total;
}

}  // namespace plap
