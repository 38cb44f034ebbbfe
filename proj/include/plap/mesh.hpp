#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline double norm2(const Vec2& a) { return std::sqrt(dot(a, a)); }

enum class DomainKind { Interval, UnitSquare, UnitDisk, Custom };

inline std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::Interval: return "interval";
    case DomainKind::UnitSquare: return "unit_square";
    case DomainKind::UnitDisk: return "unit_disk";
    default: return "custom";
  }
}

/// Quadrature rule on the reference simplex, weights normalized to sum to 1.
struct QuadRule {
  std::vector<std::array<double, 3>> bary;  // barycentric coordinates (third unused in 1d)
  std::vector<double> weight;
  std::size_t size() const { return weight.size(); }
};

inline QuadRule gauss_segment_rule() {
  // 3-point Gauss-Legendre on [0,1], exact for degree 5
  const double c = 0.5 * std::sqrt(3.0 / 5.0);
  QuadRule r;
  r.bary = {{0.5 - c, 0.5 + c, 0.0}, {0.5, 0.5, 0.0}, {0.5 + c, 0.5 - c, 0.0}};
  r.weight = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  return r;
}

inline QuadRule triangle_rule_deg4() {
  // 6-point Dunavant rule, exact for degree 4
  const double a1 = 0.445948490915965, w1 = 0.223381589678011;
  const double a2 = 0.091576213509771, w2 = 0.109951743655322;
  QuadRule r;
  auto push = [&r](double a, double w) {
    r.bary.push_back({a, a, 1.0 - 2.0 * a});
    r.bary.push_back({a, 1.0 - 2.0 * a, a});
    r.bary.push_back({1.0 - 2.0 * a, a, a});
    r.weight.insert(r.weight.end(), 3, w);
  };
  push(a1, w1);
  push(a2, w2);
  return r;
}

/// Conforming simplicial mesh with boundary flags, exact nodal distances and a
/// fixed element quadrature rule.
struct Mesh {
  int dim = 1;
  DomainKind domain = DomainKind::Custom;
  double interval_a = 0.0, interval_b = 1.0;

  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> simplices;  // third index = -1 in 1d
  std::vector<std::uint8_t> boundary_node_flags;
  std::vector<double> nodal_distance;
  QuadRule element_quadrature;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elems() const { return static_cast<int>(simplices.size()); }
  int nv() const { return dim + 1; }

  double measure(int e) const {
    const auto& s = simplices[e];
    if (dim == 1) return nodes[s[1]][0] - nodes[s[0]][0];
    const Vec2 u = nodes[s[1]] - nodes[s[0]];
    const Vec2 v = nodes[s[2]] - nodes[s[0]];
    return 0.5 * (u[0] * v[1] - u[1] * v[0]);
  }

  double elem_diameter(int e) const {
    const auto& s = simplices[e];
    if (dim == 1) return std::abs(nodes[s[1]][0] - nodes[s[0]][0]);
    double h = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) h = std::max(h, norm2(nodes[s[i]] - nodes[s[j]]));
    return h;
  }

  /// Gradient of the local nodal basis function (constant on the element).
  Vec2 grad_basis(int e, int local) const {
    const auto& s = simplices[e];
    if (dim == 1) {
      const double h = nodes[s[1]][0] - nodes[s[0]][0];
      return {local == 0 ? -1.0 / h : 1.0 / h, 0.0};
    }
    const int a = s[(local + 1) % 3], b = s[(local + 2) % 3];
    const Vec2 edge = nodes[b] - nodes[a];
    const double twoA = 2.0 * measure(e);
    // rotate edge by 90 degrees; sign fixed by the positive orientation
    return {-edge[1] / twoA, edge[0] / twoA};
  }

  /// Barycentric coordinates of a physical point relative to element e.
  std::array<double, 3> barycentric(int e, const Vec2& x) const {
    const auto& s = simplices[e];
    if (dim == 1) {
      const double t = (x[0] - nodes[s[0]][0]) / (nodes[s[1]][0] - nodes[s[0]][0]);
      return {1.0 - t, t, 0.0};
    }
    const Vec2 v0 = nodes[s[1]] - nodes[s[0]];
    const Vec2 v1 = nodes[s[2]] - nodes[s[0]];
    const Vec2 r = x - nodes[s[0]];
    const double det = v0[0] * v1[1] - v0[1] * v1[0];
    const double l1 = (r[0] * v1[1] - r[1] * v1[0]) / det;
    const double l2 = (v0[0] * r[1] - v0[1] * r[0]) / det;
    return {1.0 - l1 - l2, l1, l2};
  }

  Vec2 point(int e, const std::array<double, 3>& bary) const {
    const auto& s = simplices[e];
    Vec2 x = {0.0, 0.0};
    for (int v = 0; v < nv(); ++v) {
      x[0] += bary[v] * nodes[s[v]][0];
      x[1] += bary[v] * nodes[s[v]][1];
    }
    return x;
  }

  /// Distance to the boundary at an arbitrary point of element e. Analytic for
  /// the built-in domains, P1-interpolated otherwise.
  double distance_at(int e, const Vec2& x) const {
    switch (domain) {
      case DomainKind::Interval:
        return std::min(x[0] - interval_a, interval_b - x[0]);
      case DomainKind::UnitSquare:
        return std::min(std::min(x[0], 1.0 - x[0]), std::min(x[1], 1.0 - x[1]));
      case DomainKind::UnitDisk:
        return 1.0 - norm2(x);
      default: {
        const auto l = barycentric(e, x);
        const auto& s = simplices[e];
        double d = 0.0;
        for (int v = 0; v < nv(); ++v) d += l[v] * nodal_distance[s[v]];
        return d;
      }
    }
  }

  double diameter() const {
    if (domain == DomainKind::Interval) return interval_b - interval_a;
    if (domain == DomainKind::UnitSquare) return std::sqrt(2.0);
    if (domain == DomainKind::UnitDisk) return 2.0;
    double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
    for (const auto& n : nodes)
      for (int c = 0; c < 2; ++c) {
        lo[c] = std::min(lo[c], n[c]);
        hi[c] = std::max(hi[c], n[c]);
      }
    return std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
  }

  int boundary_vertex_count(int e) const {
    const auto& s = simplices[e];
    int c = 0;
    for (int v = 0; v < nv(); ++v)
      if (boundary_node_flags[s[v]]) ++c;
    return c;
  }

  bool touches_boundary(int e) const { return boundary_vertex_count(e) > 0; }
};

/// Continuous piecewise-linear function given by one coefficient per node.
struct FeFunction {
  const Mesh* mesh = nullptr;
  std::vector<double> coeff;

  FeFunction() = default;
  explicit FeFunction(const Mesh& m, double value = 0.0)
      : mesh(&m), coeff(m.n_nodes(), value) {}

  double eval(int e, const Vec2& x) const {
    const auto l = mesh->barycentric(e, x);
    const auto& s = mesh->simplices[e];
    double u = 0.0;
    for (int v = 0; v < mesh->nv(); ++v) u += l[v] * coeff[s[v]];
    return u;
  }

  Vec2 grad(int e) const {
    const auto& s = mesh->simplices[e];
    Vec2 g = {0.0, 0.0};
    for (int v = 0; v < mesh->nv(); ++v) {
      const Vec2 gb = mesh->grad_basis(e, v);
      g[0] += coeff[s[v]] * gb[0];
      g[1] += coeff[s[v]] * gb[1];
    }
    return g;
  }

  bool is_zero_trace(double tol = 0.0) const {
    for (int i = 0; i < mesh->n_nodes(); ++i)
      if (mesh->boundary_node_flags[i] && std::abs(coeff[i]) > tol) return false;
    return true;
  }

  void enforce_zero_trace() {
    for (int i = 0; i < mesh->n_nodes(); ++i)
      if (mesh->boundary_node_flags[i]) coeff[i] = 0.0;
  }
};

template <class Fn>
FeFunction interpolate(const Mesh& m, Fn&& f) {
  FeFunction u(m);
  for (int i = 0; i < m.n_nodes(); ++i) u.coeff[i] = f(m.nodes[i]);
  return u;
}

// ---------------------------------------------------------------------------
// Mesh construction
// ---------------------------------------------------------------------------

inline Mesh build_interval_mesh(double a, double b, int resolution) {
  if (resolution < 2) throw std::invalid_argument("build_mesh: resolution must be >= 2");
  if (!(b > a)) throw std::invalid_argument("build_mesh: interval requires a < b");
  Mesh m;
  m.dim = 1;
  m.domain = DomainKind::Interval;
  m.interval_a = a;
  m.interval_b = b;
  m.element_quadrature = gauss_segment_rule();
  const int n = resolution;
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    m.nodes.push_back({x, 0.0});
    m.boundary_node_flags.push_back(i == 0 || i == n);
    m.nodal_distance.push_back(std::min(x - a, b - x));
  }
  for (int i = 0; i < n; ++i) m.simplices.push_back({i, i + 1, -1});
  return m;
}

inline Mesh build_square_mesh(int resolution) {
  if (resolution < 2) throw std::invalid_argument("build_mesh: resolution must be >= 2");
  Mesh m;
  m.dim = 2;
  m.domain = DomainKind::UnitSquare;
  m.element_quadrature = triangle_rule_deg4();
  const int n = resolution;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double x = double(i) / n, y = double(j) / n;
      m.nodes.push_back({x, y});
      m.boundary_node_flags.push_back(i == 0 || i == n || j == 0 || j == n);
      m.nodal_distance.push_back(std::min(std::min(x, 1.0 - x), std::min(y, 1.0 - y)));
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.simplices.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.simplices.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

inline Mesh build_disk_mesh(int resolution) {
  if (resolution < 2) throw std::invalid_argument("build_mesh: resolution must be >= 2");
  Mesh m;
  m.dim = 2;
  m.domain = DomainKind::UnitDisk;
  m.element_quadrature = triangle_rule_deg4();
  const int n = resolution;
  std::vector<std::vector<int>> ring(n + 1);
  m.nodes.push_back({0.0, 0.0});
  m.boundary_node_flags.push_back(0);
  m.nodal_distance.push_back(1.0);
  ring[0] = {0};
  for (int k = 1; k <= n; ++k) {
    const double r = double(k) / n;
    const int nk = 6 * k;
    for (int j = 0; j < nk; ++j) {
      const double th = 2.0 * M_PI * j / nk;
      m.nodes.push_back({r * std::cos(th), r * std::sin(th)});
      m.boundary_node_flags.push_back(k == n);
      m.nodal_distance.push_back(1.0 - r);
      ring[k].push_back(static_cast<int>(m.nodes.size()) - 1);
    }
  }
  auto add_tri = [&m](int a, int b, int c) {
    std::array<int, 3> t = {a, b, c};
    // enforce positive orientation
    const Vec2 u = m.nodes[b] - m.nodes[a];
    const Vec2 v = m.nodes[c] - m.nodes[a];
    if (u[0] * v[1] - u[1] * v[0] < 0.0) std::swap(t[1], t[2]);
    m.simplices.push_back(t);
  };
  // center fan
  for (int j = 0; j < 6; ++j) add_tri(0, ring[1][j], ring[1][(j + 1) % 6]);
  // stitch consecutive rings by merging the two angular sequences
  for (int k = 2; k <= n; ++k) {
    const int n1 = 6 * (k - 1), n2 = 6 * k;
    int j1 = 0, j2 = 0;
    auto ang = [](int j, int cnt) { return 2.0 * M_PI * j / cnt; };
    while (j1 < n1 || j2 < n2) {
      const double next1 = j1 < n1 ? ang(j1 + 1, n1) : 1e9;
      const double next2 = j2 < n2 ? ang(j2 + 1, n2) : 1e9;
      if (next2 <= next1) {
        add_tri(ring[k - 1][j1 % n1], ring[k][j2 % n2], ring[k][(j2 + 1) % n2]);
        ++j2;
      } else {
        add_tri(ring[k - 1][j1 % n1], ring[k][j2 % n2], ring[k - 1][(j1 + 1) % n1]);
        ++j1;
      }
    }
  }
  return m;
}

inline Mesh build_mesh(const std::string& domain, int resolution, double a = 0.0,
                       double b = 1.0) {
  if (domain == "interval") return build_interval_mesh(a, b, resolution);
  if (domain == "unit_square") return build_square_mesh(resolution);
  if (domain == "unit_disk") return build_disk_mesh(resolution);
  throw std::invalid_argument("build_mesh: unknown domain '" + domain + "'");
}

// ---------------------------------------------------------------------------
// Plain-text mesh file: "plapmesh v1 <dim> <n_nodes> <n_elems>", node lines
// with coordinates followed by the boundary distance (0 marks a boundary
// node), then element lines of 0-based node indices.
// ---------------------------------------------------------------------------

inline void write_mesh(const Mesh& m, std::ostream& os) {
  os.precision(17);
  os << "plapmesh v1 " << m.dim << ' ' << m.n_nodes() << ' ' << m.n_elems() << '\n';
  for (int i = 0; i < m.n_nodes(); ++i) {
    os << m.nodes[i][0];
    if (m.dim == 2) os << ' ' << m.nodes[i][1];
    os << ' ' << m.nodal_distance[i] << '\n';
  }
  for (const auto& s : m.simplices) {
    os << s[0] << ' ' << s[1];
    if (m.dim == 2) os << ' ' << s[2];
    os << '\n';
  }
}

inline void write_mesh(const Mesh& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_mesh: cannot open " + path);
  write_mesh(m, os);
}

inline Mesh read_mesh(std::istream& is) {
  std::string magic, version;
  int dim = 0, nn = 0, ne = 0;
  is >> magic >> version >> dim >> nn >> ne;
  if (magic != "plapmesh" || version != "v1" || (dim != 1 && dim != 2) || nn <= 0 || ne <= 0)
    throw std::runtime_error("read_mesh: malformed header");
  Mesh m;
  m.dim = dim;
  m.domain = DomainKind::Custom;
  m.element_quadrature = dim == 1 ? gauss_segment_rule() : triangle_rule_deg4();
  for (int i = 0; i < nn; ++i) {
    Vec2 x = {0.0, 0.0};
    double d;
    is >> x[0];
    if (dim == 2) is >> x[1];
    is >> d;
    m.nodes.push_back(x);
    m.nodal_distance.push_back(d);
    m.boundary_node_flags.push_back(d == 0.0);
  }
  for (int e = 0; e < ne; ++e) {
    std::array<int, 3> s = {-1, -1, -1};
    is >> s[0] >> s[1];
    if (dim == 2) is >> s[2];
    m.simplices.push_back(s);
  }
  if (!is) throw std::runtime_error("read_mesh: truncated file");
  return m;
}

inline Mesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_mesh: cannot open " + path);
  return read_mesh(is);
}

}  // namespace plap
