#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "plap/mesh.hpp"
#include "plap/operators.hpp"

using namespace plap;

namespace {

FeFunction random_zero_trace(const Mesh& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  FeFunction u(m);
  for (int i = 0; i < m.n_nodes(); ++i)
    u.coeff[i] = m.boundary_node_flags[i] ? 0.0 : uni(rng);
  return u;
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_conforming(const Mesh& m) {
  for (int e = 0; e < m.n_elems(); ++e) REQUIRE(m.measure(e) > 0.0);
  for (int i = 0; i < m.n_nodes(); ++i) {
    if (m.boundary_node_flags[i])
      REQUIRE(m.nodal_distance[i] == 0.0);
    else
      REQUIRE(m.nodal_distance[i] > 0.0);
  }
  // nodal distance is 1-Lipschitz across every edge
  for (int e = 0; e < m.n_elems(); ++e) {
    const auto& s = m.simplices[e];
    for (int a = 0; a < m.nv(); ++a)
      for (int b = a + 1; b < m.nv(); ++b) {
        const double dd = std::abs(m.nodal_distance[s[a]] - m.nodal_distance[s[b]]);
        REQUIRE(dd <= norm2(m.nodes[s[a]] - m.nodes[s[b]]) + 1e-14);
      }
  }
}

}  // namespace

TEST_CASE("interval mesh basics") {
  const Mesh m = build_mesh("interval", 4, 0.0, 1.0);
  REQUIRE(m.n_nodes() == 5);
  REQUIRE(m.n_elems() == 4);
  const std::vector<double> want = {0.0, 0.25, 0.5, 0.25, 0.0};
  for (int i = 0; i < 5; ++i) REQUIRE(m.nodal_distance[i] == Catch::Approx(want[i]));
  check_conforming(m);
  REQUIRE_THROWS_AS(build_mesh("interval", 1), std::invalid_argument);
}

TEST_CASE("unit square mesh counts") {
  const int n = 7;
  const Mesh m = build_mesh("unit_square", n);
  REQUIRE(m.n_nodes() == (n + 1) * (n + 1));
  REQUIRE(m.n_elems() == 2 * n * n);
  check_conforming(m);
  double area = 0.0;
  for (int e = 0; e < m.n_elems(); ++e) area += m.measure(e);
  REQUIRE(area == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit disk mesh boundary nodes on the circle") {
  const Mesh m = build_mesh("unit_disk", 8);
  check_conforming(m);
  int n_bdry = 0;
  for (int i = 0; i < m.n_nodes(); ++i)
    if (m.boundary_node_flags[i]) {
      ++n_bdry;
      REQUIRE(std::abs(norm2(m.nodes[i]) - 1.0) <= 1e-12);
    }
  REQUIRE(n_bdry == 6 * 8);
  double area = 0.0;
  for (int e = 0; e < m.n_elems(); ++e) area += m.measure(e);
  REQUIRE(area < M_PI);               // inscribed polygon
  REQUIRE(area > M_PI * 0.98);
}

TEST_CASE("apply_Ap matches the hand-assembled 1d stiffness action") {
  // two elements on (0,1), hat at the midnode: h = 1/2, row (-2, 4, -2)
  const Mesh m = build_mesh("interval", 2);
  FeFunction u(m);
  u.coeff[1] = 1.0;
  const auto a = apply_Ap(m, u, 2.0, 0.0);
  REQUIRE(a[0] == Catch::Approx(-2.0));
  REQUIRE(a[1] == Catch::Approx(4.0));
  REQUIRE(a[2] == Catch::Approx(-2.0));
}

TEST_CASE("apply_Ap of zero is zero, and |grad u| = 1 removes the p-dependence") {
  const Mesh m = build_mesh("interval", 8);
  FeFunction z(m);
  for (double v : apply_Ap(m, z, 3.7, 0.0)) REQUIRE(v == 0.0);

  const FeFunction lin = interpolate(m, [](const Vec2& x) { return x[0]; });
  const auto a2 = apply_Ap(m, lin, 2.0, 0.0);
  const auto a4 = apply_Ap(m, lin, 4.0, 0.0);
  for (int i = 0; i < m.n_nodes(); ++i) REQUIRE(a4[i] == Catch::Approx(a2[i]).margin(1e-14));
}

TEST_CASE("apply_Ap parameter validation") {
  const Mesh m = build_mesh("interval", 4);
  const FeFunction u(m);
  REQUIRE_THROWS_AS(apply_Ap(m, u, 1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_Ap(m, u, 2.0, -1e-3), std::invalid_argument);
}

TEST_CASE("discrete monotonicity and quadrature consistency of apply_Ap") {
  std::mt19937_64 rng(42);
  for (const double p : {1.5, 2.0, 3.0}) {
    const Mesh m = build_mesh("interval", 16);
    for (int it = 0; it < 100; ++it) {
      const FeFunction u = random_zero_trace(m, rng);
      const FeFunction w = random_zero_trace(m, rng);
      const auto au = apply_Ap(m, u, p, it % 2 ? 0.1 : 0.0);
      const auto aw = apply_Ap(m, w, p, it % 2 ? 0.1 : 0.0);
      double s = 0.0;
      for (int i = 0; i < m.n_nodes(); ++i) s += (au[i] - aw[i]) * (u.coeff[i] - w.coeff[i]);
      REQUIRE(s >= -1e-12);

      const double np = norm_W1p(u, p);
      REQUIRE(dot_vec(apply_Ap(m, u, p, 0.0), u.coeff) ==
              Catch::Approx(std::pow(np, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("apply_Ap is linear for p = 2") {
  std::mt19937_64 rng(1);
  const Mesh m = build_mesh("unit_square", 4);
  for (int it = 0; it < 20; ++it) {
    const FeFunction u = random_zero_trace(m, rng);
    const FeFunction w = random_zero_trace(m, rng);
    FeFunction uw(m);
    for (int i = 0; i < m.n_nodes(); ++i) uw.coeff[i] = 2.0 * u.coeff[i] - 3.0 * w.coeff[i];
    const auto au = apply_Ap(m, u, 2.0, 0.0);
    const auto aw = apply_Ap(m, w, 2.0, 0.0);
    const auto auw = apply_Ap(m, uw, 2.0, 0.0);
    for (int i = 0; i < m.n_nodes(); ++i)
      REQUIRE(auw[i] == Catch::Approx(2.0 * au[i] - 3.0 * aw[i]).margin(1e-12));
  }
}

TEST_CASE("norms on closed-form functions") {
  const Mesh m = build_mesh("interval", 256);
  const FeFunction lin = interpolate(m, [](const Vec2& x) { return x[0]; });
  for (const double p : {1.5, 2.0, 4.0}) REQUIRE(norm_W1p(lin, p) == Catch::Approx(1.0));

  const FeFunction par = interpolate(m, [](const Vec2& x) { return x[0] * (1.0 - x[0]); });
  REQUIRE(norm_Linf(par) == Catch::Approx(0.25).margin(1e-5));

  const FeFunction sine = interpolate(m, [](const Vec2& x) { return std::sin(M_PI * x[0]); });
  REQUIRE(norm_Lq(sine, 2.0) == Catch::Approx(std::sqrt(0.5)).margin(1e-4));
}

TEST_CASE("norm_Linf is exact on nodal values") {
  std::mt19937_64 rng(9);
  const Mesh m = build_mesh("interval", 32);
  const FeFunction u = random_zero_trace(m, rng);
  double mx = 0.0;
  for (double c : u.coeff) mx = std::max(mx, std::abs(c));
  REQUIRE(norm_Linf(u) == mx);
}

TEST_CASE("boundary-singular distance integral, convergent case") {
  // int_0^1 min(x, 1-x)^{-1/2} dx = 2 sqrt(2)
  const Mesh m = build_mesh("interval", 4);
  const auto r = integrate_distance_power(m, 0.5, 1.0);
  REQUIRE(r.converged);
  REQUIRE(r.value == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-3));
}

TEST_CASE("boundary-singular distance integral, divergent case flagged") {
  const Mesh m = build_mesh("interval", 4);
  const auto r = integrate_distance_power(m, 0.5, 3.0);  // gamma q = 1.5 > 1
  REQUIRE_FALSE(r.converged);
  const auto deeper = integrate_distance_power(m, 0.5, 3.0, 36);
  REQUIRE(deeper.value > 2.0 * r.value);  // grows without bound under refinement
}

TEST_CASE("distance integral parameter validation") {
  const Mesh m = build_mesh("interval", 4);
  REQUIRE_THROWS_AS(integrate_distance_power(m, 1.5, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(integrate_distance_power(m, 0.5, 2.0), std::invalid_argument);  // gamma q = 1
}

TEST_CASE("distance integral on the square is grading-stable") {
  const Mesh m = build_mesh("unit_square", 8);
  const auto a = integrate_distance_power(m, 0.25, 2.0, 24);
  const auto b = integrate_distance_power(m, 0.25, 2.0, 30);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  REQUIRE(b.value == Catch::Approx(a.value).epsilon(2e-2));
}

TEST_CASE("mesh text round-trip") {
  const Mesh m = build_mesh("unit_square", 3);
  std::stringstream ss;
  write_mesh(m, ss);
  const Mesh m2 = read_mesh(ss);
  REQUIRE(m2.n_nodes() == m.n_nodes());
  REQUIRE(m2.n_elems() == m.n_elems());
  for (int i = 0; i < m.n_nodes(); ++i) {
    REQUIRE(m2.nodes[i][0] == m.nodes[i][0]);
    REQUIRE(m2.nodal_distance[i] == m.nodal_distance[i]);
    REQUIRE(m2.boundary_node_flags[i] == m.boundary_node_flags[i]);
  }
  std::stringstream bad("plapmesh v2 1 2 1\n");
  REQUIRE_THROWS_AS(read_mesh(bad), std::runtime_error);
}
