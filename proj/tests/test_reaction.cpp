#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "plap/expr.hpp"
#include "plap/reaction.hpp"

using namespace plap;

namespace {

/// Min/max of the truncated reaction g(t) = f(max(ubar, t)) over [lo, hi],
/// from dense samples plus the one-sided limits at every breakpoint inside.
std::pair<double, double> window_extrema(const Reaction& r, double ubar, double lo,
                                         double hi) {
  double mn = kInf, mx = -kInf;
  auto push = [&](double v) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  };
  for (double t : {lo, hi}) {
    const auto [a, b] = eval_envelopes(r, std::max(ubar, t));
    push(a);
    push(b);
  }
  for (double b : r.breakpoints)
    if (b > std::max(lo, ubar) && b < hi) {
      const auto [ea, eb] = eval_envelopes(r, b);
      push(ea);
      push(eb);
    }
  const int n = 512;
  for (int k = 1; k < n; ++k) {
    const double t = lo + (hi - lo) * k / n;
    push(eval_f(r, std::max(ubar, t)));
  }
  return {mn, mx};
}

Reaction step_up_at_one() {
  // 0 on (0,1), 1 on (1,inf): the classic unit jump
  Reaction r;
  r.pieces.push_back(presets::const_piece(0.0, 1.0, 0.0));
  r.pieces.push_back(presets::const_piece(1.0, kInf, 1.0));
  r.point_value = {1.0};
  presets::finish(r);
  return r;
}

}  // namespace

TEST_CASE("eval_f on the built-in reactions") {
  const Reaction sing = presets::paper_singular(0.5, 0.0, 2.0);
  REQUIRE(eval_f(sing, 0.4) == Catch::Approx(std::sqrt(2.0)));  // floor(2.5) = 2
  REQUIRE(eval_f(sing, 1.5) == 0.0);

  const Reaction pow_half = presets::power(0.5);
  REQUIRE(eval_f(pow_half, 4.0) == Catch::Approx(0.5));

  REQUIRE_THROWS_AS(eval_f(pow_half, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(eval_f(pow_half, -1.0), std::invalid_argument);
}

TEST_CASE("essential envelopes at jumps and continuity points") {
  const Reaction sing = presets::paper_singular(0.5, 0.0, 2.0);
  {
    const auto [lo, hi] = eval_envelopes(sing, 0.5);
    REQUIRE(lo == Catch::Approx(1.0));
    REQUIRE(hi == Catch::Approx(std::sqrt(2.0)));
  }
  {
    const auto [lo, hi] = eval_envelopes(sing, 1.0);
    REQUIRE(lo == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(hi == Catch::Approx(1.0));
  }
  const Reaction pow_half = presets::power(0.5);
  for (double s : {0.1, 0.5, 2.0, 7.0}) {
    const auto [lo, hi] = eval_envelopes(pow_half, s);
    REQUIRE(lo == hi);
    REQUIRE(lo == eval_f(pow_half, s));
  }
}

TEST_CASE("envelopes ignore point-value mutation at breakpoints") {
  Reaction sing = presets::paper_singular(0.5, 0.0, 2.0);
  const auto before = eval_envelopes(sing, 0.5);
  const int b = sing.match_breakpoint(0.5);
  REQUIRE(b >= 0);
  sing.point_value[b] = 42.0;
  REQUIRE(eval_f(sing, 0.5) == 42.0);  // point value visible to eval_f...
  const auto after = eval_envelopes(sing, 0.5);
  REQUIRE(after.first == before.first);  // ...but invisible to the envelopes
  REQUIRE(after.second == before.second);
}

TEST_CASE("truncation freezes the reaction below the sub-solution value") {
  const Reaction r = presets::power(0.5);
  REQUIRE(truncate(r, 0.3, -5.0) == Catch::Approx(std::pow(0.3, -0.5)));
  REQUIRE(truncate(r, 0.3, 0.7) == Catch::Approx(std::pow(0.7, -0.5)));
  for (double s : {-3.0, 0.0, 0.1, 0.3})
    REQUIRE(truncate(r, 0.3, s) == truncate(r, 0.3, 0.3));
  REQUIRE_THROWS_AS(truncate(r, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("mollifier kernel: support, symmetry, unit mass") {
  REQUIRE(mollifier_rho(1.0) == 0.0);
  REQUIRE(mollifier_rho(-1.0) == 0.0);
  REQUIRE(mollifier_rho(1.7) == 0.0);
  for (double t : {0.0, 0.2, 0.55, 0.93}) REQUIRE(mollifier_rho(-t) == mollifier_rho(t));
  const double mass =
      detail::adaptive_quad([](double t) { return mollifier_rho(t); }, -1.0, 1.0, 1e-13);
  REQUIRE(mass == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("mollification of a constant is the constant") {
  const Reaction r = presets::constant(3.25);
  for (double s : {-2.0, 0.0, 0.4, 5.0})
    REQUIRE(mollify(r, 0.2, s, 0.1) == Catch::Approx(3.25).margin(1e-9));
  REQUIRE_THROWS_AS(mollify(r, 0.2, 0.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(mollify(r, 0.2, 0.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(mollify(r, -0.1, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("even kernel halves a jump") {
  const Reaction r = step_up_at_one();
  REQUIRE(mollify(r, 0.1, 1.0, 0.2) == Catch::Approx(0.5).margin(1e-8));
}

TEST_CASE("primitive of the smoothed reaction") {
  const Reaction c = presets::constant(2.0);
  REQUIRE(primitive_G(c, 0.5, 0.0, 0.1) == 0.0);
  REQUIRE(primitive_G(c, 0.5, 1.3, 0.1) == Catch::Approx(2.6).epsilon(1e-8));
  REQUIRE(primitive_G(c, 0.5, -2.0, 0.1) == Catch::Approx(-4.0).epsilon(1e-8));

  const Reaction sing = presets::paper_singular(0.5, 0.0, 2.0);
  double prev = primitive_G(sing, 0.1, -1.0, 0.1);
  for (double s : {-0.2, 0.3, 0.9, 2.0}) {
    const double cur = primitive_G(sing, 0.1, s, 0.1);
    REQUIRE(cur >= prev - 1e-12);  // nonnegative integrand
    prev = cur;
  }
}

TEST_CASE("smoothing consistency away from jumps") {
  const Reaction r = presets::power(0.5);
  const double s = 0.37, ubar = 0.1;
  const double exact = truncate(r, ubar, s);
  double prev_err = kInf;
  for (double eps : {0.1, 0.01, 0.001}) {
    const double err = std::abs(mollify(r, ubar, s, eps) - exact);
    REQUIRE(err < prev_err);
    prev_err = err;
  }
  REQUIRE(prev_err < 1e-5);
}

TEST_CASE("hypothesis certificates for the built-in reactions") {
  const double lambda1 = M_PI * M_PI;  // interval(0,1), p = 2

  const auto sing = check_hypotheses(presets::paper_singular(0.5, 0.0, 2.0), 2.0, lambda1);
  REQUIRE(sing.all_hold());
  REQUIRE(sing.delta_w >= 0.05);
  REQUIRE(sing.delta_margin > 0.0);
  REQUIRE(sing.chat_w < lambda1);

  const auto nons = check_hypotheses(presets::paper_nonsingular(2.0), 2.0, lambda1);
  REQUIRE(nons.all_hold());

  const auto pw = check_hypotheses(presets::power(0.5), 2.0, lambda1);
  REQUIRE(pw.all_hold());
  REQUIRE(pw.c1_w == Catch::Approx(1.0).epsilon(1e-6));

  const auto bdry = check_hypotheses(presets::eigen_boundary(lambda1, 2.0), 2.0, lambda1);
  REQUIRE_FALSE(bdry.holds_iii);

  REQUIRE_THROWS_AS(check_hypotheses(presets::power(0.5), 2.0, -1.0),
                    std::invalid_argument);
}

TEST_CASE("malformed reactions are structural errors") {
  // gap in the cover
  {
    Reaction r;
    r.pieces.push_back(presets::const_piece(0.0, 1.0, 1.0));
    r.pieces.push_back(presets::const_piece(2.0, kInf, 1.0));
    r.breakpoints = {1.0};
    r.point_value = {kNaN};
    REQUIRE_THROWS_AS(r.validate(), ReactionFormatError);
  }
  // does not start at 0
  {
    Reaction r;
    r.pieces.push_back(presets::const_piece(0.5, kInf, 1.0));
    REQUIRE_THROWS_AS(r.validate(), ReactionFormatError);
  }
  // does not reach infinity
  {
    Reaction r;
    r.pieces.push_back(presets::const_piece(0.0, 1.0, 1.0));
    REQUIRE_THROWS_AS(r.validate(), ReactionFormatError);
  }
  // negative values
  {
    Reaction r;
    r.pieces.push_back({0.0, kInf, [](double s) { return s - 1.0; }, -1.0, kNaN});
    REQUIRE_THROWS_AS(r.validate(), ReactionFormatError);
  }
  // declared one-sided limit contradicts the formula
  {
    Reaction r;
    r.pieces.push_back(presets::const_piece(0.0, 1.0, 1.0));
    r.pieces.push_back(presets::const_piece(1.0, kInf, 2.0));
    r.pieces[0].lim_hi = 7.0;
    r.breakpoints = {1.0};
    r.point_value = {kNaN};
    REQUIRE_THROWS_AS(r.validate(), ReactionFormatError);
  }
}

TEST_CASE("growth constants bound the smoothed reaction") {
  const double lambda1 = M_PI * M_PI;
  const auto gc = growth_constants(presets::power(0.5), 2.0, lambda1);
  REQUIRE(gc.c1 == Catch::Approx(1.02).epsilon(1e-4));  // analytic envelope is 1
  REQUIRE(gc.c2 > 0.0);
  REQUIRE(gc.c2 < lambda1);
  REQUIRE(gc.c3 >= gc.M / 1.02);

  const auto gs = growth_constants(presets::paper_singular(0.5, 0.0, 2.0), 2.0, lambda1);
  REQUIRE(gs.c2 < lambda1);

  REQUIRE_THROWS_AS(growth_constants(presets::eigen_boundary(lambda1, 2.0), 2.0, lambda1),
                    std::runtime_error);
}

TEST_CASE("mollifier sandwich and nonnegativity over randomized windows") {
  const Reaction rs[3] = {presets::paper_singular(0.5, 1.0, 2.0),
                          presets::paper_nonsingular(2.0), presets::power(0.5)};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int it = 0; it < 10000; ++it) {
    const Reaction& r = rs[it % 3];
    const double ubar = 0.05 + 0.95 * uni(rng);
    const double s = 0.05 + 4.95 * uni(rng);
    const double eps = 0.01 + 0.48 * uni(rng);
    const double val = mollify(r, ubar, s, eps);
    REQUIRE(val >= -1e-12);
    const auto [mn, mx] = window_extrema(r, ubar, s - eps, s + eps);
    const double tol = 1e-7 * (1.0 + mx);
    REQUIRE(val >= mn - tol);
    REQUIRE(val <= mx + tol);
  }
}

TEST_CASE("expression compiler used by reaction documents") {
  auto f = Expr::compile("floor(1/s)^0.5 * ind(s, 0, 1)");
  REQUIRE(f(0.4) == Catch::Approx(std::sqrt(2.0)));
  REQUIRE(f(1.5) == 0.0);
  auto g = Expr::compile("2*s + max(s, 3) - min(s, 1)");
  REQUIRE(g(5.0) == Catch::Approx(10.0 + 5.0 - 1.0));
  auto h = Expr::compile("exp(-s) + sqrt(abs(s - 2)) / pi");
  REQUIRE(h(1.0) == Catch::Approx(std::exp(-1.0) + 1.0 / M_PI));
  REQUIRE_THROWS_AS(Expr::compile("2 +"), std::invalid_argument);
  REQUIRE_THROWS_AS(Expr::compile("frob(s)"), std::invalid_argument);
  REQUIRE_THROWS_AS(Expr::compile("s s"), std::invalid_argument);
}
