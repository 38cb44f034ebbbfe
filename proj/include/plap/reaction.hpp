#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReactionFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One maximal interval of continuity of the reaction, with the one-sided
/// limit values at both ends (infinite ends carry NaN/inf limits).
struct Piece {
  double lo = 0.0, hi = kInf;
  std::function<double(double)> f;
  double lim_lo = kNaN;  // limit of f as s -> lo+
  double lim_hi = kNaN;  // limit of f as s -> hi-
};

struct BreakpointGenerator {
  std::string kind = "reciprocal_integers";
  double cutoff = 1e-4;
};

/// Piecewise-continuous reaction f on (0, inf) with an explicit (finite)
/// discontinuity set. Pieces are continuous on their open intervals, so the
/// essential envelopes reduce to one-sided limits at the breakpoints; values
/// *at* breakpoints are measure-zero data kept separately.
struct Reaction {
  std::vector<Piece> pieces;           // sorted, contiguous, covering (0, inf)
  std::vector<double> breakpoints;     // interior piece boundaries, ascending
  std::vector<double> point_value;     // f at each breakpoint; NaN = unset
  double gamma = -1.0;                 // singular exponent; negative = none
  std::optional<BreakpointGenerator> generator;

  /// Index of the breakpoint matching s, or -1.
  int match_breakpoint(double s) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), s);
    for (int pass = 0; pass < 2; ++pass) {
      auto jt = (pass == 0) ? it : (it == breakpoints.begin() ? breakpoints.end() : it - 1);
      if (jt != breakpoints.end() &&
          std::abs(*jt - s) <= 1e-12 * std::max(1.0, std::abs(*jt)))
        return static_cast<int>(jt - breakpoints.begin());
    }
    return -1;
  }

  /// Piece whose closure contains s (s must not be an interior breakpoint).
  int piece_index(double s) const {
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
    return static_cast<int>(it - breakpoints.begin());
  }

  void validate() const {
    if (pieces.empty()) throw ReactionFormatError("reaction: no pieces");
    if (pieces.front().lo != 0.0)
      throw ReactionFormatError("reaction: pieces must start at 0");
    if (!std::isinf(pieces.back().hi))
      throw ReactionFormatError("reaction: pieces must extend to infinity");
    if (breakpoints.size() + 1 != pieces.size())
      throw ReactionFormatError("reaction: breakpoint/piece count mismatch");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      if (pieces[i].hi != pieces[i + 1].lo || pieces[i].hi != breakpoints[i])
        throw ReactionFormatError("reaction: pieces leave a gap in (0, inf)");
      if (!(pieces[i].lo < pieces[i].hi))
        throw ReactionFormatError("reaction: empty piece interval");
    }
    for (const auto& p : pieces) {
      const double hi = std::isinf(p.hi) ? p.lo + std::max(1.0, 2.0 * p.lo) : p.hi;
      const double w = hi - p.lo;
      for (int k = 1; k <= 7; ++k) {
        const double s = p.lo + w * k / 8.0;
        const double v = p.f(s);
        if (!std::isfinite(v) || v < 0.0)
          throw ReactionFormatError("reaction: piece not finite/nonnegative at s=" +
                                    std::to_string(s));
      }
      // declared one-sided limits must match the formula
      auto check_lim = [&](double at, double declared, double inward) {
        if (!std::isfinite(declared)) return;
        const double probe = at + inward * std::max(1e-11, 1e-9 * std::abs(at));
        if (std::abs(p.f(probe) - declared) >
            1e-5 * std::max(1.0, std::abs(declared)))
          throw ReactionFormatError("reaction: declared limit inconsistent at s=" +
                                    std::to_string(at));
      };
      check_lim(p.lo, p.lim_lo, +1.0);
      if (std::isfinite(p.hi)) check_lim(p.hi, p.lim_hi, -1.0);
    }
  }
};

inline double eval_f(const Reaction& r, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("eval_f: reaction is defined on (0, inf)");
  const int b = r.match_breakpoint(s);
  if (b >= 0) {
    if (std::isfinite(r.point_value[b])) return r.point_value[b];
    return std::min(r.pieces[b].lim_hi, r.pieces[b + 1].lim_lo);
  }
  return r.pieces[r.piece_index(s)].f(s);
}

/// Essential envelopes (f_lower, f_upper). Pieces are continuous, so at a
/// breakpoint these are the min/max of the two one-sided limits, and the
/// stored point value never enters.
inline std::pair<double, double> eval_envelopes(const Reaction& r, double s) {
  if (!(s > 0.0))
    throw std::invalid_argument("eval_envelopes: reaction is defined on (0, inf)");
  const int b = r.match_breakpoint(s);
  if (b >= 0) {
    const double l = r.pieces[b].lim_hi, rr = r.pieces[b + 1].lim_lo;
    return {std::min(l, rr), std::max(l, rr)};
  }
  const double v = r.pieces[r.piece_index(s)].f(s);
  return {v, v};
}

inline double truncate(const Reaction& r, double ubar_value, double s) {
  if (!(ubar_value > 0.0))
    throw std::invalid_argument("truncate: sub-solution value must be positive");
  return eval_f(r, std::max(ubar_value, s));
}

namespace detail {

template <class Fn>
double adaptive_simpson(Fn&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class Fn>
double adaptive_quad(Fn&& f, double a, double b, double tol, int depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

// 5-point Gauss-Legendre on [0,1]
inline constexpr double gl5_x[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                                    0.76923465505284155, 0.95308992296933200};
inline constexpr double gl5_w[5] = {0.11846344252809454, 0.23931433524968324,
                                    0.28444444444444444, 0.23931433524968324,
                                    0.11846344252809454};

}  // namespace detail

/// Standard bump kernel Z exp(-1/(1-t^2)) on (-1,1), unit mass.
inline double mollifier_rho(double t) {
  static const double Z = [] {
    const double I = detail::adaptive_quad(
        [](double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; },
        -1.0, 1.0, 1e-13);
    return 1.0 / I;
  }();
  if (std::abs(t) >= 1.0) return 0.0;
  return Z * std::exp(-1.0 / (1.0 - t * t));
}

/// g_eps(x, s) = (1/eps) int g(x, s - xi) rho(xi/eps) d xi for the truncated
/// reaction g(x, t) = f(max{ubar(x), t}). The integration window is split at
/// every breakpoint of the truncated reaction so each sub-integrand is smooth.
inline double mollify(const Reaction& r, double ubar_value, double s, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("mollify: eps must lie in (0,1)");
  if (!(ubar_value > 0.0))
    throw std::invalid_argument("mollify: sub-solution value must be positive");

  const double lo = s - eps, hi = s + eps;
  std::vector<double> cuts;
  cuts.push_back(lo);
  bool capped = false;
  if (lo < ubar_value && ubar_value < hi) cuts.push_back(ubar_value);
  {
    // breakpoints below ubar are flattened away by the truncation
    auto first = std::upper_bound(r.breakpoints.begin(), r.breakpoints.end(),
                                  std::max(lo, ubar_value));
    auto last = std::lower_bound(first, r.breakpoints.end(), hi);
    const std::ptrdiff_t n = last - first;
    if (n > 64) {
      capped = true;  // keep the largest jumps; the skipped ones are tiny
      first = last - 64;
    }
    cuts.insert(cuts.end(), first, last);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  // Normalizing by the kernel mass on the same panels makes the result an
  // exact convex combination of reaction samples, so the essential-window
  // sandwich holds to machine precision.
  double acc = 0.0, kernel_mass = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    int panels = std::clamp(static_cast<int>(std::ceil((b - a) / (eps / 8.0))), 1, 32);
    if (capped && i == 0) panels = 256;  // dense unsplit region
    const double h = (b - a) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double pa = a + pnl * h;
      for (int k = 0; k < 5; ++k) {
        const double t = pa + h * detail::gl5_x[k];
        const double g = eval_f(r, std::max(ubar_value, t));
        const double w = detail::gl5_w[k] * h * mollifier_rho((s - t) / eps) / eps;
        acc += w * g;
        kernel_mass += w;
      }
    }
  }
  return acc / kernel_mass;
}

/// G_eps(x, s) = int_0^s g_eps(x, t) dt, sign-aware; exactly 0 at s = 0.
/// g_eps is smooth with derivatives on the eps scale, so composite Gauss
/// panels of width <= eps/8 resolve it to near machine precision.
inline double primitive_G(const Reaction& r, double ubar_value, double s, double eps) {
  if (s == 0.0) return 0.0;
  const double a = std::min(0.0, s), b = std::max(0.0, s);
  const int panels =
      std::clamp(static_cast<int>(std::ceil((b - a) / (eps / 8.0))), 8, 4096);
  const double h = (b - a) / panels;
  double v = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double pa = a + pnl * h;
    for (int k = 0; k < 5; ++k)
      v += detail::gl5_w[k] * h *
           mollify(r, ubar_value, pa + h * detail::gl5_x[k], eps);
  }
  return s > 0.0 ? v : -v;
}

// ---------------------------------------------------------------------------
// Hypothesis certification
// ---------------------------------------------------------------------------

struct HypothesisReport {
  bool holds_i = false, holds_ii = false, holds_iii = false;
  bool holds_iv = false, holds_v = false, holds_vi = false;
  // witnesses
  double gamma_w = kNaN, c1_w = kNaN, r_w = kNaN;    // singular growth near 0
  double delta_w = kNaN, delta_margin = kNaN;        // lower bound near 0
  double chat_w = kNaN, R_w = kNaN;                  // sublinear bound at infinity
  double M_w = kNaN;                                 // sup f on [r_w, R_w]
  std::vector<std::string> notes;

  bool all_hold() const {
    return holds_i && holds_ii && holds_iii && holds_iv && holds_v && holds_vi;
  }
};

/// Sampling-based certificates for the structural hypotheses on f. The
/// asymptotic conditions are checked on geometric nets (`samples` points per
/// decade) and reported with margins; they are evidence, not proofs.
inline HypothesisReport check_hypotheses(const Reaction& r, double p, double lambda1,
                                         int samples = 512) {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("check_hypotheses: lambda1 must be > 0");
  if (samples < 1) throw std::invalid_argument("check_hypotheses: samples must be >= 1");
  r.validate();  // structural malformation is an error, not a failed hypothesis

  HypothesisReport rep;
  rep.holds_i = true;  // continuity and local boundedness verified by validate()
  rep.holds_v = true;  // the representable discontinuity sets are finite
  rep.notes.push_back("discontinuity points: " + std::to_string(r.breakpoints.size()));

  const double s_lo = 1e-6, s_hi = 1e6;
  std::vector<std::pair<double, double>> low, high;  // (s, value) with envelope at jumps
  const int decades_lo = 6, decades_hi = 6;
  for (int k = 0; k <= decades_lo * samples; ++k) {
    const double s = s_lo * std::pow(1.0 / s_lo, double(k) / (decades_lo * samples));
    if (s >= 1.0) break;
    low.emplace_back(s, eval_f(r, s));
  }
  for (int k = 0; k <= decades_hi * samples; ++k) {
    const double s = std::pow(s_hi, double(k) / (decades_hi * samples));
    high.emplace_back(s, eval_f(r, s));
  }
  for (double b : r.breakpoints) {
    const auto [flo, fhi] = eval_envelopes(r, b);
    (b < 1.0 ? low : high).emplace_back(b, fhi);  // upper envelope for sups
  }
  auto by_s = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(low.begin(), low.end(), by_s);
  std::sort(high.begin(), high.end(), by_s);

  // (ii): c1 = sup s^gamma f(s) on (0, r]
  const double gam = r.gamma > 0.0 ? r.gamma : 0.5;
  rep.gamma_w = gam;
  rep.r_w = 0.5;
  double c1 = 0.0;
  for (const auto& [s, v] : low)
    if (s <= rep.r_w) c1 = std::max(c1, std::pow(s, gam) * v);
  rep.c1_w = c1;
  rep.holds_ii = std::isfinite(c1);

  // (iii): largest sampled delta with f(s) > lambda1 s^{p-1} on (0, delta);
  // jumps contribute their lower envelope here.
  {
    std::vector<std::pair<double, double>> pts = low;
    for (double b : r.breakpoints)
      if (b < 1.0) pts.emplace_back(b, eval_envelopes(r, b).first);
    std::sort(pts.begin(), pts.end(), by_s);
    double run_min = kInf, best_delta = kNaN, best_margin = kNaN;
    for (const auto& [s, v] : pts) {
      if (run_min > lambda1 * (1.0 + 1e-9)) {
        best_delta = s;  // everything sampled below s clears the bar
        best_margin = run_min / lambda1 - 1.0;
      }
      run_min = std::min(run_min, v / std::pow(s, p - 1.0));
    }
    if (std::isfinite(best_delta) && best_delta > s_lo * 2.0) {
      rep.holds_iii = true;
      rep.delta_w = best_delta;
      rep.delta_margin = best_margin;
    }
  }

  // (iv): smallest dyadic R with sup_{[R, S_max]} f(s)/s^{p-1} < lambda1
  {
    for (double R = 1.0; R <= 1048576.0 && !rep.holds_iv; R *= 2.0) {
      double chat = 0.0;
      for (const auto& [s, v] : high)
        if (s >= R) chat = std::max(chat, v / std::pow(s, p - 1.0));
      if (chat < lambda1 * (1.0 - 1e-9)) {
        rep.holds_iv = true;
        rep.chat_w = chat;
        rep.R_w = R;
      }
    }
    if (!rep.holds_iv) rep.notes.push_back("no R found with sup f/s^{p-1} < lambda1");
  }

  // sup f on [r, R], needed by the growth-constant chain
  if (rep.holds_iv) {
    double M = 0.0;
    for (const auto& [s, v] : low)
      if (s >= rep.r_w) M = std::max(M, v);
    for (const auto& [s, v] : high)
      if (s <= rep.R_w) M = std::max(M, v);
    rep.M_w = M;
  }

  // (vi): wherever the lower envelope vanishes, f itself must vanish. For
  // continuous pieces f_lower = f away from breakpoints, so only the
  // breakpoints can separate them.
  rep.holds_vi = true;
  for (std::size_t b = 0; b < r.breakpoints.size(); ++b) {
    const double s = r.breakpoints[b];
    if (eval_envelopes(r, s).first <= 1e-14 && eval_f(r, s) > 1e-14) {
      rep.holds_vi = false;
      rep.notes.push_back("(vi) fails at breakpoint s=" + std::to_string(s));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Growth constants of the regularized reaction
// ---------------------------------------------------------------------------

struct GrowthBoundViolation : std::runtime_error {
  double s, ubar, eps;
  GrowthBoundViolation(double s_, double u_, double e_)
      : std::runtime_error("growth bound violated at (s=" + std::to_string(s_) +
                           ", ubar=" + std::to_string(u_) +
                           ", eps=" + std::to_string(e_) + ")"),
        s(s_), ubar(u_), eps(e_) {}
};

struct GrowthConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double gamma = 0.5;
  double chat = 0.0, R = 1.0, M = 0.0;
};

/// Constants (c1, c2, c3) with c2 < lambda1 such that
///   g_eps(x, s) <= c1 ubar(x)^{-gamma} + c2 |s|^{p-1} + c3
/// for every eps in (0,1) and every sub-solution value ubar <= 1. The fit is
/// validated on a random net and a violation throws with the witness triple.
inline GrowthConstants growth_constants(const Reaction& r, double p, double lambda1,
                                        const HypothesisReport* rep_in = nullptr,
                                        int n_validate = 2000, unsigned seed = 7) {
  HypothesisReport local;
  if (!rep_in) {
    local = check_hypotheses(r, p, lambda1);
    rep_in = &local;
  }
  const HypothesisReport& rep = *rep_in;
  if (!(rep.holds_i && rep.holds_ii && rep.holds_iii && rep.holds_iv))
    throw std::runtime_error("growth_constants: hypotheses (i)-(iv) not certified");

  GrowthConstants gc;
  gc.gamma = rep.gamma_w;
  gc.c1 = rep.c1_w * 1.02;
  gc.chat = rep.chat_w;
  gc.R = rep.R_w;
  gc.M = rep.M_w * 1.02;
  gc.c2 = std::min(0.5 * (rep.chat_w + lambda1), lambda1 * (1.0 - 1e-6));

  // absorb chat (|s| + 1 + ubar_cap)^{p-1} into c2 |s|^{p-1} + C, ubar_cap = 1
  double C = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = (k == 0) ? 0.0 : 1e-6 * std::pow(1e14, double(k) / 2000.0);
    C = std::max(C, gc.chat * std::pow(t + 2.0, p - 1.0) - gc.c2 * std::pow(t, p - 1.0));
  }
  gc.c3 = gc.M + C;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double eps_grid[3] = {0.5, 0.1, 0.01};
  for (int it = 0; it < n_validate; ++it) {
    const double ubar = std::exp(std::log(1e-4) * uni(rng));  // in (1e-4, 1]
    const double mag = std::exp(std::log(1e-4) + (std::log(10.0) - std::log(1e-4)) * uni(rng));
    const double s = (uni(rng) < 0.5 ? -1.0 : 1.0) * mag;
    const double eps = eps_grid[it % 3];
    const double lhs = mollify(r, ubar, s, eps);
    const double rhs = gc.c1 * std::pow(ubar, -gc.gamma) +
                       gc.c2 * std::pow(std::abs(s), p - 1.0) + gc.c3;
    if (lhs > rhs + 1e-9) throw GrowthBoundViolation(s, ubar, eps);
  }
  return gc;
}

// ---------------------------------------------------------------------------
// Built-in reactions
// ---------------------------------------------------------------------------

namespace presets {

inline Piece const_piece(double lo, double hi, double v) {
  return {lo, hi, [v](double) { return v; }, v, v};
}

inline void finish(Reaction& r) {
  r.breakpoints.clear();
  for (std::size_t i = 0; i + 1 < r.pieces.size(); ++i)
    r.breakpoints.push_back(r.pieces[i].hi);
  if (r.point_value.size() != r.breakpoints.size())
    r.point_value.assign(r.breakpoints.size(), kNaN);
  r.validate();
}

/// f(s) = floor(1/s)^gamma on (0,1) plus lambda floor(s)^{p-1} on [1, inf);
/// countably many jumps at s = 1/k accumulating at zero. Below `cutoff` the
/// formula is used directly as a single piece.
inline Reaction paper_singular(double gamma, double lambda, double p,
                               double cutoff = 1e-4) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("paper_singular: gamma must lie in (0,1)");
  if (lambda < 0.0) throw std::invalid_argument("paper_singular: lambda must be >= 0");
  Reaction r;
  r.gamma = gamma;
  r.generator = BreakpointGenerator{"reciprocal_integers", cutoff};
  const int K = std::max(2, static_cast<int>(std::floor(1.0 / cutoff)));
  r.pieces.push_back({0.0, 1.0 / K,
                      [gamma](double s) { return std::pow(std::floor(1.0 / s), gamma); },
                      kInf, std::pow(double(K), gamma)});
  std::vector<double> pv;
  for (int k = K - 1; k >= 1; --k) {
    pv.push_back(std::pow(double(k + 1), gamma));  // value at s = 1/(k+1): left limit
    r.pieces.push_back(const_piece(1.0 / (k + 1), 1.0 / k, std::pow(double(k), gamma)));
  }
  pv.push_back(lambda);  // f(1) = lambda * floor(1)^{p-1}
  if (lambda == 0.0) {
    r.pieces.push_back(const_piece(1.0, kInf, 0.0));
  } else {
    const int M = 64;
    for (int m = 1; m < M; ++m) {
      r.pieces.push_back(const_piece(double(m), double(m + 1),
                                     lambda * std::pow(double(m), p - 1.0)));
      if (m > 1) pv.push_back(lambda * std::pow(double(m), p - 1.0));
    }
    pv.push_back(lambda * std::pow(double(M), p - 1.0));  // f(M), right limit
    r.pieces.push_back({double(M), kInf,
                        [lambda, p](double s) {
                          return lambda * std::pow(std::floor(s), p - 1.0);
                        },
                        lambda * std::pow(double(M), p - 1.0), kNaN});
  }
  r.point_value = std::move(pv);
  finish(r);
  return r;
}

/// f(s) = (g(s) + sigma) chi_(0,1)(s) with the bounded-variation staircase
/// g(s) = floor(3 s) / 3.
inline Reaction paper_nonsingular(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("paper_nonsingular: sigma must be > 0");
  Reaction r;
  r.pieces.push_back(const_piece(0.0, 1.0 / 3.0, sigma));
  r.pieces.push_back(const_piece(1.0 / 3.0, 2.0 / 3.0, sigma + 1.0 / 3.0));
  r.pieces.push_back(const_piece(2.0 / 3.0, 1.0, sigma + 2.0 / 3.0));
  r.pieces.push_back(const_piece(1.0, kInf, 0.0));
  r.point_value = {sigma + 1.0 / 3.0, sigma + 2.0 / 3.0, 0.0};
  finish(r);
  return r;
}

/// Single jump at s = 1 with f(1) = 0: f = sigma on (0,1), 0 on [1, inf).
/// Drives solutions into a plateau at the jump level when sigma is large.
inline Reaction step(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("step: sigma must be > 0");
  Reaction r;
  r.pieces.push_back(const_piece(0.0, 1.0, sigma));
  r.pieces.push_back(const_piece(1.0, kInf, 0.0));
  r.point_value = {0.0};
  finish(r);
  return r;
}

/// Continuous singular reaction f(s) = s^{-gamma}.
inline Reaction power(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("power: gamma must lie in (0,1)");
  Reaction r;
  r.gamma = gamma;
  r.pieces.push_back({0.0, kInf, [gamma](double s) { return std::pow(s, -gamma); },
                      kInf, kNaN});
  finish(r);
  return r;
}

inline Reaction constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant: value must be > 0");
  Reaction r;
  r.pieces.push_back(const_piece(0.0, kInf, c));
  finish(r);
  return r;
}

/// Boundary case f(s) = lambda1 s^{p-1}: hypothesis (iii) must fail.
inline Reaction eigen_boundary(double lambda1, double p) {
  Reaction r;
  r.pieces.push_back({0.0, kInf,
                      [lambda1, p](double s) { return lambda1 * std::pow(s, p - 1.0); },
                      0.0, kNaN});
  finish(r);
  return r;
}

}  // namespace presets

}  // namespace plap
