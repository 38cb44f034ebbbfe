#pragma once

// Orchestration layer: run configuration parsing/validation, reaction JSON
// documents, report serialization, CSV emission, and the subcommand drivers
// used by the command-line tool. All file formats are plain JSON/CSV.

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "plap/expr.hpp"
#include "plap/solver.hpp"
#include "plap/verify.hpp"

namespace plap {

using json = nlohmann::json;

/// Invalid or malformed configuration; `field` names the offending entry.
/// The CLI maps this to exit status 2.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& msg)
      : std::runtime_error("config field '" + f + "': " + msg), field(std::move(f)) {}
};

// ---------------------------------------------------------------------------
// Logging (PLAP_LOG in {quiet, info, debug}; default info)
// ---------------------------------------------------------------------------

namespace logdetail {

inline int level() {
  static const int lv = [] {
    const char* e = std::getenv("PLAP_LOG");
    if (!e) return 1;
    const std::string s(e);
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
  }();
  return lv;
}

}  // namespace logdetail

inline void log_info(const std::string& msg) {
  if (logdetail::level() >= 1) std::cerr << "[plap] " << msg << '\n';
}

inline void log_debug(const std::string& msg) {
  if (logdetail::level() >= 2) std::cerr << "[plap:debug] " << msg << '\n';
}

// ---------------------------------------------------------------------------
// Number formatting: shortest round-trip representation, deterministic
// ---------------------------------------------------------------------------

inline std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Reaction documents
// ---------------------------------------------------------------------------

namespace rundetail {

inline double limit_from(const json& j, const std::string& field) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ConfigError(field, "expected a number or \"inf\"");
  }
  if (!j.is_number()) throw ConfigError(field, "expected a number or \"inf\"");
  return j.get<double>();
}

}  // namespace rundetail

/// Builds a Reaction from a JSON document: either {"preset": name, ...params}
/// (also accepted as a bare preset-name string) or an explicit description
/// {"pieces": [{"interval": [a,b], "formula": "...", "left_limit": v,
/// "right_limit": w}], "point_values": {"<s>": v}, "gamma": g,
/// "breakpoint_generator": {"kind": ..., "cutoff": ...} | null}.
inline Reaction make_reaction(const json& spec, double p) {
  json doc = spec;
  if (doc.is_string()) doc = json{{"preset", doc.get<std::string>()}};
  if (!doc.is_object()) throw ConfigError("reaction", "expected an object or preset name");

  if (doc.contains("preset")) {
    const std::string name = doc["preset"].get<std::string>();
    const auto num = [&](const char* key, double dflt) {
      if (!doc.contains(key)) return dflt;
      if (!doc[key].is_number())
        throw ConfigError(std::string("reaction.") + key, "expected a number");
      return doc[key].get<double>();
    };
    try {
      if (name == "paper_singular")
        return presets::paper_singular(num("gamma", 0.5), num("lambda", 0.0), p,
                                       num("cutoff", 1e-4));
      if (name == "paper_nonsingular") return presets::paper_nonsingular(num("sigma", 1.0));
      if (name == "step") return presets::step(num("sigma", 1.0));
      if (name == "power") return presets::power(num("gamma", 0.5));
      if (name == "constant") return presets::constant(num("value", 1.0));
      if (name == "eigen_boundary")
        return presets::eigen_boundary(num("lambda1", M_PI * M_PI), p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("reaction", e.what());
    }
    throw ConfigError("reaction.preset", "unknown preset '" + name + "'");
  }

  if (!doc.contains("pieces") || !doc["pieces"].is_array() || doc["pieces"].empty())
    throw ConfigError("reaction.pieces", "expected a non-empty array");
  Reaction r;
  for (std::size_t i = 0; i < doc["pieces"].size(); ++i) {
    const json& pj = doc["pieces"][i];
    const std::string where = "reaction.pieces[" + std::to_string(i) + "]";
    if (!pj.contains("interval") || !pj["interval"].is_array() ||
        pj["interval"].size() != 2)
      throw ConfigError(where + ".interval", "expected [lo, hi]");
    Piece piece;
    piece.lo = rundetail::limit_from(pj["interval"][0], where + ".interval[0]");
    piece.hi = rundetail::limit_from(pj["interval"][1], where + ".interval[1]");
    if (!pj.contains("formula") || !pj["formula"].is_string())
      throw ConfigError(where + ".formula", "expected an expression string");
    try {
      piece.f = Expr::compile(pj["formula"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(where + ".formula", e.what());
    }
    const double lo = piece.lo, hi = piece.hi;
    const auto f = piece.f;
    piece.lim_lo = pj.contains("left_limit")
                       ? rundetail::limit_from(pj["left_limit"], where + ".left_limit")
                       : f(lo + 1e-9 * (1.0 + std::abs(lo)));
    piece.lim_hi = pj.contains("right_limit")
                       ? rundetail::limit_from(pj["right_limit"], where + ".right_limit")
                       : (std::isfinite(hi) ? f(hi - 1e-9 * (1.0 + std::abs(hi))) : kNaN);
    r.pieces.push_back(std::move(piece));
  }
  for (std::size_t i = 0; i + 1 < r.pieces.size(); ++i)
    r.breakpoints.push_back(r.pieces[i].hi);
  r.point_value.assign(r.breakpoints.size(), kNaN);
  if (doc.contains("point_values")) {
    if (!doc["point_values"].is_object())
      throw ConfigError("reaction.point_values", "expected an object {\"<s>\": value}");
    for (const auto& [key, val] : doc["point_values"].items()) {
      double s = 0.0;
      try {
        s = std::stod(key);
      } catch (...) {
        throw ConfigError("reaction.point_values", "non-numeric key '" + key + "'");
      }
      const int idx = r.match_breakpoint(s);
      if (idx < 0)
        throw ConfigError("reaction.point_values",
                          "key " + key + " matches no breakpoint");
      r.point_value[idx] = val.get<double>();
    }
  }
  if (doc.contains("gamma") && !doc["gamma"].is_null()) {
    r.gamma = doc["gamma"].get<double>();
    if (!(r.gamma > 0.0 && r.gamma < 1.0))
      throw ConfigError("reaction.gamma", "must lie in (0,1)");
  }
  if (doc.contains("breakpoint_generator") && !doc["breakpoint_generator"].is_null()) {
    const json& g = doc["breakpoint_generator"];
    BreakpointGenerator gen;
    gen.kind = g.value("kind", std::string());
    if (gen.kind != "reciprocal_integers")
      throw ConfigError("reaction.breakpoint_generator.kind",
                        "unknown kind '" + gen.kind + "'");
    gen.cutoff = g.value("cutoff", 1e-4);
    r.generator = gen;
  }
  try {
    r.validate();
  } catch (const ReactionFormatError& e) {
    throw ConfigError("reaction", e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct Tolerances {
  double inner = 1e-8;      // dual-residual stop of the inner minimization
  double cauchy = 1e-5;     // relative W^{1,p} continuation stop
  double inclusion = 1e-2;  // sandwich tolerance
  double eigen = 1e-9;      // eigenpair stop
};

struct RunConfig {
  std::string domain = "interval";
  int resolution = 64;
  double p = 2.0;
  json reaction = json("paper_singular");
  Schedule schedule;
  Tolerances tol;
  std::string out = "out";
  unsigned seed = 31;
  json sweep;  // optional {"<field>": [values...]} grid

  Reaction reaction_value() const { return make_reaction(reaction, p); }
};

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  RunConfig c;
  for (const auto& [key, val] : j.items()) {
    if (key == "domain") {
      c.domain = val.get<std::string>();
      if (c.domain != "interval" && c.domain != "unit_square" && c.domain != "unit_disk")
        throw ConfigError("domain", "expected interval | unit_square | unit_disk");
    } else if (key == "resolution") {
      if (!val.is_number_integer() || val.get<int>() < 2)
        throw ConfigError("resolution", "expected an integer >= 2");
      c.resolution = val.get<int>();
    } else if (key == "p") {
      if (!val.is_number() || !(val.get<double>() > 1.0))
        throw ConfigError("p", "expected a number > 1");
      c.p = val.get<double>();
    } else if (key == "reaction") {
      c.reaction = val;
    } else if (key == "schedule") {
      c.schedule.n_start = val.value("n_start", 2);
      c.schedule.n_end = val.value("n_end", 64);
      c.schedule.geometric = val.value("geometric", true);
      if (c.schedule.n_start < 2 || c.schedule.n_end < c.schedule.n_start)
        throw ConfigError("schedule", "requires 2 <= n_start <= n_end");
    } else if (key == "tolerances") {
      c.tol.inner = val.value("inner", c.tol.inner);
      c.tol.cauchy = val.value("cauchy", c.tol.cauchy);
      c.tol.inclusion = val.value("inclusion", c.tol.inclusion);
      c.tol.eigen = val.value("eigen", c.tol.eigen);
      for (const double t : {c.tol.inner, c.tol.cauchy, c.tol.inclusion, c.tol.eigen})
        if (!(t > 0.0)) throw ConfigError("tolerances", "all tolerances must be > 0");
    } else if (key == "out") {
      c.out = val.get<std::string>();
    } else if (key == "seed") {
      if (!val.is_number_integer() || val.get<long long>() < 0)
        throw ConfigError("seed", "expected a non-negative integer");
      c.seed = val.get<unsigned>();
    } else if (key == "sweep") {
      if (!val.is_object()) throw ConfigError("sweep", "expected an object of lists");
      c.sweep = val;
    } else {
      throw ConfigError(key, "unknown configuration field");
    }
  }
  // eagerly validate the reaction document so errors surface as status 2
  (void)c.reaction_value();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("<config>", "cannot open " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("<config>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline json config_to_json(const RunConfig& c) {
  json j{{"domain", c.domain},
         {"resolution", c.resolution},
         {"p", c.p},
         {"reaction", c.reaction},
         {"schedule",
          {{"n_start", c.schedule.n_start},
           {"n_end", c.schedule.n_end},
           {"geometric", c.schedule.geometric}}},
         {"tolerances",
          {{"inner", c.tol.inner},
           {"cauchy", c.tol.cauchy},
           {"inclusion", c.tol.inclusion},
           {"eigen", c.tol.eigen}}},
         {"out", c.out},
         {"seed", c.seed}};
  if (!c.sweep.is_null()) j["sweep"] = c.sweep;
  return j;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline json to_json(const HypothesisReport& h) {
  return json{{"holds_i", h.holds_i},       {"holds_ii", h.holds_ii},
              {"holds_iii", h.holds_iii},   {"holds_iv", h.holds_iv},
              {"holds_v", h.holds_v},       {"holds_vi", h.holds_vi},
              {"all_hold", h.all_hold()},   {"gamma_w", h.gamma_w},
              {"c1_w", h.c1_w},             {"r_w", h.r_w},
              {"delta_w", h.delta_w},       {"delta_margin", h.delta_margin},
              {"chat_w", h.chat_w},         {"R_w", h.R_w},
              {"M_w", h.M_w},               {"notes", h.notes}};
}

inline json to_json(const VerificationReport& r) {
  const auto inc = [](const InclusionResult& i) {
    return json{{"fraction", i.fraction}, {"worst", i.worst}, {"n_points", i.n_points}};
  };
  return json{
      {"inclusion", inc(r.inclusion)},
      {"inclusion_windowed", inc(r.inclusion_windowed)},
      {"envelope_window", r.envelope_window},
      {"subsolution_margin", r.subsolution_margin},
      {"boundary_growth", {{"l_hat", r.boundary_growth.l_hat},
                           {"ratio_sup", r.boundary_growth.ratio_sup}}},
      {"uniform_bound", r.uniform_bound},
      {"hardy_constant", r.hardy_constant},
      {"dist_integrable", r.dist_integrable},
      {"dist_integral", r.dist_integral},
      {"strong",
       {{"far_q50", r.strong.far_q50},
        {"far_q90", r.strong.far_q90},
        {"far_q99", r.strong.far_q99},
        {"near_fraction", r.strong.near_fraction},
        {"plateau_max_v", r.strong.plateau_max_v},
        {"plateau_points", r.strong.plateau_points},
        {"vacuous", r.strong.vacuous}}},
      {"vbound_C", r.vbound_C},
      {"u_inf", r.u_inf},
      {"skipped", r.skipped}};
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

namespace rundetail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open output file " + p.string());
  return os;
}

inline void write_json(const std::filesystem::path& p, const json& j) {
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

inline void write_nodal_csv(const std::filesystem::path& p, const Mesh& m,
                            const FeFunction& u, const char* name) {
  auto os = open_out(p);
  os << (m.dim == 1 ? "x" : "x,y") << ',' << name << '\n';
  for (int i = 0; i < m.n_nodes(); ++i) {
    os << fmt(m.nodes[i][0]);
    if (m.dim == 2) os << ',' << fmt(m.nodes[i][1]);
    os << ',' << fmt(u.coeff[i]) << '\n';
  }
}

inline void mark_failed(const std::filesystem::path& dir, const std::string& why) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream os(dir / "FAILED");
  os << why << '\n';
}

}  // namespace rundetail

// ---------------------------------------------------------------------------
// Subcommand drivers (throw on failure; the CLI maps exceptions to statuses)
// ---------------------------------------------------------------------------

inline void cmd_mesh_export(const RunConfig& c) {
  const Mesh m = build_mesh(c.domain, c.resolution);
  std::filesystem::create_directories(c.out);
  write_mesh(m, (std::filesystem::path(c.out) / "mesh.plapmesh").string());
  log_info("mesh " + c.domain + " resolution " + std::to_string(c.resolution) + " -> " +
           c.out);
}

inline void cmd_eigen(const RunConfig& c) {
  const Mesh m = build_mesh(c.domain, c.resolution);
  const Eigenpair e = first_eigenpair(m, c.p, c.tol.eigen);
  const std::filesystem::path out(c.out);
  std::filesystem::create_directories(out);
  {
    auto os = rundetail::open_out(out / "eigen.csv");
    os << "p,h,lambda1,residual,iterations\n";
    os << fmt(c.p) << ',' << fmt(1.0 / c.resolution) << ',' << fmt(e.lambda1) << ','
       << fmt(e.residual) << ',' << e.iterations << '\n';
  }
  rundetail::write_nodal_csv(out / "phi1.csv", m, e.phi1, "phi1");
  rundetail::write_json(out / "eigen.json",
                        json{{"p", c.p},
                             {"domain", c.domain},
                             {"resolution", c.resolution},
                             {"lambda1", e.lambda1},
                             {"residual", e.residual},
                             {"iterations", e.iterations}});
  log_info("lambda1 = " + fmt(e.lambda1));
}

inline void cmd_hypotheses(const RunConfig& c) {
  const Mesh m = build_mesh(c.domain, c.resolution);
  const Eigenpair e = first_eigenpair(m, c.p, c.tol.eigen);
  const Reaction r = c.reaction_value();
  const HypothesisReport h = check_hypotheses(r, c.p, e.lambda1);
  const std::filesystem::path out(c.out);
  std::filesystem::create_directories(out);
  json j = to_json(h);
  j["lambda1"] = e.lambda1;
  j["p"] = c.p;
  if (h.all_hold()) {
    try {
      const GrowthConstants gc = growth_constants(r, c.p, e.lambda1);
      j["growth_constants"] =
          json{{"c1", gc.c1}, {"c2", gc.c2}, {"c3", gc.c3}, {"gamma", gc.gamma}};
    } catch (const std::exception& ex) {
      j["growth_constants"] = nullptr;
      j["notes"].push_back(std::string("growth constants unavailable: ") + ex.what());
    }
  }
  rundetail::write_json(out / "hypotheses.json", j);
  log_info(std::string("hypotheses: ") + (h.all_hold() ? "all hold" : "violations found"));
}

inline ContinuationResult run_pipeline(const RunConfig& c, const Mesh& m,
                                       const Reaction& r, Eigenpair* eig_out = nullptr,
                                       Subsolution* sub_out = nullptr) {
  const Eigenpair eig = first_eigenpair(m, c.p, c.tol.eigen);
  log_debug("lambda1 = " + fmt(eig.lambda1));
  const HypothesisReport hyp = check_hypotheses(r, c.p, eig.lambda1);
  if (!hyp.holds_iii)
    throw std::runtime_error(
        "reaction admits no sub-solution witness (hypothesis (iii) fails)");
  const Subsolution sub = build_subsolution(m, eig, r, hyp);
  log_debug("subsolution k = " + fmt(sub.k) + ", delta = " + fmt(sub.delta));
  ContinuationResult cont =
      continuation(m, r, sub, c.p, c.schedule, c.tol.inner, c.tol.cauchy);
  if (eig_out) *eig_out = eig;
  if (sub_out) *sub_out = sub;
  return cont;
}

inline void cmd_solve(const RunConfig& c) {
  const Mesh m = build_mesh(c.domain, c.resolution);
  const Reaction r = c.reaction_value();
  Eigenpair eig;
  Subsolution sub;
  const ContinuationResult cont = run_pipeline(c, m, r, &eig, &sub);
  const GrowthConstants gc = growth_constants(r, c.p, eig.lambda1);

  const std::filesystem::path out(c.out);
  std::filesystem::create_directories(out);
  write_mesh(m, (out / "mesh.plapmesh").string());
  for (std::size_t i = 0; i < cont.epsilons.size(); ++i) {
    const int n = static_cast<int>(std::lround(1.0 / cont.epsilons[i]));
    rundetail::write_nodal_csv(out / ("u_eps_" + std::to_string(n) + ".csv"), m,
                               cont.solutions[i], "u");
  }
  rundetail::write_nodal_csv(out / "limit.csv", m, cont.limit, "u");
  rundetail::write_nodal_csv(out / "residual.csv", m, cont.residual_field, "v");
  {
    auto os = rundetail::open_out(out / "energy_trace.csv");
    os << "eps,iteration,J,step,dual_residual\n";
    for (std::size_t i = 0; i < cont.traces.size(); ++i)
      for (const auto& t : cont.traces[i])
        os << fmt(cont.epsilons[i]) << ',' << t.iteration << ',' << fmt(t.J) << ','
           << fmt(t.step) << ',' << fmt(t.dual_residual) << '\n';
  }
  json diag{{"lambda1", eig.lambda1},
            {"k", sub.k},
            {"delta", sub.delta},
            {"c1", gc.c1},
            {"c2", gc.c2},
            {"c3", gc.c3},
            {"L", cont.L},
            {"u_inf", norm_Linf(cont.limit)},
            {"epsilons", cont.epsilons},
            {"w1p_norms", cont.w1p_norms},
            {"cauchy_increments", cont.cauchy_increments}};
  rundetail::write_json(out / "diagnostics.json", diag);
  log_info("solve finished: " + std::to_string(cont.epsilons.size()) +
           " continuation steps, |u|_inf = " + fmt(norm_Linf(cont.limit)));
}

inline FeFunction read_nodal_csv(const std::filesystem::path& p, const Mesh& m) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("missing solution file " + p.string());
  std::string line;
  std::getline(is, line);  // header
  FeFunction u(m);
  for (int i = 0; i < m.n_nodes(); ++i) {
    if (!std::getline(is, line))
      throw std::runtime_error("truncated solution file " + p.string());
    const auto pos = line.find_last_of(',');
    u.coeff[i] = std::stod(line.substr(pos + 1));
  }
  return u;
}

/// Verifies a finished solve: reads mesh/limit/residual from the run
/// directory, reconstructs the certification inputs, and writes verify.json.
inline void cmd_verify(const RunConfig& c) {
  const std::filesystem::path out(c.out);
  const Mesh m = read_mesh((out / "mesh.plapmesh").string());
  const Reaction r = c.reaction_value();
  const Eigenpair eig = first_eigenpair(m, c.p, c.tol.eigen);
  const HypothesisReport hyp = check_hypotheses(r, c.p, eig.lambda1);
  const Subsolution sub = build_subsolution(m, eig, r, hyp);

  ContinuationResult cont;
  cont.limit = read_nodal_csv(out / "limit.csv", m);
  cont.residual_field = read_nodal_csv(out / "residual.csv", m);
  std::ifstream ds(out / "diagnostics.json");
  if (!ds) throw std::runtime_error("missing diagnostics.json in " + out.string());
  const json diag = json::parse(ds);
  cont.L = diag.at("L").get<double>();
  cont.epsilons = diag.at("epsilons").get<std::vector<double>>();
  cont.w1p_norms = diag.at("w1p_norms").get<std::vector<double>>();

  const VerificationReport rep =
      make_report(m, r, sub, cont, c.p, c.tol.inclusion, 1e-2, 50, c.seed);
  json j = to_json(rep);
  j["growth_envelope_ok"] = check_growth_envelope(m, r, sub, c.p, eig.lambda1,
                                                  10000, c.seed);
  rundetail::write_json(out / "verify.json", j);
  log_info("inclusion fraction " + fmt(rep.inclusion.fraction) + " (windowed " +
           fmt(rep.inclusion_windowed.fraction) + ")");
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

namespace rundetail {

/// Applies an override like "p", "resolution", or "reaction.gamma" to the
/// JSON form of a config.
inline void apply_override(json& cfg, const std::string& path, const json& value) {
  json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace rundetail

/// Runs the cross product of the `sweep` lists, each run in its own
/// subdirectory, up to `jobs` at a time; emits index.csv with headline
/// metrics. Per-run failures are recorded (status + FAILED marker) without
/// aborting the sweep.
inline void cmd_sweep(const RunConfig& c, int jobs = 1) {
  if (c.sweep.is_null() || c.sweep.empty())
    throw ConfigError("sweep", "sweep command requires a non-empty sweep grid");
  std::vector<std::string> params;
  std::vector<std::vector<json>> values;
  for (const auto& [key, val] : c.sweep.items()) {
    if (!val.is_array() || val.empty())
      throw ConfigError("sweep." + key, "expected a non-empty list");
    params.push_back(key);
    values.push_back(std::vector<json>(val.begin(), val.end()));
  }
  std::vector<std::vector<json>> grid{{}};
  for (const auto& vs : values) {
    std::vector<std::vector<json>> next;
    for (const auto& row : grid)
      for (const auto& v : vs) {
        auto r = row;
        r.push_back(v);
        next.push_back(std::move(r));
      }
    grid = std::move(next);
  }

  const std::filesystem::path root(c.out);
  std::filesystem::create_directories(root);
  struct Row {
    std::vector<json> param;
    std::string dir, status;
    json diag, verify;
  };
  std::vector<Row> rows(grid.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= grid.size()) return;
      Row& row = rows[i];
      row.param = grid[i];
      char name[16];
      std::snprintf(name, sizeof name, "run%03zu", i);
      row.dir = name;
      const std::filesystem::path dir = root / name;
      json cfg = config_to_json(c);
      cfg.erase("sweep");
      for (std::size_t k = 0; k < params.size(); ++k)
        rundetail::apply_override(cfg, params[k], grid[i][k]);
      cfg["out"] = dir.string();
      try {
        RunConfig rc = parse_config(cfg);
        std::filesystem::create_directories(dir);
        rundetail::write_json(dir / "config.json", cfg);
        cmd_solve(rc);
        cmd_verify(rc);
        std::ifstream ds(dir / "diagnostics.json"), vs(dir / "verify.json");
        row.diag = json::parse(ds);
        row.verify = json::parse(vs);
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = "FAILED";
        rundetail::mark_failed(dir, e.what());
        log_info(std::string(name) + " failed: " + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  auto os = rundetail::open_out(root / "index.csv");
  os << "run";
  for (const auto& pn : params) os << ',' << pn;
  os << ",status,lambda1,L,inclusion_fraction,u_inf,l_hat\n";
  for (const auto& row : rows) {
    os << row.dir;
    for (const auto& v : row.param) os << ',' << v.dump();
    os << ',' << row.status;
    if (row.status == "ok") {
      os << ',' << fmt(row.diag.at("lambda1").get<double>()) << ','
         << fmt(row.diag.at("L").get<double>()) << ','
         << fmt(row.verify.at("inclusion").at("fraction").get<double>()) << ','
         << fmt(row.diag.at("u_inf").get<double>()) << ','
         << fmt(row.verify.at("boundary_growth").at("l_hat").get<double>());
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  log_info("sweep: " + std::to_string(grid.size()) + " runs indexed");
}

}  // namespace plap
