// Command-line front-end: eigen | solve | verify | hypotheses | sweep |
// mesh-export, driven by a JSON run configuration.
//
// Exit status: 0 success, 1 runtime failure (FAILED marker left in the output
// directory), 2 malformed configuration (message names the offending field).

#include <CLI11.hpp>

#include "plap/run.hpp"

namespace {

struct Cli {
  std::string config;
  std::string out;
  long long seed = -1;
  int jobs = 1;
  double tol_inner = -1.0, tol_cauchy = -1.0, tol_inclusion = -1.0, tol_eigen = -1.0;

  void add_common(CLI::App* cmd, bool config_required = true) {
    auto* c = cmd->add_option("--config", config, "run configuration JSON file");
    if (config_required) c->required();
    cmd->add_option("--out", out, "output directory (overrides the config)");
    cmd->add_option("--seed", seed, "sampling seed (overrides the config)");
    cmd->add_option("--jobs", jobs, "parallel runs for sweep")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-inner", tol_inner, "inner minimization tolerance");
    cmd->add_option("--tol-cauchy", tol_cauchy, "continuation Cauchy tolerance");
    cmd->add_option("--tol-inclusion", tol_inclusion, "inclusion sandwich tolerance");
    cmd->add_option("--tol-eigen", tol_eigen, "eigenpair tolerance");
  }

  plap::RunConfig load() const {
    plap::RunConfig c =
        config.empty() ? plap::RunConfig{} : plap::load_config(config);
    if (!out.empty()) c.out = out;
    if (seed >= 0) c.seed = static_cast<unsigned>(seed);
    const auto override_tol = [](double& dst, double v, const char* name) {
      if (v < 0.0) return;
      if (!(v > 0.0)) throw plap::ConfigError(name, "must be > 0");
      dst = v;
    };
    override_tol(c.tol.inner, tol_inner, "tol-inner");
    override_tol(c.tol.cauchy, tol_cauchy, "tol-cauchy");
    override_tol(c.tol.inclusion, tol_inclusion, "tol-inclusion");
    override_tol(c.tol.eigen, tol_eigen, "tol-eigen");
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian sub-solution / continuation / certification pipeline"};
  app.require_subcommand(1);

  Cli cli;
  auto* eigen = app.add_subcommand("eigen", "first Dirichlet eigenpair");
  auto* solve = app.add_subcommand("solve", "full continuation pipeline");
  auto* verify = app.add_subcommand("verify", "certify a finished solve");
  auto* hypotheses = app.add_subcommand("hypotheses", "structural hypothesis report");
  auto* sweep = app.add_subcommand("sweep", "parameter grid of solve+verify runs");
  auto* mesh_export = app.add_subcommand("mesh-export", "write the mesh file");
  for (auto* cmd : {eigen, solve, verify, hypotheses, sweep, mesh_export})
    cli.add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  std::string outdir;
  try {
    const plap::RunConfig c = cli.load();
    outdir = c.out;
    if (eigen->parsed()) plap::cmd_eigen(c);
    if (solve->parsed()) plap::cmd_solve(c);
    if (verify->parsed()) plap::cmd_verify(c);
    if (hypotheses->parsed()) plap::cmd_hypotheses(c);
    if (sweep->parsed()) plap::cmd_sweep(c, cli.jobs);
    if (mesh_export->parsed()) plap::cmd_mesh_export(c);
  } catch (const plap::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (!outdir.empty()) plap::rundetail::mark_failed(outdir, e.what());
    return 1;
  }
  return 0;
}
