#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace gausep::cli;
  CLI::App app{"Separability bounds for bilinearly coupled Gaussian systems under white noise"};
  app.require_subcommand(1);

  Options o;
  double t = 0, dt = 0, tol = 0;
  int steps = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config (model or scenario)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--t", t, "final time");
    sub->add_option("--tol", tol, "tolerance override");
  };

  CLI::App* th = app.add_subcommand("threshold", "evaluate separability bounds; exit 0 satisfied, 2 violated");
  common(th);
  CLI::App* ev = app.add_subcommand("evolve", "covariance time series as CSV");
  common(ev);
  ev->add_option("--steps", steps, "number of output intervals");
  CLI::App* lv = app.add_subcommand("locc-verify", "synthesize and check the LOCC protocol; exit 3 if infeasible");
  common(lv);
  lv->add_option("--dt", dt, "Trotter step");
  lv->add_flag("--oracle", o.oracle, "add Fock-space cross-checks");
  CLI::App* sw = app.add_subcommand("sweep", "parameter grid as CSV, resumable with --out");
  common(sw);
  sw->add_option("--jobs", o.jobs, "concurrent grid points")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  for (CLI::App* sub : {th, ev, lv, sw}) {
    if (!sub->parsed()) continue;
    if (sub->count("--t")) o.t = t;
    if (sub->count("--tol")) o.tol = tol;
    if (sub == ev && ev->count("--steps")) o.steps = steps;
    if (sub == lv && lv->count("--dt")) o.dt = dt;
  }

  if (th->parsed()) return cmd_threshold(o, std::cout, std::cerr);
  if (ev->parsed()) return cmd_evolve(o, std::cout, std::cerr);
  if (lv->parsed()) return cmd_locc_verify(o, std::cout, std::cerr);
  return cmd_sweep(o, std::cout, std::cerr);
}
