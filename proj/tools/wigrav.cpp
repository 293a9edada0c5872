#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wigrav/errors.hpp"
#include "wigrav/experiments.hpp"

namespace {

struct Defaults {
  double t_max;
  int steps;
};

// Flags shared by every experiment.
void add_common(CLI::App* cmd, wigrav::RunOptions& o, std::string& format, std::string& rule,
                std::string& params_file, const Defaults& d) {
  o.t_max = d.t_max;
  o.steps = d.steps;
  cmd->add_option("--params", params_file, "parameter file (key = value, SI units)");
  cmd->add_option("--output", o.output, "output path; stdout when omitted");
  cmd->add_option("--format", format, "csv or json")->capture_default_str();
  cmd->add_option("--pos-nodes", o.quadrature.pos_nodes, "position nodes per branch window")
      ->capture_default_str();
  cmd->add_option("--mom-nodes", o.quadrature.mom_nodes, "momentum nodes per branch window")
      ->capture_default_str();
  cmd->add_option("--rule", rule, "gauss-legendre or trapezoid")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical phase-space evolution of two gravitationally coupled superpositions"};
  app.require_subcommand(1);

  wigrav::RunOptions options;
  std::string format = "csv";
  std::string rule = "gauss-legendre";
  std::string method = "gaussian_analytic";
  std::string params_file;
  std::function<wigrav::ExperimentReport(const wigrav::RunOptions&)> run;

  auto* purity = app.add_subcommand("purity", "purity of the particle-2 marginal versus time");
  auto* neg = app.add_subcommand("negativity", "momentum-marginal negativity, stepwise models");
  auto* diff = app.add_subcommand("diffusion", "global and reduced purities with momentum diffusion");
  auto* traj = app.add_subcommand("trajectories", "relative-coordinate trajectories of all models");
  auto* pot = app.add_subcommand("potentials", "Newtonian potential and its quadratic approximations");

  // Only one subcommand runs, so all of them can share one option block.
  wigrav::RunOptions purity_opts, neg_opts, diff_opts, traj_opts, pot_opts;
  std::string purity_fmt = format, neg_fmt = format, diff_fmt = format, traj_fmt = format, pot_fmt = format;
  std::string purity_rule = rule, neg_rule = rule, diff_rule = rule, traj_rule = rule, pot_rule = rule;
  std::string purity_params, neg_params, diff_params, traj_params, pot_params;

  add_common(purity, purity_opts, purity_fmt, purity_rule, purity_params, {10.0, 21});
  purity->add_option("--t-max", purity_opts.t_max, "last time [s]")->capture_default_str();
  purity->add_option("--steps", purity_opts.steps, "number of uniform samples")->capture_default_str();
  purity->add_option("--kinds", purity_opts.kinds, "subset of qt,taylor,fit")->delimiter(',');
  purity->add_option("--method", method, "gaussian_analytic or quadrature")->capture_default_str();

  add_common(neg, neg_opts, neg_fmt, neg_rule, neg_params, {2.5, 11});
  neg->add_option("--t-max", neg_opts.t_max, "last time [s]")->capture_default_str();
  neg->add_option("--steps", neg_opts.steps, "number of uniform samples")->capture_default_str();
  neg->add_option("--d-over-threshold", neg_opts.d_over_threshold,
                  "D t at 2.5 s in units of 0.25 (hbar/delta_x)^2")
      ->capture_default_str();

  add_common(diff, diff_opts, diff_fmt, diff_rule, diff_params, {2.5, 11});
  diff->add_option("--t-max", diff_opts.t_max, "last time [s]")->capture_default_str();
  diff->add_option("--steps", diff_opts.steps, "number of uniform samples")->capture_default_str();
  diff->add_option("--d-over-threshold", diff_opts.d_over_threshold,
                   "D t at 2.5 s in units of 0.25 (hbar/delta_x)^2")
      ->capture_default_str();

  add_common(traj, traj_opts, traj_fmt, traj_rule, traj_params, {10.0, 101});
  traj->add_option("--t-max", traj_opts.t_max, "last time [s]")->capture_default_str();
  traj->add_option("--steps", traj_opts.steps, "number of uniform samples")->capture_default_str();

  add_common(pot, pot_opts, pot_fmt, pot_rule, pot_params, {0.0, 201});
  pot->add_option("--steps", pot_opts.steps, "samples over x_rel in [-delta_x, delta_x]")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; usage errors share the exit code of runtime errors.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    auto finalize = [&](wigrav::RunOptions& o, const std::string& f, const std::string& r,
                        const std::string& p) {
      o.format = wigrav::parse_format(f);
      o.quadrature.rule = wigrav::parse_rule(r);
      if (!p.empty()) o.params_file = p;
      options = o;
    };
    if (purity->parsed()) {
      finalize(purity_opts, purity_fmt, purity_rule, purity_params);
      options.method = wigrav::parse_purity_method(method);
      run = wigrav::cmd_purity_curve;
    } else if (neg->parsed()) {
      finalize(neg_opts, neg_fmt, neg_rule, neg_params);
      run = wigrav::cmd_negativity;
    } else if (diff->parsed()) {
      finalize(diff_opts, diff_fmt, diff_rule, diff_params);
      run = wigrav::cmd_diffusion_purities;
    } else if (traj->parsed()) {
      finalize(traj_opts, traj_fmt, traj_rule, traj_params);
      run = wigrav::cmd_trajectories;
    } else {
      finalize(pot_opts, pot_fmt, pot_rule, pot_params);
      run = wigrav::cmd_potentials;
    }

    const wigrav::ExperimentReport report = run(options);
    // Keep stdout clean when it carries the table.
    std::ostream& out = options.output.empty() ? std::cerr : std::cout;
    out << report.summary();
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
