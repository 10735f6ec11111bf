// Command-line front end: every subcommand builds a ScenarioConfig and hands
// it to run_scenario, the same entry point the test suite drives in-process.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <kswave/kswave.hpp>

namespace {

void add_param_options(CLI::App* cmd, kswave::ModelParams& p) {
  cmd->add_option("--chi", p.chi, "chemotactic sensitivity (> d_w)")->capture_default_str();
  cmd->add_option("--k", p.k, "consumption rate")->capture_default_str();
  cmd->add_option("--c", p.c, "wave speed")->capture_default_str();
  cmd->add_option("--u-r", p.u_r, "rest state of u ahead of the front")->capture_default_str();
  cmd->add_option("--amplitude", p.a, "profile position constant (translation only)")
      ->capture_default_str();
  cmd->add_option("--mu", p.mu, "diffusivity ratio d_u/d_w")->capture_default_str();
  cmd->add_option("--eps", p.eps, "diffusion scale, d_w = eps and d_u = mu eps")
      ->capture_default_str();
}

void add_output_options(CLI::App* cmd, kswave::ScenarioConfig& c) {
  cmd->add_option("-o,--out-dir", c.out_dir, "directory for output files")
      ->envname("KSWAVE_OUT")
      ->capture_default_str();
  cmd->add_option("--tag", c.tag, "filename stem for outputs")->capture_default_str();
}

void add_range_options(CLI::App* cmd, kswave::ScenarioConfig& c) {
  cmd->add_option("--z-min", c.z_min, "left end of the sampling window")->capture_default_str();
  cmd->add_option("--z-max", c.z_max, "right end of the sampling window")->capture_default_str();
  cmd->add_option("-n,--samples", c.n, "number of samples")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"travelling waves of a chemotaxis-consumption model: closed forms, "
               "singular orbits, heteroclinic shooting, and full-system checks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  kswave::ScenarioConfig cfg;

  auto* cmd_exact = app.add_subcommand(
      "exact", "sample the closed-form wave and verify it solves the travelling-wave system");
  add_param_options(cmd_exact, cfg.params);
  add_range_options(cmd_exact, cfg);
  add_output_options(cmd_exact, cfg);

  auto* cmd_limit = app.add_subcommand(
      "limit", "sample the sharp-interface wave reached as w-diffusion vanishes");
  add_param_options(cmd_limit, cfg.params);
  add_range_options(cmd_limit, cfg);
  add_output_options(cmd_limit, cfg);

  auto* cmd_singular = app.add_subcommand(
      "singular", "assemble the singular orbit: slow segment, fast jump fibre, rest point");
  add_param_options(cmd_singular, cfg.params);
  add_range_options(cmd_singular, cfg);
  cmd_singular->add_option("--fibre-span", cfg.fibre_y_span, "half-width of the fast window")
      ->capture_default_str();
  cmd_singular->add_option("--fibre-samples", cfg.n_fibre, "samples across the fast window")
      ->capture_default_str();
  add_output_options(cmd_singular, cfg);

  auto* cmd_manifolds = app.add_subcommand(
      "manifolds", "branch points, invariance residuals, and layer spectra");
  add_param_options(cmd_manifolds, cfg.params);
  cmd_manifolds->add_option("--u-tilde", cfg.u_tilde, "evaluation point on the branches")
      ->capture_default_str();
  cmd_manifolds
      ->add_option("--w-scale", cfg.w_scale,
                   "distort w by this factor and report the resulting residual")
      ->capture_default_str();
  add_output_options(cmd_manifolds, cfg);

  auto* cmd_shoot = app.add_subcommand(
      "shoot", "integrate the fast flow from the perturbed repelling branch to landing");
  add_param_options(cmd_shoot, cfg.params);
  cmd_shoot
      ->add_option("--u-tilde-start", cfg.u_tilde_start,
                   "start point on the repelling branch (default c u_r / 2)")
      ->capture_default_str();
  cmd_shoot->add_option("--delta-rel", cfg.delta_rel, "relative displacement off the branch")
      ->capture_default_str();
  add_output_options(cmd_shoot, cfg);

  auto* cmd_converge = app.add_subcommand(
      "converge", "end-state convergence of the shot orbit as eps decreases");
  add_param_options(cmd_converge, cfg.params);
  cmd_converge->add_option("--eps-list", cfg.epsilons, "eps values to shoot (>= 3, spanning a decade)")
      ->capture_default_str();
  cmd_converge
      ->add_option("--u-tilde-start", cfg.u_tilde_start,
                   "start point on the repelling branch (default c u_r)")
      ->capture_default_str();
  cmd_converge->add_option("--delta-rel", cfg.delta_rel, "relative displacement off the branch")
      ->capture_default_str();
  add_output_options(cmd_converge, cfg);

  auto* cmd_pde = app.add_subcommand(
      "pde", "march the full system and compare against the closed-form wave");
  add_param_options(cmd_pde, cfg.params);
  cmd_pde->add_option("--x-min", cfg.grid.x_min, "left domain edge")->capture_default_str();
  cmd_pde->add_option("--x-max", cfg.grid.x_max, "right domain edge")->capture_default_str();
  cmd_pde->add_option("--nx", cfg.grid.n, "number of cells")->capture_default_str();
  cmd_pde->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
  cmd_pde->add_option("--snapshot-dt", cfg.snapshot_dt, "time between stored snapshots")
      ->capture_default_str();
  cmd_pde
      ->add_option("--init", cfg.init, "initial data: exact | limit | step | background")
      ->capture_default_str();
  cmd_pde->add_option("--speed-t-min", cfg.speed_t_min, "ignore snapshots before this time")
      ->capture_default_str();
  add_output_options(cmd_pde, cfg);

  auto* cmd_validate = app.add_subcommand(
      "validate", "check a stored profile: format, grid, finiteness, residuals if closed-form");
  add_param_options(cmd_validate, cfg.params);
  cmd_validate->add_option("--in", cfg.in_path, "profile CSV to check")->required();
  add_output_options(cmd_validate, cfg);

  for (auto* sub : {cmd_exact, cmd_limit, cmd_singular, cmd_manifolds, cmd_shoot, cmd_converge,
                    cmd_pde, cmd_validate})
    sub->fallthrough();  // app-level options (--config) may follow the subcommand

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {cmd_exact, cmd_limit, cmd_singular, cmd_manifolds, cmd_shoot, cmd_converge,
                    cmd_pde, cmd_validate})
    if (sub->parsed()) cfg.command = sub->get_name();

  try {
    const kswave::RunReport report = kswave::run_scenario(cfg);
    std::cout << report.summary.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
