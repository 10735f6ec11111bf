#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exact.hpp"
#include "io.hpp"
#include "model.hpp"
#include "pde.hpp"
#include "perturbed.hpp"
#include "singular.hpp"

namespace kswave {

inline constexpr const char* tool_name = "kswave";
inline constexpr const char* tool_version = "0.1.0";

/// Everything a run needs, collected so the command line, config files and
/// in-process tests all drive the same code path.
struct ScenarioConfig {
  std::string command;  ///< exact | limit | singular | manifolds | shoot | converge | pde | validate
  ModelParams params{};

  // Profile sampling (exact, limit).
  double z_min = -10.0;
  double z_max = 5.0;
  std::size_t n = 501;

  // Singular orbit assembly.
  double fibre_y_span = 25.0;
  std::size_t n_fibre = 201;

  // Branch diagnostics (manifolds).
  double u_tilde = 1.0;
  double w_scale = 1.0;

  // Shooting.
  double u_tilde_start = 0.0;  ///< <= 0 selects the default c u_r / 2
  double delta_rel = 1e-8;

  // Convergence study.
  std::vector<double> epsilons = {1e-1, 3e-2, 1e-2, 3e-3};

  // Wave-speed verification (pde).
  Grid1D grid{};
  double t_end = 5.0;
  double snapshot_dt = 0.5;
  std::string init = "exact";
  double speed_t_min = 0.5;

  // Input (validate).
  std::string in_path;

  // Output.
  std::string out_dir = ".";
  std::string tag = "run";
};

struct RunReport {
  nlohmann::ordered_json summary;
  std::vector<std::string> files_written;
};

namespace detail {

inline std::string canonical_config_string(const ScenarioConfig& c) {
  std::ostringstream os;
  const ModelParams& p = c.params;
  os << "command=" << c.command << "\n"
     << "chi=" << format_g17(p.chi) << "\nk=" << format_g17(p.k) << "\nc=" << format_g17(p.c)
     << "\nu_r=" << format_g17(p.u_r) << "\na=" << format_g17(p.a) << "\nmu=" << format_g17(p.mu)
     << "\neps=" << format_g17(p.eps) << "\n"
     << "z_min=" << format_g17(c.z_min) << "\nz_max=" << format_g17(c.z_max) << "\nn=" << c.n
     << "\nfibre_y_span=" << format_g17(c.fibre_y_span) << "\nn_fibre=" << c.n_fibre
     << "\nu_tilde=" << format_g17(c.u_tilde) << "\nw_scale=" << format_g17(c.w_scale)
     << "\nu_tilde_start=" << format_g17(c.u_tilde_start) << "\ndelta_rel=" << format_g17(c.delta_rel)
     << "\nepsilons=";
  for (double e : c.epsilons) os << format_g17(e) << ';';
  os << "\nx_min=" << format_g17(c.grid.x_min) << "\nx_max=" << format_g17(c.grid.x_max)
     << "\nnx=" << c.grid.n << "\nt_end=" << format_g17(c.t_end)
     << "\nsnapshot_dt=" << format_g17(c.snapshot_dt) << "\ninit=" << c.init
     << "\nspeed_t_min=" << format_g17(c.speed_t_min) << "\nin=" << c.in_path
     << "\ntag=" << c.tag << "\n";
  return os.str();
}

inline nlohmann::ordered_json params_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["chi"] = p.chi;
  j["k"] = p.k;
  j["c"] = p.c;
  j["u_r"] = p.u_r;
  j["a"] = p.a;
  j["mu"] = p.mu;
  j["eps"] = p.eps;
  j["d_u"] = p.d_u();
  j["d_w"] = p.d_w();
  return j;
}

inline nlohmann::ordered_json report_header(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["tool"] = tool_name;
  j["version"] = tool_version;
  j["command"] = c.command;
  j["config_hash"] = std::string("fnv1a:") + hex64(fnv1a64(canonical_config_string(c)));
  j["params"] = params_json(c.params);
  return j;
}

inline std::string out_path(const ScenarioConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

inline std::vector<std::pair<std::string, std::string>> profile_meta(const ScenarioConfig& c) {
  const ModelParams& p = c.params;
  return {{"tool", tool_name},
          {"version", tool_version},
          {"chi", format_g17(p.chi)},
          {"k", format_g17(p.k)},
          {"c", format_g17(p.c)},
          {"u_r", format_g17(p.u_r)},
          {"a", format_g17(p.a)},
          {"mu", format_g17(p.mu)},
          {"eps", format_g17(p.eps)}};
}

inline void write_summary(const ScenarioConfig& c, RunReport& r) {
  const std::string path = out_path(c, c.tag + "_summary.json");
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  os << r.summary.dump(2) << "\n";
  r.files_written.push_back(path);
}

// Summaries list file names relative to out_dir, so identical configs give
// byte-identical summaries wherever the run lands.
inline nlohmann::ordered_json file_list(const std::vector<std::string>& fs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& f : fs) j.push_back(std::filesystem::path(f).filename().string());
  return j;
}

// --- exact -----------------------------------------------------------------

inline RunReport run_exact(const ScenarioConfig& c) {
  const WaveProfile prof =
      sample_profile(Construction::exact, c.z_min, c.z_max, static_cast<int>(c.n), c.params);
  // The closed form solves the zero-u-diffusion member of the family, so its
  // residuals are evaluated there (mu enters the formula nowhere else).
  ModelParams q = c.params;
  q.mu = 0.0;
  const auto wave = [&](double zz) { return exact_wave(zz, q); };
  double max_ru = 0.0, max_rw = 0.0, max_fd = 0.0;
  for (double z : prof.z) {
    const Residuals ra = tw_residual_analytic(z, q);
    const Residuals rf = tw_residual(wave, z, q);
    max_ru = std::max(max_ru, std::abs(ra.r_u));
    max_rw = std::max(max_rw, std::abs(ra.r_w));
    max_fd = std::max(max_fd, std::max(std::abs(rf.r_u), std::abs(rf.r_w)));
  }
  RunReport r;
  r.summary = report_header(c);
  r.summary["n"] = c.n;
  r.summary["z_min"] = c.z_min;
  r.summary["z_max"] = c.z_max;
  r.summary["max_residual_u"] = max_ru;
  r.summary["max_residual_w"] = max_rw;
  r.summary["max_residual_fd"] = max_fd;
  r.summary["asymptotic_w_over_u"] = asymptotic_ratio(c.params);
  const std::string path = out_path(c, c.tag + "_profile.csv");
  write_profile_csv(path, prof, profile_meta(c));
  r.files_written.push_back(path);
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- limit -----------------------------------------------------------------

inline RunReport run_limit(const ScenarioConfig& c) {
  const ModelParams& p = c.params;
  const WaveProfile prof =
      sample_profile(Construction::limit, c.z_min, c.z_max, static_cast<int>(c.n), p);
  // Left of the front the limit wave has w/u = c^2/(k chi) identically.
  const double ratio_ref = p.c * p.c / (p.k * p.chi);
  double max_ratio_err = 0.0;
  for (std::size_t i = 0; i < prof.z.size(); ++i)
    if (prof.z[i] < 0.0 && prof.u[i] > 0.0)
      max_ratio_err = std::max(max_ratio_err, std::abs(prof.w[i] / prof.u[i] - ratio_ref));
  RunReport r;
  r.summary = report_header(c);
  r.summary["n"] = c.n;
  r.summary["z_min"] = c.z_min;
  r.summary["z_max"] = c.z_max;
  r.summary["w_over_u_left"] = ratio_ref;
  r.summary["max_ratio_error"] = max_ratio_err;
  const std::string path = out_path(c, c.tag + "_profile.csv");
  write_profile_csv(path, prof, profile_meta(c));
  r.files_written.push_back(path);
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- singular ---------------------------------------------------------------

inline RunReport run_singular(const ScenarioConfig& c) {
  SingularOrbitOptions so;
  so.n_slow = static_cast<int>(c.n);
  so.fibre_y_span = c.fibre_y_span;
  so.n_fibre = static_cast<int>(c.n_fibre);
  const SingularOrbit orb = assemble_singular_orbit(c.params, c.z_min, so);

  RunReport r;
  r.summary = report_header(c);

  WaveProfile slow;
  slow.construction = Construction::singular;
  for (std::size_t i = 0; i < orb.slow_z.size(); ++i) {
    slow.z.push_back(orb.slow_z[i]);
    slow.u.push_back(orb.slow_points[i].u);
    slow.w.push_back(orb.slow_points[i].w);
  }
  const std::string slow_path = out_path(c, c.tag + "_slow.csv");
  write_profile_csv(slow_path, slow, profile_meta(c));
  r.files_written.push_back(slow_path);

  const std::string fibre_path = out_path(c, c.tag + "_fibre.csv");
  {
    std::ofstream os(fibre_path);
    if (!os) throw Error("cannot open for writing: " + fibre_path);
    os << "# fast coordinate, frame position z = 0\n";
    os << "y,u,v,w\n";
    for (std::size_t i = 0; i < orb.fibre.y.size(); ++i) {
      const PhasePoint& q = orb.fibre.points[i];
      os << format_g17(orb.fibre.y[i]) << ',' << format_g17(q.u) << ',' << format_g17(q.v) << ','
         << format_g17(q.w) << "\n";
    }
  }
  r.files_written.push_back(fibre_path);

  const PhasePoint take_off = orb.slow_points.back();
  r.summary["take_off"] = {{"u", take_off.u}, {"v", take_off.v}, {"w", take_off.w},
                           {"u_tilde", take_off.u_tilde}};
  r.summary["rest_point"] = {{"u", orb.rest_point.u}, {"v", orb.rest_point.v},
                             {"w", orb.rest_point.w}, {"u_tilde", orb.rest_point.u_tilde}};
  r.summary["jump_height_w"] = take_off.w;
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- manifolds ---------------------------------------------------------------

inline RunReport run_manifolds(const ScenarioConfig& c) {
  const ModelParams& p = c.params;
  RunReport r;
  r.summary = report_header(c);
  r.summary["u_tilde"] = c.u_tilde;

  auto branch_json = [&](Branch b, const char* name) {
    const PhasePoint pt = perturbed_point(b, c.u_tilde, p);
    const double res = invariance_residual(b, c.u_tilde, p);
    const BranchStability st = classify_branch(b, c.u_tilde, p);
    nlohmann::ordered_json j;
    j["point"] = {{"u", pt.u}, {"v", pt.v}, {"w", pt.w}, {"u_tilde", pt.u_tilde}};
    j["invariance_residual"] = res;
    j["invariant"] = res < 1e-12;
    nlohmann::ordered_json eig = nlohmann::ordered_json::array();
    for (const auto& l : st.eigenvalues) eig.push_back({{"re", l.real()}, {"im", l.imag()}});
    j["layer_eigenvalues"] = eig;
    j["attracting"] = st.is_attracting;
    j["repelling"] = st.is_repelling;
    r.summary[name] = j;
  };
  branch_json(Branch::attracting, "attracting_branch");
  branch_json(Branch::repelling, "repelling_branch");
  if (c.w_scale != 1.0)
    r.summary["distorted_residual"] =
        invariance_residual(Branch::repelling, c.u_tilde, p, c.w_scale);
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- shoot -------------------------------------------------------------------

inline RunReport run_shoot(const ScenarioConfig& c) {
  ShootOptions opt;
  opt.u_tilde_start = c.u_tilde_start;
  opt.delta_rel = c.delta_rel;
  const HeteroclinicResult res = shoot_heteroclinic(c.params, opt);

  RunReport r;
  r.summary = report_header(c);
  r.summary["epsilon"] = res.epsilon;
  r.summary["u_tilde_start"] = res.u_tilde_start;
  r.summary["u_singular"] = res.u_singular;
  r.summary["u_end"] = res.u_end;
  r.summary["end_state_gap"] = res.end_state_gap;
  r.summary["speed_offset"] = res.speed_offset;
  r.summary["u_tilde_landing"] = res.u_tilde_landing;
  r.summary["y_landing"] = res.y_landing;
  r.summary["n_accepted"] = res.n_accepted;
  const std::string path = out_path(c, c.tag + "_profile.csv");
  write_profile_csv(path, res.profile, profile_meta(c));
  r.files_written.push_back(path);
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- converge ------------------------------------------------------------------

inline RunReport run_converge(const ScenarioConfig& c) {
  ShootOptions opt;
  opt.u_tilde_start = c.u_tilde_start;
  opt.delta_rel = c.delta_rel;
  const ConvergenceStudy st = convergence_study(c.params, c.epsilons, opt);

  RunReport r;
  r.summary = report_header(c);
  r.summary["slope"] = st.slope;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::string path = out_path(c, c.tag + "_convergence.csv");
  {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    os << "eps,end_state_gap,sup_dist,speed_offset\n";
    for (const auto& row : st.rows) {
      os << format_g17(row.eps) << ',' << format_g17(row.gap) << ',' << format_g17(row.sup_dist)
         << ',' << format_g17(row.speed_offset) << "\n";
      rows.push_back({{"eps", row.eps},
                      {"end_state_gap", row.gap},
                      {"sup_dist", row.sup_dist},
                      {"speed_offset", row.speed_offset}});
    }
  }
  r.files_written.push_back(path);
  r.summary["rows"] = rows;
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- pde -----------------------------------------------------------------------

inline RunReport run_pde(const ScenarioConfig& c) {
  SimulateOptions so;
  so.t_end = c.t_end;
  so.snapshot_dt = c.snapshot_dt;
  so.init = parse_initial_condition(c.init);
  const std::vector<Field1D> snaps = simulate(c.grid, c.params, so);

  RunReport r;
  r.summary = report_header(c);
  r.summary["nx"] = c.grid.n;
  r.summary["x_min"] = c.grid.x_min;
  r.summary["x_max"] = c.grid.x_max;
  r.summary["t_end"] = c.t_end;
  r.summary["snapshot_dt"] = c.snapshot_dt;
  r.summary["init"] = c.init;
  r.summary["n_snapshots"] = snaps.size();

  auto w_mass = [&](const Field1D& f) {
    double m = 0.0;
    for (double v : f.w) m += v;
    return m * c.grid.dx();
  };
  r.summary["w_mass_initial"] = w_mass(snaps.front());
  r.summary["w_mass_final"] = w_mass(snaps.back());

  const double level = 0.5 * (u_left + c.params.u_r);
  try {
    const WaveSpeed ws = measure_wave_speed(snaps, c.grid, level, c.speed_t_min);
    r.summary["front_level"] = level;
    r.summary["speed"] = ws.speed;
    r.summary["speed_uncertainty"] = ws.uncertainty;
    r.summary["speed_snapshots_used"] = ws.n_used;
  } catch (const Error& e) {
    r.summary["speed_error"] = e.what();
  }
  if (c.params.d_w() < c.params.chi) {
    const AlignedError ae = compare_profile(snaps.back(), c.grid, c.params);
    r.summary["aligned_shift"] = ae.shift;
    r.summary["aligned_sup_u"] = ae.sup_u;
    r.summary["aligned_sup_w"] = ae.sup_w;
    r.summary["aligned_l2_u"] = ae.l2_u;
    r.summary["aligned_l2_w"] = ae.l2_w;
  }

  for (std::size_t i = 0; i < snaps.size(); ++i) {
    std::ostringstream name;
    name << c.tag << "_t" << i << ".csv";
    const std::string path = out_path(c, name.str());
    write_field_csv(path, snaps[i], c.grid);
    r.files_written.push_back(path);
  }
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

// --- validate ---------------------------------------------------------------------

inline RunReport run_validate(const ScenarioConfig& c) {
  if (c.in_path.empty()) throw Error("validate needs an input profile (--in)");
  const WaveProfile prof = read_profile_csv(c.in_path);

  RunReport r;
  r.summary = report_header(c);
  r.summary["in"] = c.in_path;
  r.summary["construction"] = construction_name(prof.construction);
  r.summary["n"] = prof.z.size();
  r.summary["z_min"] = prof.z.front();
  r.summary["z_max"] = prof.z.back();
  double umax = 0.0, wmax = 0.0;
  for (std::size_t i = 0; i < prof.z.size(); ++i) {
    umax = std::max(umax, prof.u[i]);
    wmax = std::max(wmax, prof.w[i]);
  }
  r.summary["u_max"] = umax;
  r.summary["w_max"] = wmax;
  if (prof.construction == Construction::exact) {
    // Closed-form profiles solve the zero-u-diffusion member; check there.
    ModelParams q = c.params;
    q.mu = 0.0;
    const auto wave = [&](double zz) { return exact_wave(zz, q); };
    double max_fd = 0.0;
    for (double z : prof.z) {
      const Residuals rf = tw_residual(wave, z, q);
      max_fd = std::max(max_fd, std::max(std::abs(rf.r_u), std::abs(rf.r_w)));
    }
    r.summary["max_residual_fd"] = max_fd;
  }
  r.summary["files"] = file_list(r.files_written);
  write_summary(c, r);
  return r;
}

}  // namespace detail

/// Run one scenario end to end: compute, write the data files and the JSON
/// summary into out_dir, and return the summary. Outputs are deterministic:
/// the same config produces byte-identical files.
inline RunReport run_scenario(const ScenarioConfig& c) {
  validate(c.params);
  if (c.command == "exact") return detail::run_exact(c);
  if (c.command == "limit") return detail::run_limit(c);
  if (c.command == "singular") return detail::run_singular(c);
  if (c.command == "manifolds") return detail::run_manifolds(c);
  if (c.command == "shoot") return detail::run_shoot(c);
  if (c.command == "converge") return detail::run_converge(c);
  if (c.command == "pde") return detail::run_pde(c);
  if (c.command == "validate") return detail::run_validate(c);
  throw Error("unknown command: " + c.command);
}

}  // namespace kswave
