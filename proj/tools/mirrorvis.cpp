// Command-line front end: visibility curves, collapse-model parameter
// reports, the cross-validation battery, and truncation sweeps, all driven
// by flat key = value config files.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mirrorvis/collapse.hpp"
#include "mirrorvis/config.hpp"
#include "mirrorvis/io.hpp"
#include "mirrorvis/master.hpp"
#include "mirrorvis/unravel.hpp"
#include "mirrorvis/validation.hpp"

namespace mv = mirrorvis;
using mv::Real;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;  // overrides the config `out` key when set
  std::optional<std::uint64_t> seed;
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mv::InvalidParams("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw mv::InvalidParams("failed writing output file '" + path + "'");
}

std::string resolve_out(const CommonArgs& args, const mv::config::KeyValues& kv) {
  if (!args.out_path.empty()) return args.out_path;
  return kv.get_string("out", "");
}

mv::collapse::CollapseModelSpec model_spec_from(const mv::config::KeyValues& kv) {
  mv::collapse::CollapseModelSpec spec;
  const std::string name = kv.get_string("model");
  const auto model = mv::collapse::model_from_string(name);
  if (!model) throw mv::InvalidParams("unknown collapse model '" + name + "'");
  spec.model = *model;
  spec.lambda_grw = kv.get_real("lambda_grw", spec.lambda_grw);
  spec.alpha_cm2 = kv.get_real("alpha", spec.alpha_cm2);
  spec.n_nucleons = kv.get_real("n_nucleons", spec.n_nucleons);
  spec.gamma_csl = kv.get_real("gamma_csl", spec.gamma_csl);
  spec.density_cm3 = kv.get_real("density", spec.density_cm3);
  spec.side_cm = kv.get_real("side", spec.side_cm);
  if (spec.model == mv::collapse::Model::Direct) {
    if (!kv.has("eta")) throw mv::InvalidParams("model = direct needs the eta key");
    spec.eta_direct = kv.get_real("eta");
  }
  return spec;
}

mv::core::PhysicalParams physical_from(const mv::config::KeyValues& kv, Real eta_si) {
  mv::core::PhysicalParams p;
  p.omega_c = kv.get_real("omega_c");
  p.omega_m = kv.get_real("omega_m");
  if (kv.has("sigma")) p.sigma = kv.get_real("sigma");
  if (kv.has("mass")) p.mass = kv.get_real("mass");
  p.kappa = kv.get_real("kappa", 0.0);
  p.coupling_G = kv.get_real("coupling_G", 0.0);
  p.eta = eta_si;
  return mv::core::finalize(p);
}

// Dimensionless parameters from either style of config: (kappa, eta_hat)
// directly, or the physical block reduced through nondimensionalize.
mv::core::SimParams sim_params_from(const mv::config::KeyValues& kv) {
  const long grid_points = kv.get_long("grid_points", 65);
  const Real grid_periods = kv.get_real("grid_periods", 1.0);
  if (grid_points < 2) throw mv::InvalidParams("grid_points must be at least 2");
  if (!(grid_periods > 0)) throw mv::InvalidParams("grid_periods must be positive");
  const int n_trunc = static_cast<int>(kv.get_long("n_trunc", 32));

  if (kv.has("eta_hat")) {
    for (const char* key : {"omega_c", "omega_m", "sigma", "mass", "coupling_G",
                            "eta", "model"})
      if (kv.has(key))
        throw mv::InvalidParams(std::string("eta_hat excludes the physical key '") +
                                key + "'");
    mv::core::SimParams p;
    p.kappa = kv.get_real("kappa");
    p.eta_hat = kv.get_real("eta_hat");
    p.n_trunc = n_trunc;
    p.t_grid = mv::RealVector::LinSpaced(grid_points, 0.0,
                                         grid_periods * mv::two_pi);
    mv::core::validate(p);
    return p;
  }

  Real eta_si = 0;
  if (kv.has("model")) {
    if (kv.has("eta") && model_spec_from(kv).model != mv::collapse::Model::Direct)
      throw mv::InvalidParams("give either eta or a collapse model, not both");
    eta_si = mv::collapse::eta_for_model(model_spec_from(kv));
  } else if (kv.has("eta")) {
    eta_si = kv.get_real("eta");
  } else {
    throw mv::InvalidParams(
        "localization strength missing: give eta_hat, eta, or model");
  }
  const mv::core::PhysicalParams phys = physical_from(kv, eta_si);
  const mv::RealVector t_seconds = mv::RealVector::LinSpaced(
      grid_points, 0.0, grid_periods * mv::two_pi / phys.omega_m);
  return mv::core::nondimensionalize(phys, n_trunc, t_seconds);
}

const std::set<std::string> curve_keys = {
    "method", "kappa", "eta_hat", "omega_c", "omega_m", "sigma", "mass",
    "coupling_G", "eta", "model", "lambda_grw", "alpha", "n_nucleons",
    "gamma_csl", "density", "side", "grid_points", "grid_periods", "n_trunc",
    "rk4_steps_per_period", "scheme", "tol", "n_traj", "em_steps_per_period",
    "seed", "out"};

int cmd_curve(const CommonArgs& args) {
  const auto kv = mv::config::KeyValues::parse_file(args.config_path);
  kv.require_known(curve_keys);

  const std::string method_name = kv.get_string("method");
  const auto method = mv::exact::method_from_string(method_name);
  if (!method) throw mv::InvalidParams("unknown method '" + method_name + "'");

  const mv::core::SimParams p = sim_params_from(kv);

  std::map<std::string, std::string> meta;
  meta["tool"] = "mirrorvis " + std::string(mv::io::tool_version);
  meta["command"] = "curve";
  meta["method"] = std::string(mv::exact::to_string(*method));
  meta["kappa"] = mv::io::format_real(p.kappa);
  meta["eta_hat"] = mv::io::format_real(p.eta_hat);
  meta["grid_points"] = std::to_string(p.t_grid.size());
  meta["grid_periods"] = mv::io::format_real(kv.get_real("grid_periods", 1.0));

  std::ostringstream body;
  Real nu_end = 0;
  std::size_t rows = 0;

  switch (*method) {
    case mv::exact::Method::Exact:
    case mv::exact::Method::QmOnly:
    case mv::exact::Method::Heuristic: {
      auto curve = mv::exact::sample_curve(*method, p);
      curve.meta = meta;
      mv::io::write_curve_csv(body, curve);
      nu_end = curve.samples.back().nu;
      rows = curve.samples.size();
      break;
    }
    case mv::exact::Method::MasterFull:
    case mv::exact::Method::MasterOd: {
      mv::master::IntegratorConfig cfg;
      cfg.step = mv::two_pi / static_cast<Real>(kv.get_long("rk4_steps_per_period", 4096));
      const std::string scheme_name = kv.get_string("scheme", "fixed-rk4");
      const auto scheme = mv::master::scheme_from_string(scheme_name);
      if (!scheme) throw mv::InvalidParams("unknown scheme '" + scheme_name + "'");
      cfg.scheme = *scheme;
      cfg.tol = kv.get_real("tol", 1e-9);
      meta["n_trunc"] = std::to_string(p.n_trunc);
      meta["step"] = mv::io::format_real(cfg.step);
      meta["scheme"] = scheme_name;
      meta["tol"] = mv::io::format_real(cfg.tol);
      auto curve = *method == mv::exact::Method::MasterFull
                       ? mv::master::integrate_full(p, cfg)
                       : mv::master::integrate_od(p, cfg);
      curve.meta = meta;
      mv::io::write_curve_csv(body, curve);
      nu_end = curve.samples.back().nu;
      rows = curve.samples.size();
      break;
    }
    case mv::exact::Method::UnravelLinear:
    case mv::exact::Method::UnravelQmupl: {
      mv::unravel::TrajectoryConfig cfg;
      cfg.n_traj = kv.get_long("n_traj", 10000);
      cfg.step = mv::two_pi / static_cast<Real>(kv.get_long("em_steps_per_period", 8192));
      cfg.seed = args.seed ? *args.seed : kv.get_u64("seed", 1);
      cfg.record_times = p.t_grid;
      meta["n_trunc"] = std::to_string(p.n_trunc);
      meta["step"] = mv::io::format_real(cfg.step);
      meta["n_traj"] = std::to_string(cfg.n_traj);
      meta["seed"] = std::to_string(cfg.seed);
      const auto est = *method == mv::exact::Method::UnravelLinear
                           ? mv::unravel::estimate_f_linear(p, cfg)
                           : mv::unravel::estimate_f_qmupl(p, cfg);
      mv::io::write_estimate_csv(body, est, meta);
      nu_end = std::abs(est.records.back().mean_f);
      rows = est.records.size();
      break;
    }
  }

  const std::string out = resolve_out(args, kv);
  write_output(out, body.str());
  if (!out.empty() && out != "-") {
    std::cout << "wrote " << out << " (" << rows << " rows)\n";
    std::cout << "visibility at final grid point: " << std::min(1.0, nu_end) << "\n";
  }
  return 0;
}

const std::set<std::string> params_keys = {
    "model", "lambda_grw", "alpha", "n_nucleons", "gamma_csl", "density",
    "side", "eta", "accuracy", "omega_c", "omega_m", "sigma", "mass",
    "coupling_G", "kappa", "out"};

int cmd_params(const CommonArgs& args) {
  const auto kv = mv::config::KeyValues::parse_file(args.config_path);
  kv.require_known(params_keys);

  const auto spec = model_spec_from(kv);
  const Real eta_si = mv::collapse::eta_for_model(spec);
  const auto phys = physical_from(kv, eta_si);
  const Real accuracy = kv.get_real("accuracy", 2e-3);

  const Real eta_hat = phys.eta * phys.sigma * phys.sigma / phys.omega_m;
  const Real lambda = mv::exact::lambda_damping(phys);
  const Real deficit = 1.0 - mv::exact::visibility(mv::two_pi, phys.kappa, eta_hat);
  const Real gamma = mv::collapse::gamma_bound(accuracy, phys, spec);

  std::ostringstream body;
  const auto line = [&body](const std::string& key, const std::string& value) {
    body << key << " = " << value << "\n";
  };
  const auto fline = [&](const std::string& key, Real value) {
    line(key, mv::io::format_real(value));
  };
  line("tool", "mirrorvis " + std::string(mv::io::tool_version));
  line("command", "params");
  line("model", std::string(mv::collapse::to_string(spec.model)));
  fline("eta_si", eta_si);
  fline("eta_cgs", eta_si / mv::collapse::per_cm2_to_per_m2);
  fline("eta_hat", eta_hat);
  fline("kappa", phys.kappa);
  fline("sigma_m", phys.sigma);
  fline("ell_m", phys.ell());
  fline("omega_m", phys.omega_m);
  fline("period_s", mv::two_pi / phys.omega_m);
  fline("lambda_damping", lambda);
  fline("visibility_deficit_one_period", deficit);
  fline("accuracy", accuracy);
  fline("gamma_bound_cm3_s", gamma);
  line("gamma_bound_fullerene_reference_cm3_s", "1e-19");

  const std::string out = resolve_out(args, kv);
  write_output(out, body.str());
  if (!out.empty() && out != "-")
    std::cout << "wrote " << out << "\n";
  return 0;
}

const std::set<std::string> validate_keys = {
    "kappa", "eta_hat", "n_trunc", "rk4_steps_per_period",
    "em_steps_per_period", "n_traj", "seed", "flip_damping_sign", "out"};

int cmd_validate(const CommonArgs& args) {
  const auto kv = mv::config::KeyValues::parse_file(args.config_path);
  kv.require_known(validate_keys);

  mv::validation::Options opt;
  opt.kappa = kv.get_real("kappa", opt.kappa);
  opt.eta_hat = kv.get_real("eta_hat", opt.eta_hat);
  opt.n_trunc = static_cast<int>(kv.get_long("n_trunc", opt.n_trunc));
  opt.rk4_steps_per_period = kv.get_long("rk4_steps_per_period", opt.rk4_steps_per_period);
  opt.em_steps_per_period = kv.get_long("em_steps_per_period", opt.em_steps_per_period);
  opt.n_traj = kv.get_long("n_traj", opt.n_traj);
  opt.seed = args.seed ? *args.seed : kv.get_u64("seed", opt.seed);
  opt.flip_damping_sign = kv.get_bool("flip_damping_sign", false);

  std::ostringstream buffer;
  const auto results = mv::validation::run_battery(opt, [&](const auto& check) {
    const std::string text = mv::validation::format_check(check);
    std::cout << text << "\n" << std::flush;
    buffer << text << "\n";
  });

  std::size_t passed = 0;
  for (const auto& c : results) passed += c.pass ? 1 : 0;
  const bool ok = mv::validation::all_pass(results);
  std::ostringstream summary;
  summary << "RESULT: " << (ok ? "PASS" : "FAIL") << " (" << passed << "/"
          << results.size() << " checks)\n";
  std::cout << summary.str();
  buffer << summary.str();

  const std::string out = resolve_out(args, kv);
  if (!out.empty() && out != "-") write_output(out, buffer.str());
  return ok ? 0 : 1;
}

const std::set<std::string> sweep_keys = {
    "kappa", "eta_hat", "grid_points", "grid_periods", "rk4_steps_per_period",
    "scheme", "tol", "n_list", "sweep_tol", "out"};

int cmd_sweep(const CommonArgs& args) {
  const auto kv = mv::config::KeyValues::parse_file(args.config_path);
  kv.require_known(sweep_keys);

  const auto n_list = kv.get_int_list("n_list");
  mv::core::SimParams p;
  p.kappa = kv.get_real("kappa");
  p.eta_hat = kv.get_real("eta_hat");
  p.n_trunc = n_list.empty() ? 2 : n_list.back();
  const long grid_points = kv.get_long("grid_points", 65);
  const Real grid_periods = kv.get_real("grid_periods", 1.0);
  if (grid_points < 2) throw mv::InvalidParams("grid_points must be at least 2");
  if (!(grid_periods > 0)) throw mv::InvalidParams("grid_periods must be positive");
  p.t_grid = mv::RealVector::LinSpaced(grid_points, 0.0, grid_periods * mv::two_pi);
  mv::core::validate(p);

  mv::master::IntegratorConfig cfg;
  cfg.step = mv::two_pi / static_cast<Real>(kv.get_long("rk4_steps_per_period", 4096));
  const std::string scheme_name = kv.get_string("scheme", "fixed-rk4");
  const auto scheme = mv::master::scheme_from_string(scheme_name);
  if (!scheme) throw mv::InvalidParams("unknown scheme '" + scheme_name + "'");
  cfg.scheme = *scheme;
  cfg.tol = kv.get_real("tol", 1e-9);
  const Real sweep_tol = kv.get_real("sweep_tol", 1e-9);

  const auto report = mv::master::truncation_sweep(p, cfg, n_list, sweep_tol);

  std::ostringstream body;
  body << "# tool = mirrorvis " << mv::io::tool_version << "\n";
  body << "# command = sweep\n";
  body << "# kappa = " << mv::io::format_real(p.kappa) << "\n";
  body << "# eta_hat = " << mv::io::format_real(p.eta_hat) << "\n";
  body << "# sweep_tol = " << mv::io::format_real(sweep_tol) << "\n";
  body << "n_small,n_large,max_abs_df\n";
  for (const auto& pair : report.pairs)
    body << pair.n_small << ',' << pair.n_large << ','
         << mv::io::format_real(pair.max_diff) << "\n";
  body << "# converged_n = " << report.converged_n << "\n";

  const std::string out = resolve_out(args, kv);
  write_output(out, body.str());
  if (!out.empty() && out != "-") std::cout << "wrote " << out << "\n";
  std::cout << "converged_n = " << report.converged_n << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fringe-visibility simulation for the superposed-mirror interferometer"};
  app.set_version_flag("--version", "mirrorvis " + std::string(mv::io::tool_version));
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&args](CLI::App* sub, bool with_seed) {
    sub->add_option("--config", args.config_path, "flat key = value config file")
        ->required();
    sub->add_option("--out", args.out_path,
                    "output file (overrides the config `out` key; default stdout)");
    if (with_seed)
      sub->add_option("--seed", args.seed, "override the ensemble seed");
  };

  CLI::App* curve = app.add_subcommand("curve", "visibility curve by any method");
  add_common(curve, true);
  CLI::App* params = app.add_subcommand("params", "collapse-model parameter report");
  add_common(params, false);
  CLI::App* validate = app.add_subcommand("validate", "run the cross-validation battery");
  add_common(validate, true);
  CLI::App* sweep = app.add_subcommand("sweep", "Fock-truncation convergence sweep");
  add_common(sweep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (curve->parsed()) return cmd_curve(args);
    if (params->parsed()) return cmd_params(args);
    if (validate->parsed()) return cmd_validate(args);
    if (sweep->parsed()) return cmd_sweep(args);
  } catch (const mv::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const mv::InvalidParams& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
