#include "mirrorvis/validation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>

#include "mirrorvis/collapse.hpp"
#include "mirrorvis/exact.hpp"
#include "mirrorvis/master.hpp"
#include "mirrorvis/unravel.hpp"

namespace mirrorvis::validation {

namespace {

// Frozen targets for the collapse-model arithmetic. The eta values follow
// from the standard model parameters by pencil and paper; the deficit and
// coupling-bound windows are the experiment-scale figures the calculation
// is expected to reproduce.
constexpr Real eta_csl_si_expected = 5.641895835477563e20;   // 1e12 / sqrt(pi) * 1e4, cgs -> SI
constexpr Real eta_grw_nucleon_expected = 5e-3;              // (1/2) 1e-16 1e10 1e4
constexpr Real eta_grw_mirror_expected = 1.5e13;             // N = 3e15 nucleons
constexpr Real deficit_one_period_expected = 2.25e-9;        // (3/16) 0.6e21 (1e-13)^2 2e-3
constexpr Real gamma_bound_window_lo = 0.5e-24;              // cm^3/s
constexpr Real gamma_bound_window_hi = 2e-24;
constexpr Real gamma_fullerene_reference = 1e-19;            // cm^3/s, interference bound

core::PhysicalParams experiment_scale_params(Real eta_si) {
  core::PhysicalParams p;
  p.omega_c = 1.77e15;         // 1064 nm light; never enters the numbers below
  p.omega_m = two_pi / 2e-3;   // 500 Hz mechanical period
  p.sigma = 1e-13;             // chosen so ell = 4 kappa sigma = 1e-13 m
  p.kappa = 0.25;
  p.coupling_G = p.kappa * p.omega_m;
  p.eta = eta_si;
  return p;
}

struct Battery {
  const Options& opt;
  const std::function<void(const CheckResult&)>& on_check;
  std::vector<CheckResult> results;

  void push(std::string name, bool pass, Real measured, Real threshold) {
    results.push_back({std::move(name), pass, measured, threshold});
    if (on_check) on_check(results.back());
  }

  void check_below(std::string name, Real measured, Real threshold) {
    push(std::move(name), measured < threshold, measured, threshold);
  }

  void check_at_least(std::string name, Real measured, Real threshold) {
    push(std::move(name), measured >= threshold, measured, threshold);
  }

  // Reference coherence factor. flip_damping_sign turns the decay into
  // growth so every comparison against integrators and trajectories breaks.
  Complex f_ref(Real t) const {
    const Real sign = opt.flip_damping_sign ? 1.0 : -1.0;
    return exact::f_qm(t, opt.kappa) *
           std::exp(sign * 3.0 * opt.kappa * opt.kappa * opt.eta_hat *
                    exact::damping_envelope(t));
  }

  Real max_diff_to_ref(const exact::VisibilityCurve& curve) const {
    Real worst = 0;
    for (const auto& s : curve.samples)
      worst = std::max(worst, std::abs(s.f - f_ref(s.t)));
    return worst;
  }

  void collapse_numbers() {
    collapse::CollapseModelSpec csl;  // standard CSL parameters
    const Real eta_si = collapse::eta_csl(csl);
    check_below("csl_eta_si", std::abs(eta_si / eta_csl_si_expected - 1.0), 1e-12);
    // The exact value sits within 10% of the conventionally quoted 0.6e21.
    check_below("csl_eta_vs_rounded", std::abs(eta_si / 0.6e21 - 1.0), 0.10);

    collapse::CollapseModelSpec grw;
    grw.model = collapse::Model::Grw;
    check_below("grw_eta_per_nucleon",
                std::abs(collapse::eta_grw(grw) / eta_grw_nucleon_expected - 1.0), 1e-12);
    grw.n_nucleons = 3e15;
    const Real eta_mirror = collapse::eta_grw(grw);
    check_below("grw_eta_mirror", std::abs(eta_mirror / eta_grw_mirror_expected - 1.0), 1e-12);

    const Real ratio = eta_si / eta_mirror;
    check_at_least("csl_grw_ratio_low", ratio, 3e7);
    check_below("csl_grw_ratio_high", ratio, 3e8);

    const core::PhysicalParams phys = experiment_scale_params(eta_si);
    const Real lam = collapse::lambda_for_experiment(csl, phys);
    check_below("csl_lambda_one_period",
                std::abs(lam / deficit_one_period_expected - 1.0), 0.15);

    const Real gamma = collapse::gamma_bound(2e-3, phys, csl);
    check_at_least("csl_gamma_bound_low", gamma, gamma_bound_window_lo);
    check_below("csl_gamma_bound_high", gamma, gamma_bound_window_hi);
    check_below("gamma_bound_below_fullerene", gamma, gamma_fullerene_reference);

    // Experiment-scale deficit through the dimensionless pipeline.
    {
      RealVector t_seconds(2);
      t_seconds << 0.0, 2e-3;
      const core::SimParams dimless = core::nondimensionalize(phys, opt.n_trunc, t_seconds);
      const auto curve = exact::sample_curve(exact::Method::Exact, dimless);
      const Real deficit = 1.0 - curve.samples.back().nu;
      check_below("csl_visibility_deficit",
                  std::abs(deficit / deficit_one_period_expected - 1.0), 0.15);
    }
    {
      // Same number from the conventionally rounded eta = 0.6e21; the target
      // is exact for it, so the tolerance tightens to rounding noise.
      core::PhysicalParams rounded = experiment_scale_params(0.6e21);
      RealVector t_seconds(2);
      t_seconds << 0.0, 2e-3;
      const core::SimParams dimless = core::nondimensionalize(rounded, opt.n_trunc, t_seconds);
      const auto curve = exact::sample_curve(exact::Method::Exact, dimless);
      const Real deficit = 1.0 - curve.samples.back().nu;
      check_below("csl_visibility_deficit_rounded",
                  std::abs(deficit / deficit_one_period_expected - 1.0), 1e-3);
    }
  }

  void envelope_checks() {
    // The damping envelope never decreases: its derivative is
    // (2/3)(1 - cos t)^2. Probed as forward differences on a dense grid.
    const long n = 10000;
    Real min_diff = 0;
    Real prev = exact::damping_envelope(0.0);
    for (long i = 1; i < n; ++i) {
      const Real t = two_pi * static_cast<Real>(i) / static_cast<Real>(n - 1);
      const Real g = exact::damping_envelope(t);
      min_diff = std::min(min_diff, g - prev);
      prev = g;
    }
    check_at_least("envelope_monotone", min_diff, -1e-12);
  }

  void master_checks() {
    core::SimParams p;
    p.kappa = opt.kappa;
    p.eta_hat = opt.eta_hat;
    p.n_trunc = opt.n_trunc;
    p.t_grid = RealVector::LinSpaced(64, 0.0, two_pi);

    master::IntegratorConfig cfg;
    cfg.step = two_pi / static_cast<Real>(opt.rk4_steps_per_period);

    const auto curve_od = master::integrate_od(p, cfg);
    ComplexMatrix rho_final;
    const auto curve_full = master::integrate_full(p, cfg, &rho_final);

    check_below("od_vs_closed_form", max_diff_to_ref(curve_od), 1e-6);
    check_below("full_vs_closed_form", max_diff_to_ref(curve_full), 1e-6);

    Real od_vs_full = 0;
    for (std::size_t i = 0; i < curve_od.samples.size(); ++i)
      od_vs_full = std::max(od_vs_full,
                            std::abs(curve_od.samples[i].f - curve_full.samples[i].f));
    check_below("full_vs_od", od_vs_full, 1e-9);

    check_below("full_trace_preserved", std::abs(rho_final.trace().real() - 1.0) +
                                            std::abs(rho_final.trace().imag()),
                1e-10);
    check_below("full_hermiticity_drift",
                (rho_final - rho_final.adjoint().eval()).cwiseAbs().maxCoeff(), 1e-10);
    {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
          ComplexMatrix(0.5 * (rho_final + rho_final.adjoint())),
          Eigen::EigenvaluesOnly);
      check_at_least("full_positivity_floor", es.eigenvalues().minCoeff(), -1e-10);
    }

    // Unitary limit: after one period the magnitude revives to 1 and the
    // phase equals 2 pi kappa^2.
    {
      core::SimParams pu = p;
      pu.eta_hat = 0;
      pu.t_grid = RealVector(2);
      pu.t_grid << 0.0, two_pi;
      const auto curve = master::integrate_od(pu, cfg);
      const Complex f_end = curve.samples.back().f;
      check_below("unitary_visibility_revival", std::abs(std::abs(f_end) - 1.0), 1e-8);
      check_below("unitary_phase_revival",
                  std::abs(std::arg(f_end) - two_pi * opt.kappa * opt.kappa), 1e-8);
    }

    // Order probe: halving the step must shrink the error by about 2^4.
    {
      master::IntegratorConfig coarse = cfg, fine = cfg;
      coarse.step = two_pi / 256.0;
      fine.step = two_pi / 512.0;
      const Real err_coarse = max_diff_to_ref(master::integrate_od(p, coarse));
      const Real err_fine = max_diff_to_ref(master::integrate_od(p, fine));
      const Real ratio = err_coarse / err_fine;
      push("rk4_order_ratio", ratio >= 8.0 && ratio <= 32.0, ratio, 16.0);
    }

    // Truncation: the desk-scale displacement fits by n = 16. A basis two
    // levels short still leaks ~2e-7 into f, so the sweep tolerance sits at
    // 1e-7 to make n = 16 the first size that genuinely clears it.
    {
      const auto report = master::truncation_sweep(p, cfg, {6, 8, 12, 16, 32}, 1e-7);
      const Real converged = static_cast<Real>(report.converged_n);
      push("truncation_converged", report.converged_n > 0 && report.converged_n <= 16,
           converged, 16.0);
    }
  }

  void trajectory_checks() {
    core::SimParams p;
    p.kappa = opt.kappa;
    p.eta_hat = opt.eta_hat;
    p.n_trunc = opt.n_trunc;
    p.t_grid = RealVector::LinSpaced(5, 0.0, two_pi);

    unravel::TrajectoryConfig cfg;
    cfg.n_traj = opt.n_traj;
    cfg.step = two_pi / static_cast<Real>(opt.em_steps_per_period);
    cfg.seed = opt.seed;
    cfg.record_times = RealVector(3);
    cfg.record_times << 0.25 * two_pi, 0.5 * two_pi, two_pi;

    // Stochastic thresholds assume the pinned ensemble size; smaller quick
    // runs widen the standard-error ceiling accordingly.
    const Real stderr_scale =
        opt.n_traj < 10000 ? std::sqrt(10000.0 / static_cast<Real>(opt.n_traj)) : 1.0;

    {
      const auto est = unravel::estimate_f_linear(p, cfg);
      Real worst_sigmas = 0;
      for (const auto& r : est.records)
        worst_sigmas = std::max(worst_sigmas, std::abs(r.mean_f - f_ref(r.t)) / r.stderr_f);
      check_below("mc_linear_bias_sigmas", worst_sigmas, 3.0);
      check_below("mc_linear_stderr_final", est.records.back().stderr_f, 0.02 * stderr_scale);
      const auto& last = est.records.back();
      check_below("mc_linear_norm_martingale", std::abs(last.mean_norm2 - 1.0),
                  4.0 * last.stderr_norm2);
    }
    {
      const auto est = unravel::estimate_f_qmupl(p, cfg);
      Real worst_sigmas = 0;
      Real worst_norm = 0;
      for (const auto& r : est.records) {
        worst_sigmas = std::max(worst_sigmas, std::abs(r.mean_f - f_ref(r.t)) / r.stderr_f);
        worst_norm = std::max(worst_norm, std::abs(r.mean_norm2 - 1.0));
      }
      check_below("mc_qmupl_bias_sigmas", worst_sigmas, 3.0);
      check_below("mc_qmupl_stderr_final", est.records.back().stderr_f, 0.02 * stderr_scale);
      check_below("mc_qmupl_norm_unit", worst_norm, 1e-12);
    }
    {
      // Identical seeds must reproduce identical bits.
      unravel::TrajectoryConfig small = cfg;
      small.n_traj = 128;
      small.step = two_pi / 1024.0;
      small.record_times = RealVector(1);
      small.record_times << 0.5 * two_pi;
      const auto a = unravel::estimate_f_linear(p, small);
      const auto b = unravel::estimate_f_linear(p, small);
      const Real diff = std::abs(a.records[0].mean_f - b.records[0].mean_f) +
                        std::abs(a.records[0].stderr_f - b.records[0].stderr_f);
      push("rerun_bitwise_identical", diff == 0.0, diff, 0.0);
    }
  }
};

}  // namespace

std::string format_check(const CheckResult& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "CHECK %s: %s measured=%.9g threshold=%.9g",
                c.name.c_str(), c.pass ? "PASS" : "FAIL", c.measured, c.threshold);
  return buf;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::vector<CheckResult> run_battery(
    const Options& opt, const std::function<void(const CheckResult&)>& on_check) {
  Battery b{opt, on_check, {}};
  b.collapse_numbers();
  b.envelope_checks();
  b.master_checks();
  b.trajectory_checks();
  return std::move(b.results);
}

}  // namespace mirrorvis::validation
