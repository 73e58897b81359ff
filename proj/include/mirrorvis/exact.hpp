#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorvis/core.hpp"

namespace mirrorvis::exact {

// Every route to the fringe contrast implemented by this library.
enum class Method {
  Exact,          // closed form with position-localization damping
  QmOnly,         // unitary evolution, no localization
  Heuristic,      // static-separation exponential damping
  MasterFull,     // density-matrix integration, both photon branches
  MasterOd,       // integration of the off-diagonal block alone
  UnravelLinear,  // stochastic trajectories, linear unraveling
  UnravelQmupl,   // stochastic trajectories, norm-preserving unraveling
};

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view name);

struct VisibilitySample {
  Real t = 0;       // dimensionless time omega_m * t_seconds
  Complex f{0, 0};  // off-diagonal coherence factor, f(0) = 1
  Real nu = 0;      // fringe visibility |f|
};

struct VisibilityCurve {
  std::vector<VisibilitySample> samples;
  Method method = Method::Exact;
  std::map<std::string, std::string> meta;
};

// Mirror displacement amplitude on the photon-in-cavity branch,
// alpha(t) = kappa (1 - e^{-it}).
Complex coherent_amplitude(Real t, Real kappa);

// Unitary coherence factor e^{i kappa^2 (t - sin t)} e^{-kappa^2 (1 - cos t)}.
// Periodic revivals: |f_qm(2 pi k)| = 1 with phase 2 pi k kappa^2.
Complex f_qm(Real t, Real kappa);

// Localization damping envelope g(t) = t - (4/3) sin t + (1/6) sin 2t.
// Non-decreasing, g(t) ~ t^5/30 at small t, g(2 pi) = 2 pi.
Real damping_envelope(Real t);

// Coherence factor with localization: f_qm * exp(-3 kappa^2 eta_hat g(t)).
Complex f_exact(Real t, Real kappa, Real eta_hat);

Real visibility(Real t, Real kappa, Real eta_hat);

// Damping at the fixed maximal separation ell = 4 kappa sigma:
// f_qm * exp(-8 kappa^2 eta_hat t). Overestimates the true decay.
Complex f_heuristic(Real t, Real kappa, Real eta_hat);

// Visibility deficit exponent accumulated over one mechanical period,
// (3/16) eta ell^2 (2 pi / omega_m). Dimensionless.
Real lambda_damping(const core::PhysicalParams& p);

// Evaluates one of the closed-form methods (Exact, QmOnly, Heuristic) on
// params.t_grid. Integration-based methods have their own entry points and
// are rejected here.
VisibilityCurve sample_curve(Method method, const core::SimParams& params);

}  // namespace mirrorvis::exact
