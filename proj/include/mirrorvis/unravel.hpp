#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mirrorvis/exact.hpp"

namespace mirrorvis::unravel {

struct TrajectoryConfig {
  long n_traj = 10000;
  Real step = two_pi / 8192;  // Euler-Maruyama substep ceiling
  std::uint64_t seed = 1;
  // Where ensemble statistics are taken; ascending, first entry >= 0. Each
  // interval is covered by equal substeps no longer than `step`.
  RealVector record_times;
};

void validate(const TrajectoryConfig& cfg);

struct EnsembleRecord {
  Real t = 0;
  Complex mean_f{0, 0};
  Real stderr_f = 0;      // larger of the two componentwise standard errors
  Real mean_norm2 = 0;    // linear: branch-A squared norm (martingale at 1);
                          // norm-preserving: 1 up to rounding
  Real stderr_norm2 = 0;
};

struct EnsembleEstimate {
  std::vector<EnsembleRecord> records;
  long n_traj = 0;
  std::uint64_t seed = 0;
  exact::Method method = exact::Method::UnravelLinear;
};

using StatePair = std::pair<MirrorState, MirrorState>;

// One Euler-Maruyama step of the linear unraveling. Both branch states ride
// the same noise increment dw; norms are not restored, their decay carries
// the localization physics and the estimator needs them raw.
StatePair step_linear(const StatePair& phi, Real dw, const core::SimParams& p,
                      Real step);

// One step of the norm-preserving nonlinear unraveling on the 2 n_trunc
// product state (branch A amplitudes first). Input must be normalized;
// output is renormalized.
ComplexVector step_qmupl(const ComplexVector& psi, Real dw,
                         const core::SimParams& p, Real step);

// Ensemble mean of <phi_B|phi_A> over cfg.n_traj independent trajectory
// pairs. Unbiased for the off-diagonal coherence factor; the per-trajectory
// estimate is linear in the state pair, so plain averaging applies.
EnsembleEstimate estimate_f_linear(const core::SimParams& p,
                                   const TrajectoryConfig& cfg);

// Ensemble mean of 2 <psi_B|psi_A> over norm-preserving trajectories.
EnsembleEstimate estimate_f_qmupl(const core::SimParams& p,
                                  const TrajectoryConfig& cfg);

}  // namespace mirrorvis::unravel
