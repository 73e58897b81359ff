#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mirrorvis/exact.hpp"

namespace mirrorvis::master {

enum class Scheme {
  FixedRk4,         // classical RK4 with a fixed substep
  Rk4StepDoubling,  // per-interval step halving until the result settles
};

std::string_view to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view name);

struct IntegratorConfig {
  Real step = two_pi / 4096;  // dimensionless substep ceiling
  Scheme scheme = Scheme::FixedRk4;
  Real tol = 1e-9;  // settle tolerance for Rk4StepDoubling
  int positivity_check_interval = 64;  // substeps between spectrum checks
};

void validate(const IntegratorConfig& cfg);

// Two-branch density matrix at t = 0: photon in the equal superposition of
// the branches, mirror in its ground state. Indices [0, n_trunc) belong to
// the branch whose arm carries the movable mirror, [n_trunc, 2 n_trunc) to
// the other. All four blocks equal |0><0| / 2.
ComplexMatrix initial_full_state(int n_trunc);

// Coherence factor f = 2 Tr_m <A| rho |B> of a 2N x 2N state.
Complex extract_f(const ComplexMatrix& rho_full);

// Generator of the dissipative dynamics, d rho/dt, for the full two-branch
// state. The double commutator with the position operator enters with
// rate eta_hat.
ComplexMatrix lindblad_rhs_full(const ComplexMatrix& rho, const core::SimParams& p);

// Same generator restricted to the off-diagonal block rho_od = 2 <A| rho |B>,
// which evolves autonomously: branch-A Hamiltonian from the left, branch-B
// from the right, identical double-commutator damping.
ComplexMatrix lindblad_rhs_od(const ComplexMatrix& rho_od, const core::SimParams& p);

// Integrates the full 2N x 2N state over p.t_grid and samples f at every
// grid point. Positivity of the spectrum is monitored (not enforced) every
// positivity_check_interval substeps; violations beyond 1e-6 and non-finite
// entries raise NumericalFailure. final_state, when given, receives the
// state at the last grid point (trace and hermiticity drift live there).
exact::VisibilityCurve integrate_full(const core::SimParams& p,
                                      const IntegratorConfig& cfg,
                                      ComplexMatrix* final_state = nullptr);

// Integrates the N x N off-diagonal block alone. Identical sampling rules;
// no spectrum to monitor.
exact::VisibilityCurve integrate_od(const core::SimParams& p,
                                    const IntegratorConfig& cfg,
                                    ComplexMatrix* final_state = nullptr);

struct TruncationPair {
  int n_small = 0;
  int n_large = 0;
  Real max_diff = 0;  // max over t_grid of |f at n_large - f at n_small|
};

struct TruncationReport {
  std::vector<TruncationPair> pairs;
  int converged_n = -1;  // smallest n whose step to the next is below tol
};

// Re-integrates the off-diagonal block at each truncation in n_list
// (ascending, at least two entries) and compares consecutive results.
TruncationReport truncation_sweep(const core::SimParams& p,
                                  const IntegratorConfig& cfg,
                                  const std::vector<int>& n_list, Real tol);

}  // namespace mirrorvis::master
