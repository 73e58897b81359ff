#pragma once

#include <optional>

#include "mirrorvis/errors.hpp"
#include "mirrorvis/types.hpp"

namespace mirrorvis::core {

// Parameters of the optomechanical interferometer in SI units.
//
// omega_c only ever contributes a global photon phase and is carried
// for bookkeeping; every simulated quantity depends on (kappa, eta_hat)
// alone once times are measured in units of 1/omega_m.
struct PhysicalParams {
  Real omega_c = 0;            // cavity photon angular frequency [rad/s]
  Real omega_m = 0;            // mirror angular frequency [rad/s]
  std::optional<Real> mass;    // mirror mass [kg]
  Real sigma = 0;              // ground-state width sqrt(hbar/(2 m omega_m)) [m]
  Real coupling_G = 0;         // single-photon displacement coupling [rad/s]
  Real kappa = 0;              // coupling_G / omega_m
  Real eta = 0;                // position-localization rate [1/(s m^2)]

  // Maximum wave-packet separation reached at half a mirror period.
  Real ell() const { return 4.0 * kappa * sigma; }
};

// Derives whichever of {kappa, coupling_G} and {sigma, mass} was left at
// zero/empty from its counterpart, then validates. Throws InvalidParams on
// nonpositive frequencies or widths, negative eta, or an inconsistent
// kappa/coupling_G or sigma/mass combination.
PhysicalParams finalize(PhysicalParams p);

void validate(const PhysicalParams& p);

// Dimensionless description actually consumed by the dynamics code.
// Times are omega_m * t; eta_hat = eta * sigma^2 / omega_m.
struct SimParams {
  Real kappa = 0;
  Real eta_hat = 0;
  int n_trunc = 32;
  RealVector t_grid;  // ascending, t_grid[0] == 0
};

void validate(const SimParams& p);

SimParams nondimensionalize(const PhysicalParams& p, int n_trunc,
                            const RealVector& t_grid_seconds);

// Inverse of nondimensionalize for a given unit system. mass is optional
// and only consistency-checked against sigma when present.
struct Redimensioned {
  PhysicalParams params;
  RealVector t_grid_seconds;
};

Redimensioned redimensionalize(const SimParams& p, Real omega_c, Real omega_m,
                               Real sigma, std::optional<Real> mass = {});

enum class OperatorKind {
  Annihilation,  // b
  Creation,      // b^dag
  Position,      // b + b^dag, i.e. q / sigma
  HamiltonianA,  // b^dag b - kappa (b + b^dag), photon-in-cavity branch
  HamiltonianB,  // b^dag b, empty branch
  General,       // anything assembled by hand; make_operator rejects it
};

struct FockOperator {
  OperatorKind kind = OperatorKind::General;
  ComplexMatrix entries;
};

// Dense n_trunc x n_trunc matrix of the requested operator in the number
// basis. kappa is only read for HamiltonianA.
FockOperator make_operator(OperatorKind kind, int n_trunc, Real kappa = 0);

// Coherent state |alpha> truncated to n_trunc amplitudes and renormalized.
// Amplitudes are accumulated by the ratio recurrence c_n = c_{n-1} alpha/sqrt(n);
// no factorials are ever formed. Throws TruncationLeakage when the weight
// outside the basis exceeds leakage_tol.
MirrorState coherent_state(Complex alpha, int n_trunc, Real leakage_tol = 1e-12);

// <a|b> with the conjugate on a. Dimension mismatch throws InvalidParams.
Complex overlap(const MirrorState& a, const MirrorState& b);

}  // namespace mirrorvis::core
