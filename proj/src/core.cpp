#include "mirrorvis/core.hpp"

#include <cmath>
#include <sstream>

namespace mirrorvis::core {

namespace {

bool close_rel(Real a, Real b, Real rtol) {
  return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

[[noreturn]] void fail(const std::string& what) { throw InvalidParams(what); }

}  // namespace

void validate(const PhysicalParams& p) {
  if (!(p.omega_c > 0) || !std::isfinite(p.omega_c)) fail("omega_c must be positive");
  if (!(p.omega_m > 0) || !std::isfinite(p.omega_m)) fail("omega_m must be positive");
  if (!(p.sigma > 0) || !std::isfinite(p.sigma)) fail("sigma must be positive");
  if (!(p.coupling_G > 0) || !std::isfinite(p.coupling_G)) fail("coupling_G must be positive");
  if (!(p.kappa > 0) || !std::isfinite(p.kappa)) fail("kappa must be positive");
  if (p.eta < 0 || !std::isfinite(p.eta)) fail("eta must be non-negative");
  if (!close_rel(p.kappa, p.coupling_G / p.omega_m, 1e-12))
    fail("kappa and coupling_G/omega_m disagree");
  if (p.mass) {
    if (!(*p.mass > 0) || !std::isfinite(*p.mass)) fail("mass must be positive");
    const Real sigma_of_mass = std::sqrt(hbar_si / (2.0 * *p.mass * p.omega_m));
    if (!close_rel(p.sigma, sigma_of_mass, 1e-9))
      fail("sigma and sqrt(hbar/(2 m omega_m)) disagree");
  }
}

PhysicalParams finalize(PhysicalParams p) {
  if (!(p.omega_m > 0) || !std::isfinite(p.omega_m)) fail("omega_m must be positive");
  if (p.kappa == 0 && p.coupling_G != 0) {
    p.kappa = p.coupling_G / p.omega_m;
  } else if (p.coupling_G == 0 && p.kappa != 0) {
    p.coupling_G = p.kappa * p.omega_m;
  } else if (p.kappa == 0 && p.coupling_G == 0) {
    fail("one of kappa, coupling_G is required");
  }
  if (p.sigma == 0) {
    if (!p.mass) fail("one of sigma, mass is required");
    if (!(*p.mass > 0) || !std::isfinite(*p.mass)) fail("mass must be positive");
    p.sigma = std::sqrt(hbar_si / (2.0 * *p.mass * p.omega_m));
  }
  validate(p);
  return p;
}

void validate(const SimParams& p) {
  if (p.kappa < 0 || !std::isfinite(p.kappa)) fail("kappa must be non-negative");
  if (p.eta_hat < 0 || !std::isfinite(p.eta_hat)) fail("eta_hat must be non-negative");
  if (p.n_trunc < 2) fail("n_trunc must be at least 2");
  if (p.t_grid.size() == 0) fail("t_grid must not be empty");
  if (p.t_grid[0] != 0.0) fail("t_grid must start at 0");
  for (Eigen::Index i = 0; i + 1 < p.t_grid.size(); ++i)
    if (!(p.t_grid[i] < p.t_grid[i + 1])) fail("t_grid must be strictly ascending");
  if (!p.t_grid.allFinite()) fail("t_grid entries must be finite");
}

SimParams nondimensionalize(const PhysicalParams& p, int n_trunc,
                            const RealVector& t_grid_seconds) {
  validate(p);
  SimParams s;
  s.kappa = p.kappa;
  s.eta_hat = p.eta * p.sigma * p.sigma / p.omega_m;
  s.n_trunc = n_trunc;
  s.t_grid = p.omega_m * t_grid_seconds;
  validate(s);
  return s;
}

Redimensioned redimensionalize(const SimParams& p, Real omega_c, Real omega_m,
                               Real sigma, std::optional<Real> mass) {
  validate(p);
  if (!(p.kappa > 0)) fail("redimensionalize needs kappa > 0");
  PhysicalParams phys;
  phys.omega_c = omega_c;
  phys.omega_m = omega_m;
  phys.mass = mass;
  phys.sigma = sigma;
  phys.kappa = p.kappa;
  phys.coupling_G = p.kappa * omega_m;
  phys.eta = p.eta_hat * omega_m / (sigma * sigma);
  return {finalize(phys), RealVector(p.t_grid / omega_m)};
}

FockOperator make_operator(OperatorKind kind, int n_trunc, Real kappa) {
  if (n_trunc < 2) fail("n_trunc must be at least 2");
  const int n = n_trunc;
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) b(k - 1, k) = std::sqrt(Real(k));

  ComplexMatrix out;
  switch (kind) {
    case OperatorKind::Annihilation:
      out = b;
      break;
    case OperatorKind::Creation:
      out = b.adjoint();
      break;
    case OperatorKind::Position:
      out = b + b.adjoint().eval();
      break;
    case OperatorKind::HamiltonianA: {
      if (!std::isfinite(kappa)) fail("kappa must be finite");
      out = ComplexMatrix::Zero(n, n);
      for (int k = 0; k < n; ++k) out(k, k) = Real(k);
      out -= kappa * (b + b.adjoint().eval());
      break;
    }
    case OperatorKind::HamiltonianB: {
      out = ComplexMatrix::Zero(n, n);
      for (int k = 0; k < n; ++k) out(k, k) = Real(k);
      break;
    }
    case OperatorKind::General:
      fail("make_operator: unknown kind tag");
  }
  return {kind, std::move(out)};
}

MirrorState coherent_state(Complex alpha, int n_trunc, Real leakage_tol) {
  if (n_trunc < 2) fail("n_trunc must be at least 2");
  if (!(leakage_tol > 0)) fail("leakage_tol must be positive");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    fail("alpha must be finite");

  MirrorState amps(n_trunc);
  amps[0] = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < n_trunc; ++k) amps[k] = amps[k - 1] * alpha / std::sqrt(Real(k));

  const Real captured = amps.squaredNorm();
  const Real leaked = std::max(0.0, 1.0 - captured);
  if (leaked > leakage_tol) {
    std::ostringstream msg;
    msg << "coherent_state: |alpha| = " << std::abs(alpha) << " leaks " << leaked
        << " probability outside n_trunc = " << n_trunc;
    throw TruncationLeakage(msg.str(), leaked);
  }
  return amps / std::sqrt(captured);
}

Complex overlap(const MirrorState& a, const MirrorState& b) {
  if (a.size() != b.size() || a.size() == 0)
    fail("overlap: dimension mismatch");
  return a.dot(b);
}

}  // namespace mirrorvis::core
