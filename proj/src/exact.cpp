#include "mirrorvis/exact.hpp"

#include <cmath>

namespace mirrorvis::exact {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::QmOnly: return "qm-only";
    case Method::Heuristic: return "heuristic";
    case Method::MasterFull: return "master-full";
    case Method::MasterOd: return "master-od";
    case Method::UnravelLinear: return "unravel-linear";
    case Method::UnravelQmupl: return "unravel-qmupl";
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
  for (Method m : {Method::Exact, Method::QmOnly, Method::Heuristic,
                   Method::MasterFull, Method::MasterOd, Method::UnravelLinear,
                   Method::UnravelQmupl}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

Complex coherent_amplitude(Real t, Real kappa) {
  return kappa * Complex(1.0 - std::cos(t), std::sin(t));
}

Complex f_qm(Real t, Real kappa) {
  const Real k2 = kappa * kappa;
  return std::exp(Complex(-k2 * (1.0 - std::cos(t)), k2 * (t - std::sin(t))));
}

Real damping_envelope(Real t) {
  return t - (4.0 / 3.0) * std::sin(t) + (1.0 / 6.0) * std::sin(2.0 * t);
}

Complex f_exact(Real t, Real kappa, Real eta_hat) {
  return f_qm(t, kappa) *
         std::exp(-3.0 * kappa * kappa * eta_hat * damping_envelope(t));
}

Real visibility(Real t, Real kappa, Real eta_hat) {
  return std::abs(f_exact(t, kappa, eta_hat));
}

Complex f_heuristic(Real t, Real kappa, Real eta_hat) {
  return f_qm(t, kappa) * std::exp(-8.0 * kappa * kappa * eta_hat * t);
}

Real lambda_damping(const core::PhysicalParams& p) {
  core::validate(p);
  const Real ell = p.ell();
  return (3.0 / 16.0) * p.eta * ell * ell * (two_pi / p.omega_m);
}

VisibilityCurve sample_curve(Method method, const core::SimParams& params) {
  core::validate(params);
  Complex (*fn)(Real, Real, Real) = nullptr;
  switch (method) {
    case Method::Exact:
      fn = &f_exact;
      break;
    case Method::QmOnly:
      fn = +[](Real t, Real kappa, Real) { return f_qm(t, kappa); };
      break;
    case Method::Heuristic:
      fn = &f_heuristic;
      break;
    default:
      throw InvalidParams("sample_curve handles closed-form methods only");
  }
  VisibilityCurve curve;
  curve.method = method;
  curve.samples.reserve(static_cast<std::size_t>(params.t_grid.size()));
  for (Eigen::Index i = 0; i < params.t_grid.size(); ++i) {
    const Real t = params.t_grid[i];
    const Complex f = fn(t, params.kappa, params.eta_hat);
    curve.samples.push_back({t, f, std::abs(f)});
  }
  return curve;
}

}  // namespace mirrorvis::exact
