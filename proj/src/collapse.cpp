#include "mirrorvis/collapse.hpp"

#include <cmath>

#include "mirrorvis/exact.hpp"

namespace mirrorvis::collapse {

namespace {

constexpr Real pi = two_pi / 2.0;

void require_positive(Real v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw InvalidParams(std::string(what) + " must be positive");
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Grw: return "grw";
    case Model::Qmupl: return "qmupl";
    case Model::Csl: return "csl";
    case Model::Direct: return "direct";
  }
  return "unknown";
}

std::optional<Model> model_from_string(std::string_view name) {
  for (Model m : {Model::Grw, Model::Qmupl, Model::Csl, Model::Direct})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

void validate(const CollapseModelSpec& spec) {
  require_positive(spec.lambda_grw, "lambda_grw");
  require_positive(spec.alpha_cm2, "alpha_cm2");
  require_positive(spec.n_nucleons, "n_nucleons");
  require_positive(spec.gamma_csl, "gamma_csl");
  require_positive(spec.density_cm3, "density_cm3");
  require_positive(spec.side_cm, "side_cm");
  if (spec.model == Model::Direct && !spec.eta_direct)
    throw InvalidParams("direct model needs eta_direct");
  if (spec.eta_direct && (*spec.eta_direct < 0 || !std::isfinite(*spec.eta_direct)))
    throw InvalidParams("eta_direct must be non-negative");
}

Real eta_grw(const CollapseModelSpec& spec) {
  validate(spec);
  const Real eta_cgs = 0.5 * spec.n_nucleons * spec.lambda_grw * spec.alpha_cm2;
  return eta_cgs * per_cm2_to_per_m2;
}

Real eta_csl(const CollapseModelSpec& spec) {
  validate(spec);
  const Real eta_cgs = spec.gamma_csl * spec.side_cm * spec.side_cm *
                       spec.density_cm3 * spec.density_cm3 *
                       std::sqrt(spec.alpha_cm2 / pi);
  return eta_cgs * per_cm2_to_per_m2;
}

Real eta_for_model(const CollapseModelSpec& spec) {
  validate(spec);
  switch (spec.model) {
    case Model::Grw:
    case Model::Qmupl:
      return eta_grw(spec);
    case Model::Csl:
      return eta_csl(spec);
    case Model::Direct:
      return *spec.eta_direct;
  }
  throw InvalidParams("unknown collapse model");
}

Real lambda_for_experiment(const CollapseModelSpec& spec,
                           const core::PhysicalParams& p) {
  core::PhysicalParams q = p;
  q.eta = eta_for_model(spec);
  return exact::lambda_damping(q);
}

Real gamma_bound(Real accuracy, const core::PhysicalParams& p,
                 const CollapseModelSpec& geometry) {
  if (!(accuracy > 0) || !(accuracy < 1) || !std::isfinite(accuracy))
    throw InvalidParams("accuracy must lie in (0, 1)");
  validate(geometry);
  core::validate(p);
  const Real ell = p.ell();
  const Real period = two_pi / p.omega_m;
  const Real eta_max_si = (16.0 / 3.0) * accuracy / (ell * ell * period);
  const Real eta_max_cgs = eta_max_si / per_cm2_to_per_m2;
  return eta_max_cgs / (geometry.side_cm * geometry.side_cm *
                        geometry.density_cm3 * geometry.density_cm3 *
                        std::sqrt(geometry.alpha_cm2 / pi));
}

}  // namespace mirrorvis::collapse
