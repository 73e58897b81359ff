#pragma once

#include <optional>
#include <string_view>

#include "mirrorvis/core.hpp"

namespace mirrorvis::collapse {

// Which collapse-model bookkeeping supplies the localization rate eta.
// Model parameters are conventionally quoted in cgs; every eta leaving this
// module is SI [1/(m^2 s)].
enum class Model { Grw, Qmupl, Csl, Direct };

std::string_view to_string(Model m);
std::optional<Model> model_from_string(std::string_view name);

struct CollapseModelSpec {
  Model model = Model::Csl;

  // Spontaneous-hit models (GRW and its diffusive QMUPL limit).
  Real lambda_grw = 1e-16;  // hit rate per nucleon [1/s]
  Real alpha_cm2 = 1e10;    // inverse squared localization width [1/cm^2]
  Real n_nucleons = 1;      // nucleons sharing the center-of-mass motion

  // Density-coupled continuous model (CSL).
  Real gamma_csl = 1e-30;   // coupling [cm^3/s]
  Real density_cm3 = 1e24;  // nucleon density of the mirror [1/cm^3]
  Real side_cm = 1e-3;      // side of the cubic mirror [cm]

  // Bypass: take eta at face value (already SI).
  std::optional<Real> eta_direct;
};

void validate(const CollapseModelSpec& spec);

inline constexpr Real per_cm2_to_per_m2 = 1e4;

// eta = N lambda alpha / 2 for independent hits on N nucleons. Serves both
// the discrete model and its diffusive limit, which share the rate.
Real eta_grw(const CollapseModelSpec& spec);

// eta = gamma S^2 D^2 sqrt(alpha/pi) for a rigid cube of side S and nucleon
// density D displaced by much less than the localization width.
Real eta_csl(const CollapseModelSpec& spec);

Real eta_for_model(const CollapseModelSpec& spec);

// Visibility deficit exponent over one mechanical period when the mirror
// localizes at the rate implied by the model: (3/16) eta ell^2 T.
Real lambda_for_experiment(const CollapseModelSpec& spec,
                           const core::PhysicalParams& p);

// Largest CSL coupling [cm^3/s] compatible with seeing no visibility deficit
// above `accuracy` in the experiment described by p (geometry taken from
// spec). Inverts the deficit formula at Lambda = accuracy.
Real gamma_bound(Real accuracy, const core::PhysicalParams& p,
                 const CollapseModelSpec& geometry);

}  // namespace mirrorvis::collapse
