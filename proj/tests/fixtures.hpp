#pragma once

#include "twophase/constitutive.hpp"
#include "twophase/flux_geometry.hpp"

namespace fixtures {

inline twophase::CapillaryModel reference_capillary(double tau) {
  return {{3.5, 0.92}, {7.0, 0.9}, tau};
}

// Single flux curve, quadratic Brooks-Corey with unit gravity number.
inline twophase::Model reference_model(double tau = 0.0) {
  return {reference_capillary(tau), twophase::preset_permeability(twophase::FluxPreset::brooks_corey),
          1.0, 1.0};
}

// Hysteretic permeabilities without gravity.
inline twophase::Model hysteretic_model(double tau,
                                        twophase::FluxPreset p = twophase::FluxPreset::hysteretic_bc) {
  return {reference_capillary(tau), twophase::preset_permeability(p), 1.0, 0.0};
}

// Identical capillary branches, no permeability hysteresis.
inline twophase::Model classical_model(double tau) {
  twophase::CapillaryModel cap{{3.5, 0.92}, {3.5, 0.92}, tau};
  return {cap, twophase::preset_permeability(twophase::FluxPreset::brooks_corey), 1.0, 1.0};
}

}  // namespace fixtures
