#pragma once

#include <nlohmann/json.hpp>

#include "couette/spectral_field.hpp"

namespace couette {

/// Deterministic profile: Gaussian bump in spectral space centered at
/// (center_k, center_eta), mirrored at (-center_k, -center_eta) so the field
/// is real, then rescaled to the requested L2 amplitude.
struct GaussianBumpSpec {
  double center_k = 1.0;
  double center_eta = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
};

SpectralField gaussian_bump_field(const FrequencyGrid& grid,
                                  const GaussianBumpSpec& spec);

/// Seeded random phases under the envelope <k,eta>^{-6} <1/k>^{-4} with a
/// Gaussian tail cutoff; the k = 0 column is left empty. Rescaled to the
/// requested L2 amplitude.
struct RandomEnvelopeSpec {
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double cutoff = 8.0;  // Gaussian cutoff radius in |k, eta|
};

SpectralField random_envelope_field(const FrequencyGrid& grid,
                                    const RandomEnvelopeSpec& spec);

/// Scale the field so l2_norm() == amplitude (no-op on the zero field).
void normalize_l2(SpectralField& field, double amplitude);

/// Build a field from a JSON spec:
///   {"type": "gaussian_bump", "center_k": .., "center_eta": .., "width": ..,
///    "amplitude": ..}
///   {"type": "random_envelope", "seed": .., "amplitude": .., "cutoff": ..}
///   {"type": "zero"}
SpectralField build_initial_field(const FrequencyGrid& grid,
                                  const nlohmann::json& spec);

}  // namespace couette
