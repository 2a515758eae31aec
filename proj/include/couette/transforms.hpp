#pragma once

#include <memory>

#include "couette/spectral_field.hpp"

namespace couette {

/// Planned 2D transform pair for one grid size.
///
/// Normalization: the forward (physical -> spectral) direction carries
/// 1/(Nx*Ny); the inverse carries none, so coeffs are true Fourier amplitudes
/// of f(x,y) = sum_m coeff_m exp(i k_m . x).
class SpectralTransform {
 public:
  explicit SpectralTransform(const FrequencyGrid& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const FrequencyGrid& grid() const { return grid_; }

  /// Inverse DFT; imaginary parts (nonzero only through Hermitian defects
  /// and roundoff) are dropped.
  RealGrid to_physical(const SpectralField& field) const;

  /// Forward DFT with 1/(Nx*Ny); output is Hermitian-symmetrized.
  SpectralField to_spectral(const RealGrid& samples) const;

 private:
  FrequencyGrid grid_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// L2 norm of physical samples, normalized to match SpectralField::l2_norm.
double physical_l2_norm(const RealGrid& samples, const FrequencyGrid& grid);

}  // namespace couette
