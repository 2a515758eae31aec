#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "couette/frequency_grid.hpp"

namespace couette {

using Complex = std::complex<double>;
// Row index = horizontal mode (k), column index = vertical mode (eta).
// RowMajor so the buffer can be handed to FFTW as-is (n0 = modes_x slowest).
using ComplexGrid =
    Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealGrid =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Fourier coefficients of one real scalar field on a FrequencyGrid.
struct SpectralField {
  FrequencyGrid grid;
  ComplexGrid coeffs;

  SpectralField() = default;
  explicit SpectralField(const FrequencyGrid& g)
      : grid(g), coeffs(ComplexGrid::Zero(g.modes_x, g.modes_y)) {}

  Complex& at(int i, int j) { return coeffs(i, j); }
  Complex at(int i, int j) const { return coeffs(i, j); }

  /// coeff(-k,-eta) = conj(coeff(k,eta)), required for real physical fields.
  void symmetrize_hermitian() {
    const int nx = grid.modes_x, ny = grid.modes_y;
    ComplexGrid flipped(nx, ny);
    for (int i = 0; i < nx; ++i) {
      const int im = (nx - i) % nx;
      for (int j = 0; j < ny; ++j)
        flipped(i, j) = std::conj(coeffs(im, (ny - j) % ny));
    }
    coeffs = 0.5 * (coeffs + flipped);
  }

  double hermitian_defect() const {
    const int nx = grid.modes_x, ny = grid.modes_y;
    double worst = 0.0;
    for (int i = 0; i < nx; ++i) {
      const int im = (nx - i) % nx;
      for (int j = 0; j < ny; ++j) {
        const double d =
            std::abs(coeffs(i, j) - std::conj(coeffs(im, (ny - j) % ny)));
        if (d > worst) worst = d;
      }
    }
    return worst;
  }

  bool all_finite() const { return coeffs.isFinite().all(); }

  /// L2 norm of the physical field this spectrum represents (Parseval).
  double l2_norm() const {
    return std::sqrt(grid.box_length_x * grid.box_length_y *
                     coeffs.abs2().sum());
  }
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("fields live on different grids");
}

}  // namespace couette
