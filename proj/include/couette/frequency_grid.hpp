#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace couette {

/// sqrt(1 + sum of squares) -- the smoothed absolute value used by every weight.
inline double japanese_bracket(double a) {
  if (!std::isfinite(a)) throw std::domain_error("japanese_bracket: non-finite input");
  return std::sqrt(1.0 + a * a);
}

inline double japanese_bracket(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("japanese_bracket: non-finite input");
  return std::sqrt(1.0 + a * a + b * b);
}

/// min(1, |k|^{2/3}): per-shell decay rate entering the stability functional.
inline double lambda_rate(double k) {
  const double p = std::pow(std::abs(k), 2.0 / 3.0);
  return p < 1.0 ? p : 1.0;
}

/// Discrete Fourier lattice on a periodic box [0,Lx) x [0,Ly).
///
/// Index i in [0,N) carries the signed mode m = i for i < N/2, m = i - N
/// otherwise, so m ranges over [-N/2, N/2). Wavenumbers are 2*pi*m/L.
struct FrequencyGrid {
  double box_length_x = 2.0 * std::numbers::pi;
  double box_length_y = 2.0 * std::numbers::pi;
  int modes_x = 8;
  int modes_y = 8;

  FrequencyGrid() = default;
  FrequencyGrid(double lx, double ly, int nx, int ny)
      : box_length_x(lx), box_length_y(ly), modes_x(nx), modes_y(ny) {
    validate();
  }

  void validate() const {
    if (modes_x < 8 || modes_y < 8 || modes_x % 2 != 0 || modes_y % 2 != 0)
      throw std::invalid_argument("FrequencyGrid: mode counts must be even and >= 8");
    if (!(box_length_x > 0.0) || !(box_length_y > 0.0))
      throw std::invalid_argument("FrequencyGrid: box lengths must be positive");
  }

  int signed_index_x(int i) const { return i < modes_x / 2 ? i : i - modes_x; }
  int signed_index_y(int j) const { return j < modes_y / 2 ? j : j - modes_y; }

  double wavenumber_x(int i) const {
    return 2.0 * std::numbers::pi * signed_index_x(i) / box_length_x;
  }
  double wavenumber_y(int j) const {
    return 2.0 * std::numbers::pi * signed_index_y(j) / box_length_y;
  }

  /// Grid spacing of the vertical wavenumber axis.
  double dky() const { return 2.0 * std::numbers::pi / box_length_y; }
  double dkx() const { return 2.0 * std::numbers::pi / box_length_x; }

  bool operator==(const FrequencyGrid&) const = default;
};

/// Physical and analysis parameters with their admissibility constraints.
struct PhysParams {
  double nu = 1e-3;       // viscosity
  double mu = 1e-3;       // thermal diffusivity
  double delta = 0.2;     // threshold slack
  double epsilon = 0.45;  // low-frequency weight exponent, (1-delta)/2 < eps < 1/2
  double kappa = 0.05;    // echo-multiplier parameter, 0 < kappa < 2*eps/(1-delta) - 1
  double c = 0.01;        // nonlinear decay rate
  double c0 = 0.01;       // linear decay rate, < 1/(16*pi)

  void validate() const {
    if (!(nu > 0.0 && nu <= 1.0) || !(mu > 0.0 && mu <= 1.0))
      throw std::invalid_argument("PhysParams: need 0 < nu, mu <= 1");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("PhysParams: need 0 < delta < 1");
    if (!(epsilon > (1.0 - delta) / 2.0 && epsilon < 0.5))
      throw std::invalid_argument("PhysParams: need (1-delta)/2 < epsilon < 1/2");
    if (!(kappa > 0.0 && kappa < 2.0 * epsilon / (1.0 - delta) - 1.0))
      throw std::invalid_argument("PhysParams: need 0 < kappa < 2*eps/(1-delta) - 1");
    if (!(c > 0.0 && c < 1.0))
      throw std::invalid_argument("PhysParams: need 0 < c < 1");
    if (!(c0 > 0.0 && c0 < 1.0 / (16.0 * std::numbers::pi)))
      throw std::invalid_argument("PhysParams: need 0 < c0 < 1/(16*pi)");
  }

  bool coupled_closed_form() const { return nu == mu; }
};

}  // namespace couette
