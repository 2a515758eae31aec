#include "couette/initial_data.hpp"

#include <random>

namespace couette {

SpectralField gaussian_bump_field(const FrequencyGrid& grid,
                                  const GaussianBumpSpec& spec) {
  if (!(spec.width > 0.0))
    throw std::invalid_argument("gaussian_bump_field: width must be positive");
  SpectralField field(grid);
  const double s2 = 2.0 * spec.width * spec.width;
  auto bump = [&](double k, double eta) {
    const double dp = (k - spec.center_k) * (k - spec.center_k) +
                      (eta - spec.center_eta) * (eta - spec.center_eta);
    const double dm = (k + spec.center_k) * (k + spec.center_k) +
                      (eta + spec.center_eta) * (eta + spec.center_eta);
    return 0.5 * (std::exp(-dp / s2) + std::exp(-dm / s2));
  };
  for (int i = 0; i < grid.modes_x; ++i)
    for (int j = 0; j < grid.modes_y; ++j)
      field.at(i, j) = bump(grid.wavenumber_x(i), grid.wavenumber_y(j));
  normalize_l2(field, spec.amplitude);
  return field;
}

SpectralField random_envelope_field(const FrequencyGrid& grid,
                                    const RandomEnvelopeSpec& spec) {
  SpectralField field(grid);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < grid.modes_x; ++i) {
    const double k = grid.wavenumber_x(i);
    for (int j = 0; j < grid.modes_y; ++j) {
      const double eta = grid.wavenumber_y(j);
      // Draw the phase unconditionally so the stream stays aligned across
      // grids that share modes_y.
      const double ph = phase(rng);
      if (k == 0.0) continue;
      const double env = std::pow(japanese_bracket(k, eta), -6.0) *
                         std::pow(japanese_bracket(1.0 / k), -4.0) *
                         std::exp(-(k * k + eta * eta) /
                                  (2.0 * spec.cutoff * spec.cutoff));
      field.at(i, j) = env * std::exp(Complex(0.0, ph));
    }
  }
  field.symmetrize_hermitian();
  normalize_l2(field, spec.amplitude);
  return field;
}

void normalize_l2(SpectralField& field, double amplitude) {
  const double norm = field.l2_norm();
  if (norm > 0.0) field.coeffs *= amplitude / norm;
}

SpectralField build_initial_field(const FrequencyGrid& grid,
                                  const nlohmann::json& spec) {
  const std::string type = spec.value("type", "zero");
  if (type == "zero") return SpectralField(grid);
  if (type == "gaussian_bump") {
    GaussianBumpSpec g;
    g.center_k = spec.value("center_k", g.center_k);
    g.center_eta = spec.value("center_eta", g.center_eta);
    g.width = spec.value("width", g.width);
    g.amplitude = spec.value("amplitude", g.amplitude);
    return gaussian_bump_field(grid, g);
  }
  if (type == "random_envelope") {
    RandomEnvelopeSpec r;
    r.seed = spec.value("seed", r.seed);
    r.amplitude = spec.value("amplitude", r.amplitude);
    r.cutoff = spec.value("cutoff", r.cutoff);
    return random_envelope_field(grid, r);
  }
  throw std::invalid_argument("build_initial_field: unknown type '" + type + "'");
}

}  // namespace couette
