#pragma once

#include <functional>
#include <vector>

#include "couette/spectral_field.hpp"

namespace couette {

/// Integral of |k|^2 + |xi + k(t-tau)|^2 over tau in [0,t], in closed form:
/// |k|^2 t + |k|^2 t^3 / 12 + |xi + kt/2|^2 t.
double heat_phase(double k, double xi, double t);

/// Moving-frame labels map to stationary-frame frequencies by xi = eta - k t.
/// Every frame conversion in the code goes through this function.
inline double stationary_from_moving(double eta, double k, double t) {
  return eta - k * t;
}

/// Closed-form solution of the linearized system in stationary-frame Fourier
/// variables (k, xi), optionally carrying the weight <k, xi+kt>^a.
struct LinearSolution {
  PhysParams params;
  int sobolev_shift = 0;  // a in [0, 6]
  std::function<Complex(double, double)> initial_omega_hat;
  std::function<Complex(double, double)> initial_theta_hat;

  void validate() const;

  /// <k, xi+kt>^a theta_in(k, xi+kt) exp(-mu * heat_phase(k, xi, t)).
  Complex theta_at(double t, double k, double xi) const;

  /// Vorticity with the buoyancy source integrated along the shear
  /// characteristic. For nu == mu the Duhamel integral collapses to
  /// i k t theta_in(k, xi+kt); otherwise it is evaluated by adaptive
  /// quadrature (relative tolerance 1e-10).
  Complex omega_at(double t, double k, double xi) const;
};

inline Complex propagate_theta_linear(const LinearSolution& sol, double t,
                                      double k, double xi) {
  return sol.theta_at(t, k, xi);
}
inline Complex propagate_omega_linear(const LinearSolution& sol, double t,
                                      double k, double xi) {
  return sol.omega_at(t, k, xi);
}

struct EnvelopePoint {
  double t;
  double abs_omega;
  double abs_phi;
  double abs_theta;
};

/// Moduli of (omega, stream function, theta) for the mode with fixed
/// moving-frame label eta, i.e. evaluated at xi = eta - k t. phi = Delta^{-1}
/// omega, so phi_hat = -omega_hat / (k^2 + xi^2); requires k != 0.
std::vector<EnvelopePoint> linear_decay_envelope(const LinearSolution& sol,
                                                 double k, double eta,
                                                 const std::vector<double>& times);

/// Sample the exact solution onto a grid in moving-frame labels at time t
/// (sobolev_shift is ignored: fields, not weighted fields).
void evaluate_linear_on_grid(const LinearSolution& sol, double t,
                             SpectralField& omega_hat, SpectralField& theta_hat);

}  // namespace couette
