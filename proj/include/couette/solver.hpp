#pragma once

#include <functional>
#include <utility>

#include "couette/linear_propagator.hpp"
#include "couette/transforms.hpp"

namespace couette {

/// Vorticity/temperature spectra in the moving (shearing) frame plus the
/// simulation clock. frame_time is the instant at which the frame labels
/// coincide with stationary frequencies; it only moves under remapping, so
/// the shear age entering every symbol is time - frame_time.
struct FlowState {
  SpectralField omega_hat;
  SpectralField theta_hat;
  double time = 0.0;
  double frame_time = 0.0;

  double shear_age() const { return time - frame_time; }
  void validate() const;
};

struct SolverConfig {
  PhysParams params;
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias_fraction = 2.0 / 3.0;
  double remap_interval = 0.0;  // 0 disables remapping
  bool nonlinear = true;
  double record_dt = 0.1;  // observer cadence in run()

  void validate() const;
};

/// Stationary-frame (d_x, d_y) symbols acting on a moving-frame coefficient
/// with labels (k, eta) at shear age t: (ik, i(eta - kt)).
std::pair<Complex, Complex> moving_frame_gradient_symbol(double k, double eta,
                                                         double t);

/// Damping integral of one moving-frame mode between shear ages t1 <= t2:
/// int_{t1}^{t2} k^2 + (eta - k s)^2 ds, in closed form. Equals
/// heat_phase(k, eta - k t, t) when (t1, t2) = (0, t).
double damping_integral(double k, double eta, double t1, double t2);

/// u = grad^perp (-Delta)^{-1} omega on moving-frame coefficients at shear
/// age t; the (0,0) mode is pinned to zero. Divergence-free by construction.
void biot_savart(const SpectralField& omega_hat, double t, SpectralField& u1_hat,
                 SpectralField& u2_hat);

/// Pseudo-spectral stepper; owns the transform plans and dealias mask.
class Solver {
 public:
  Solver(const FrequencyGrid& grid, const SolverConfig& config);

  const SolverConfig& config() const { return config_; }

  /// (N_omega, N_theta) = (ik theta - dealias(u . grad omega),
  ///                       -dealias(u . grad theta)); buoyancy only when
  /// with_buoyancy, advection only when config().nonlinear.
  void nonlinear_term(const SpectralField& omega_hat,
                      const SpectralField& theta_hat, double shear_age,
                      SpectralField& n_omega, SpectralField& n_theta,
                      bool with_buoyancy = true);

  /// One integrating-factor RK4 step of size dt (classical 4-stage tableau,
  /// viscous shear semigroup applied exactly between stage times).
  void step(FlowState& state, double dt);

  /// Advance to config().t_end, invoking observer at t = 0, then at every
  /// crossing of record_dt, and at the end. Applies remapping if configured.
  void run(FlowState& state,
           const std::function<void(const FlowState&)>& observer = {});

  /// Shift coefficients so frame_time becomes state.time (per-row integer
  /// cell shifts; exact when k * shear_age is a multiple of dky).
  static void remap(FlowState& state);

  /// Largest |u| dt / dx seen in the most recent step (CFL heuristic).
  double last_cfl() const { return last_cfl_; }
  bool cfl_warned() const { return cfl_warned_; }

 private:
  SolverConfig config_;
  SpectralTransform transform_;
  RealGrid dealias_mask_;
  double last_u_over_dx_ = 0.0;
  double last_cfl_ = 0.0;
  bool cfl_warned_ = false;
};

}  // namespace couette
