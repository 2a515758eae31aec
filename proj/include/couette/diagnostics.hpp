#pragma once

#include <optional>
#include <vector>

#include "couette/linear_propagator.hpp"
#include "couette/multipliers.hpp"

namespace couette {

/// Composite per-mode weight for weighted_l2_norm. With everything at its
/// default the weight is 1 and the norm is plain L2. The <1/k> and |k|^s
/// factors exclude the k = 0 column (reported separately via
/// shear_average_l2_norm).
struct WeightSpec {
  double exp_rate_c = 0.0;          // c in exp(c nu^{1/3} lambda(k) t)
  bool lambda_on = false;
  double bracket_k_power = 0.0;     // <k>^a
  double inv_bracket_power = 0.0;   // <1/k>^eps
  double extra_abs_k_power = 0.0;   // |k|^s
  double shear_bracket_power = 0.0; // <k, xi + k t>^b
  bool multiplier_M = false;
  bool upsilon_sqrt = false;
};

/// Weighted spectral l2 norm of a moving-frame field at time t. The shear
/// bracket and the multiplier symbols are evaluated at the stationary
/// frequency xi = eta - k t of each mode.
double weighted_l2_norm(const SpectralField& field, double t,
                        const WeightSpec& spec, const PhysParams& params);

/// L2 content of the k = 0 column (the shear-average channel).
double shear_average_l2_norm(const SpectralField& field);

/// L2 content of the two columns with signed horizontal index +-k_mode.
double mode_shell_energy(const SpectralField& field, int k_mode);

struct TrajectoryPoint {
  double time = 0.0;
  SpectralField omega_hat;
  SpectralField theta_hat;
};

/// Per-snapshot nonlinear residues omega - omega^L, theta - theta^L, with the
/// exact solution sampled on the same moving-frame grid.
std::vector<TrajectoryPoint> split_linear_nonlinear(
    const std::vector<TrajectoryPoint>& trajectory, const LinearSolution& linear);

enum class DecayModel { Algebraic, Exponential };

struct DecayFit {
  double exponent;  // slope of log v against log<t> (Algebraic) or t (Exponential)
  double residual;  // rms residual of the fit in log space
};

/// Least-squares fit over samples with t in [window_start, window_end].
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& series,
                            double window_start, double window_end,
                            DecayModel model);

/// First time the series drops below 1/e of its initial value (linear
/// interpolation between samples); nullopt if it never does or starts at 0.
std::optional<double> enhanced_dissipation_timescale(
    const std::vector<std::pair<double, double>>& series);

}  // namespace couette
