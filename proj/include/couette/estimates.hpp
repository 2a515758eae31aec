#pragma once

#include <string>
#include <vector>

#include "couette/multipliers.hpp"

namespace couette {
namespace estimates {

// Pointwise ratios of the scalar frequency-space inequalities. Each one is
// LHS / RHS of the corresponding bound; removable 0/0 points evaluate to 0.

/// 1/(l^2+eta^2)  vs  <l, eta+lt>^2 / (|l|^4 <t>^2); requires l != 0.
double inviscid_damping_ratio(double l, double eta, double t);

/// (|k-l| + |xi-eta|)  vs  <t> <k-l, xi-eta+(k-l)t>.
double frequency_growth_ratio(double dk, double dxi, double t);

/// (|l| + |eta+lt|)  vs  <l, eta+lt>^{1-delta} <t>^delta (|l|+|eta|)^delta;
/// requires (l, eta) != (0, 0).
double low_freq_interpolation_ratio(double l, double eta, double t, double delta);

/// |<k, xi+kt>^3 - <k-l, xi-eta+(k-l)t>^3|  vs
/// (|l|+|eta+lt|) (<l, eta+lt>^2 + <k-l, xi-eta+(k-l)t>^2).
double commutator_ratio(double k, double xi, double l, double eta, double t);

/// |l| (|l|+|eta|) / (l^2+eta^2); requires l != 0. Supremum is (1+sqrt(2))/2.
double riesz_ratio(double l, double eta);

/// Exact supremum of riesz_ratio via 1-D maximization of (1+r)/(1+r^2).
double riesz_sup();

/// Poisson-kernel convolution bound behind the echo estimate:
///   int_R2 <1/l>^{-2 eps} / ((l^2+eta^2) <k-l, xi-eta+(k-l)t>^2) deta dl
/// against Upsilon(t,k,xi)^{1-delta}. The eta-integral is the exact Cauchy
/// convolution pi (a+b) / (a b ((a+b)^2 + c^2)); the l-integral is adaptive.
double m3_kernel_convolution(const MultiplierContext& ctx, double t, double k,
                             double xi);
double m3_kernel_ratio(const MultiplierContext& ctx, double t, double k,
                       double xi);

/// alpha = (2 eps - (1-delta)(1+kappa)) / delta; must be > 0 for the bound
/// to apply. Throws std::invalid_argument otherwise when validated.
double interpolation_exponent(double delta, double epsilon, double kappa);

struct GridSpec {
  double freq_min = 1.0 / 64.0;
  double freq_max = 64.0;
  int n_freq = 33;  // log-spaced magnitudes, both signs
  double t_max = 64.0;
  int n_t = 33;  // linear in t over [0, t_max]
};

std::vector<double> frequency_axis(const GridSpec& spec);  // signed, log-spaced
std::vector<double> time_axis(const GridSpec& spec);

struct ScanResult {
  std::string inequality;
  double sup_ratio;
  GridSpec grid;
};

ScanResult scan_inviscid_damping(const GridSpec& spec);
ScanResult scan_frequency_growth(const GridSpec& spec);
ScanResult scan_low_freq_interpolation(const GridSpec& spec, double delta);
ScanResult scan_commutator(const GridSpec& spec);
ScanResult scan_riesz(const GridSpec& spec);
ScanResult scan_m3_kernel(const MultiplierContext& ctx, const GridSpec& spec);

/// Same grid with twice the points per axis.
GridSpec refine(const GridSpec& spec);

}  // namespace estimates
}  // namespace couette
