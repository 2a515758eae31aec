#pragma once

#include <vector>

#include "couette/frequency_grid.hpp"

namespace couette {

struct MultiplierContext {
  PhysParams params;
  double quadrature_tol = 1e-8;
};

/// Enhanced-dissipation weight: arctan(nu^{1/3}|k|^{-1/3} sgn(k) xi) + pi/2.
/// At k = 0 the symmetric value pi/2 is used.
double eval_m1(const MultiplierContext& ctx, double k, double xi);

/// Inviscid-damping weight: arctan(xi/k) + pi/2; pi/2 at k = 0.
double eval_m2(const MultiplierContext& ctx, double k, double xi);

/// Echo-controlling weight: the l-integral of
///   <1/l>^{-1/3-kappa} |l|^{-4/3} (sgn(l) arctan((xi+t(k-l))/(1+|k-l|+|l|)) + pi/2).
double eval_m3(const MultiplierContext& ctx, double t, double k, double xi);

/// Dissipation symbol Upsilon = (-d_t + k d_xi) M3, by its explicit integral
///   int <1/l>^{-1/3-kappa} |l|^{-1/3} B / (B^2 + |xi+t(k-l)|^2) dl,
/// B = 1 + |k-l| + |l|. Strictly positive for t >= 0.
double eval_upsilon(const MultiplierContext& ctx, double t, double k, double xi);

/// M = M1 + M2 + M3 + 1, bracketed in [1, m_upper_bound(kappa)].
double eval_m_total(const MultiplierContext& ctx, double t, double k, double xi);

/// C3(kappa) = pi * int_0^inf <1/l>^{-1/3-kappa} l^{-4/3} dl. This is the
/// limit of M3 as xi -> +infinity at t = 0, but not a uniform bound: the
/// l <-> -l pairing gives payload(l) + payload(-l) = pi + (arctan difference)
/// which overshoots pi wherever k xi < 0 (e.g. M3(0, -4, -16) ~ 1.013 C3).
double c3_bound(double kappa, double tol = 1e-10);

/// Provable bracket top for M: 1 + 2*pi + 2*C3(kappa), from payload < pi
/// pointwise on each halfline. Memoized per kappa.
double m_upper_bound(double kappa);

struct CoercivityPoint {
  double t, k, xi;
};

struct CoercivityReport {
  double min_m1_slack;         // min of k d_xi M1 - (nu^{1/3}|k|^{2/3}/4 - nu xi^2/2)
  double max_m2_identity_err;  // analytic k d_xi M2 vs finite differences
  double max_m3_upsilon_err;   // relative error of FD (-d_t + k d_xi) M3 vs Upsilon
  double min_upsilon;
};

/// Pointwise verification of the transport-derivative identities behind the
/// coercivity estimate; k = 0 samples are skipped.
CoercivityReport check_coercivity(const MultiplierContext& ctx,
                                  const std::vector<CoercivityPoint>& samples);

/// Closed forms used by the coercivity check.
double m1_transport_derivative(const MultiplierContext& ctx, double k, double xi);
double m2_transport_derivative(double k, double xi);

/// Finite-difference (-d_t + k d_xi) M3. The stencil difference is folded
/// into a single kernel integral so the quadrature tolerance applies to the
/// (small) difference rather than to M3 itself, then Richardson-extrapolated.
double m3_transport_derivative_fd(const MultiplierContext& ctx, double t,
                                  double k, double xi, double h = 0.0);

/// Richardson-extrapolated central difference of f along direction
/// (-1, k) in (t, xi): approximates (-d_t + k d_xi) f.
template <typename F>
double transport_derivative_fd(F&& f, double t, double k, double xi,
                               double h = 0.0) {
  if (h == 0.0) h = 2e-3;
  auto g = [&](double s) { return f(t - s, k, xi + k * s); };
  auto central = [&](double hh) { return (g(hh) - g(-hh)) / (2.0 * hh); };
  const double d1 = central(h), d2 = central(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace couette
