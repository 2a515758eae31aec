#include "couette/linear_propagator.hpp"

#include "couette/quadrature.hpp"

namespace couette {

double heat_phase(double k, double xi, double t) {
  if (t < 0.0) throw std::domain_error("heat_phase: t < 0");
  const double mid = xi + 0.5 * k * t;
  return k * k * t + k * k * t * t * t / 12.0 + mid * mid * t;
}

void LinearSolution::validate() const {
  params.validate();
  if (sobolev_shift < 0 || sobolev_shift > 6)
    throw std::invalid_argument("LinearSolution: sobolev_shift must be in [0,6]");
  if (!initial_omega_hat || !initial_theta_hat)
    throw std::invalid_argument("LinearSolution: missing initial data");
}

namespace {
double shear_weight(double k, double xi, double t, int a) {
  if (a == 0) return 1.0;
  return std::pow(japanese_bracket(k, xi + k * t), a);
}
}  // namespace

Complex LinearSolution::theta_at(double t, double k, double xi) const {
  if (t < 0.0) throw std::domain_error("theta_at: t < 0");
  const double phase = params.mu * heat_phase(k, xi, t);
  return shear_weight(k, xi, t, sobolev_shift) *
         initial_theta_hat(k, xi + k * t) * std::exp(-phase);
}

Complex LinearSolution::omega_at(double t, double k, double xi) const {
  if (t < 0.0) throw std::domain_error("omega_at: t < 0");
  const double nu = params.nu, mu = params.mu;
  const double phi_t = heat_phase(k, xi, t);
  const Complex w_in = initial_omega_hat(k, xi + k * t);
  const Complex th_in = initial_theta_hat(k, xi + k * t);
  const Complex ik(0.0, k);
  const double weight = shear_weight(k, xi, t, sobolev_shift);

  if (nu == mu)
    return weight * std::exp(-nu * phi_t) * (w_in + ik * t * th_in);

  // General Duhamel factor: exp(-mu Phi(t)) * int_0^t exp((mu-nu) Phi(u)) du,
  // rearranged so the exponent under the integral sign stays <= 0.
  double duhamel;
  if (mu >= nu) {
    duhamel = std::exp(-nu * phi_t) *
              integrate(
                  [&](double u) {
                    return std::exp((mu - nu) * (heat_phase(k, xi, u) - phi_t));
                  },
                  0.0, t, 1e-10);
  } else {
    duhamel = std::exp(-mu * phi_t) *
              integrate(
                  [&](double u) {
                    return std::exp((mu - nu) * heat_phase(k, xi, u));
                  },
                  0.0, t, 1e-10);
  }
  return weight * (std::exp(-nu * phi_t) * w_in + ik * th_in * duhamel);
}

std::vector<EnvelopePoint> linear_decay_envelope(const LinearSolution& sol,
                                                 double k, double eta,
                                                 const std::vector<double>& times) {
  if (k == 0.0)
    throw std::domain_error("linear_decay_envelope: stream function undefined at k = 0");
  std::vector<EnvelopePoint> out;
  out.reserve(times.size());
  for (double t : times) {
    const double xi = stationary_from_moving(eta, k, t);
    const Complex w = sol.omega_at(t, k, xi);
    const Complex th = sol.theta_at(t, k, xi);
    const double denom = k * k + xi * xi;
    out.push_back({t, std::abs(w), std::abs(w) / denom, std::abs(th)});
  }
  return out;
}

void evaluate_linear_on_grid(const LinearSolution& sol, double t,
                             SpectralField& omega_hat, SpectralField& theta_hat) {
  require_same_grid(omega_hat, theta_hat);
  const FrequencyGrid& g = omega_hat.grid;
  LinearSolution unweighted = sol;
  unweighted.sobolev_shift = 0;
  for (int i = 0; i < g.modes_x; ++i) {
    const double k = g.wavenumber_x(i);
    for (int j = 0; j < g.modes_y; ++j) {
      const double xi = stationary_from_moving(g.wavenumber_y(j), k, t);
      omega_hat.at(i, j) = unweighted.omega_at(t, k, xi);
      theta_hat.at(i, j) = unweighted.theta_at(t, k, xi);
    }
  }
}

}  // namespace couette
