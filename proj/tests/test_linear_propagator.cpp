#include <doctest.h>

#include <cmath>
#include <random>

#include "couette/linear_propagator.hpp"
#include "ode_oracle.hpp"

using namespace couette;

namespace {

// Simpson's rule is exact here: the heat-phase integrand is quadratic in tau.
double heat_phase_simpson(double k, double xi, double t) {
  auto f = [&](double tau) {
    const double xs = xi + k * (t - tau);
    return k * k + xs * xs;
  };
  return t / 6.0 * (f(0.0) + 4.0 * f(t / 2.0) + f(t));
}

PhysParams make_params(double nu, double mu) {
  PhysParams p;
  p.nu = nu;
  p.mu = mu;
  return p;
}

const auto kOne = [](double, double) { return Complex(1.0, 0.0); };
const auto kZero = [](double, double) { return Complex(0.0, 0.0); };

}  // namespace

TEST_CASE("heat_phase closed form") {
  CHECK(heat_phase(1.0, 0.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(heat_phase(0.0, 2.0, 3.0) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(heat_phase(0.7, -1.3, 0.0) == 0.0);
  CHECK_THROWS_AS(heat_phase(1.0, 0.0, -0.1), std::domain_error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0), ut(0.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double k = u(rng), xi = u(rng), t = ut(rng);
    CHECK(heat_phase(k, xi, t) ==
          doctest::Approx(heat_phase_simpson(k, xi, t)).epsilon(1e-12));
  }
}

TEST_CASE("theta_at examples") {
  LinearSolution sol{make_params(1.0, 1.0), 0, kZero, kOne};
  CHECK(sol.theta_at(1.0, 1.0, 0.0).real() ==
        doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-14));
  CHECK(sol.theta_at(1.0, 1.0, 0.0).imag() == 0.0);
  // k = 0: pure heat decay xi^2 t.
  CHECK(sol.theta_at(2.0, 0.0, 1.0).real() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  // t = 0 identity.
  auto gauss = [](double k, double xi) {
    return Complex(std::exp(-0.5 * (k * k + xi * xi)), 0.3 * xi);
  };
  LinearSolution sol2{make_params(1e-2, 1e-2), 0, kZero, gauss};
  CHECK(std::abs(sol2.theta_at(0.0, 1.5, -0.7) - gauss(1.5, -0.7)) < 1e-15);
}

TEST_CASE("theta_at carries the Sobolev shear weight") {
  LinearSolution sol{make_params(1.0, 1.0), 2, kZero, kOne};
  const double w = japanese_bracket(1.0, 0.0 + 1.0 * 1.0);  // <k, xi+kt>
  CHECK(sol.theta_at(1.0, 1.0, 0.0).real() ==
        doctest::Approx(w * w * std::exp(-4.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("omega_at examples (coupled closed form)") {
  // omega_in = 0, theta_in = 1, nu = mu = 1: omega(1, 1, 0) = i exp(-4/3).
  LinearSolution sol{make_params(1.0, 1.0), 0, kZero, kOne};
  const Complex w = sol.omega_at(1.0, 1.0, 0.0);
  CHECK(w.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(w.imag() == doctest::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-14));

  // theta_in = 0: pure Kelvin mode omega_in(k, xi+kt) e^{-nu Phi}.
  auto bump = [](double k, double xi) {
    return Complex(std::exp(-0.25 * xi * xi), 0.1 * k);
  };
  LinearSolution kelvin{make_params(0.05, 0.05), 0, bump, kZero};
  const double t = 2.5, k = 1.0, xi = -0.5;
  const Complex expect =
      bump(k, xi + k * t) * std::exp(-0.05 * heat_phase(k, xi, t));
  CHECK(std::abs(kelvin.omega_at(t, k, xi) - expect) < 1e-14);

  // t = 0 identity.
  CHECK(std::abs(kelvin.omega_at(0.0, k, xi) - bump(k, xi)) < 1e-15);
}

TEST_CASE("propagator matches the characteristics-ODE oracle, nu = mu") {
  auto w_in = [](double k, double xi) {
    return Complex(std::cos(0.4 * k + 0.2 * xi), std::exp(-0.1 * xi * xi));
  };
  auto th_in = [](double k, double xi) {
    return Complex(std::sin(0.3 * xi), std::exp(-0.05 * (k * k + xi * xi)));
  };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uk(0.5, 3.0), uxi(-5.0, 5.0),
      ut(0.0, 2.0), unu(1e-4, 3e-2), usgn(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double k = (usgn(rng) < 0.5 ? -1.0 : 1.0) * uk(rng);
    const double xi = uxi(rng), t = ut(rng), nu = unu(rng);
    LinearSolution sol{make_params(nu, nu), 0, w_in, th_in};
    const auto got_w = propagate_omega_linear(sol, t, k, xi);
    const auto got_th = propagate_theta_linear(sol, t, k, xi);
    const auto oracle = oracle::characteristics_rk4(
        w_in(k, xi + k * t), th_in(k, xi + k * t), nu, nu, k, xi, t, 20000);
    CHECK(std::abs(got_w - oracle.w) / std::max(std::abs(oracle.w), 1e-12) < 1e-8);
    CHECK(std::abs(got_th - oracle.th) / std::max(std::abs(oracle.th), 1e-12) <
          1e-8);
  }
}

TEST_CASE("propagator matches the oracle for nu != mu (Duhamel quadrature)") {
  auto th_in = [](double k, double xi) {
    return Complex(std::exp(-0.1 * (k * k + xi * xi)), 0.2);
  };
  auto w_in = [](double k, double xi) { return Complex(0.5 * k, -0.3 * xi); };
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uk(0.5, 2.5), uxi(-4.0, 4.0),
      ut(0.1, 2.0), unu(1e-4, 5e-2);
  for (int i = 0; i < 25; ++i) {
    const double k = uk(rng), xi = uxi(rng), t = ut(rng);
    const double nu = unu(rng), mu = unu(rng);
    LinearSolution sol{make_params(nu, mu), 0, w_in, th_in};
    const auto oracle = oracle::characteristics_rk4(
        w_in(k, xi + k * t), th_in(k, xi + k * t), nu, mu, k, xi, t, 20000);
    CHECK(std::abs(sol.omega_at(t, k, xi) - oracle.w) /
              std::max(std::abs(oracle.w), 1e-12) <
          1e-8);
  }
}

TEST_CASE("linear_decay_envelope: viscous half-life and t^-2 stream function") {
  LinearSolution sol{make_params(1.0, 1.0), 0, kOne, kZero};
  // |omega| halves when nu Phi = ln 2: root-find on heat_phase along eta = 0.
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (heat_phase(1.0, -mid, mid) < std::numbers::ln2 ? lo : hi) = mid;
  }
  const double t_half = 0.5 * (lo + hi);
  const auto pts = linear_decay_envelope(sol, 1.0, 0.0, {0.0, t_half});
  CHECK(pts[0].abs_omega == doctest::Approx(1.0));
  CHECK(pts[1].abs_omega == doctest::Approx(0.5).epsilon(1e-10));

  // Inviscid stream function decays like 1/(k^2 + t^2) for eta = 0.
  LinearSolution inviscid = sol;
  inviscid.params.nu = inviscid.params.mu = 1e-14;
  const auto env = linear_decay_envelope(inviscid, 1.0, 0.0, {10.0, 20.0});
  CHECK(env[0].abs_phi == doctest::Approx(1.0 / 101.0).epsilon(1e-6));
  CHECK(env[1].abs_phi == doctest::Approx(1.0 / 401.0).epsilon(1e-6));

  CHECK_THROWS_AS(linear_decay_envelope(sol, 0.0, 1.0, {1.0}), std::domain_error);
}

TEST_CASE("evaluate_linear_on_grid at t = 0 reproduces the data") {
  auto w_in = [](double k, double xi) {
    return Complex(std::exp(-0.5 * (k * k + xi * xi)), 0.0);
  };
  LinearSolution sol{make_params(1e-2, 1e-2), 0, w_in, w_in};
  FrequencyGrid g;
  SpectralField w(g), th(g);
  evaluate_linear_on_grid(sol, 0.0, w, th);
  for (int i = 0; i < g.modes_x; ++i)
    for (int j = 0; j < g.modes_y; ++j) {
      const Complex expect = w_in(g.wavenumber_x(i), g.wavenumber_y(j));
      CHECK(std::abs(w.at(i, j) - expect) < 1e-15);
      CHECK(std::abs(th.at(i, j) - expect) < 1e-15);
    }
}
