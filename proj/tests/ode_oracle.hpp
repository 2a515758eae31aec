#pragma once

// Independent characteristics-ODE oracle for the linearized system. Along the
// characteristic the stationary frequency is xi(s) = xi + k (t - s), so with
// w(s) = omega_hat(s, k, xi(s)), th(s) = theta_hat(s, k, xi(s)):
//   w'  = -nu (k^2 + xi(s)^2) w + i k th
//   th' = -mu (k^2 + xi(s)^2) th
// integrated with classical RK4 from s = 0 (data at frequency xi + k t).

#include <complex>
#include <utility>

namespace oracle {

struct Pair {
  std::complex<double> w, th;
};

inline Pair characteristics_rk4(std::complex<double> w0, std::complex<double> th0,
                                double nu, double mu, double k, double xi,
                                double t, int n_steps) {
  const std::complex<double> ik(0.0, k);
  auto rhs = [&](double s, const Pair& y) {
    const double xs = xi + k * (t - s);
    const double lap = k * k + xs * xs;
    return Pair{-nu * lap * y.w + ik * y.th, -mu * lap * y.th};
  };
  Pair y{w0, th0};
  const double h = t / n_steps;
  for (int i = 0; i < n_steps; ++i) {
    const double s = i * h;
    const Pair k1 = rhs(s, y);
    const Pair k2 = rhs(s + h / 2, {y.w + h / 2.0 * k1.w, y.th + h / 2.0 * k1.th});
    const Pair k3 = rhs(s + h / 2, {y.w + h / 2.0 * k2.w, y.th + h / 2.0 * k2.th});
    const Pair k4 = rhs(s + h, {y.w + h * k3.w, y.th + h * k3.th});
    y.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    y.th += h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th);
  }
  return y;
}

}  // namespace oracle
