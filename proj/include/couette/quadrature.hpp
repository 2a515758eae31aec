#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <stdexcept>

namespace couette {

struct QuadratureError : std::runtime_error {
  double achieved_tol;
  QuadratureError(const std::string& what, double tol)
      : std::runtime_error(what), achieved_tol(tol) {}
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // L1 mass, the scale the error is judged against

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error += o.error;
    l1 += o.l1;
    return *this;
  }
  /// Throws unless the accumulated error beats 100 * tol relative to the
  /// accumulated mass. Multi-panel integrals call this once on the sum so a
  /// tiny panel is not judged against its own (noise-level) magnitude.
  double checked(double tol) const {
    const double scale = std::max(std::abs(value), l1);
    if (scale > 0.0 && error > 100.0 * tol * scale)
      throw QuadratureError("gauss_kronrod: tolerance not reached", error / scale);
    return value;
  }
};

/// Adaptive Gauss-Kronrod (15-point) on [a, b], relative tolerance `tol`.
template <typename F>
IntegralResult integrate_raw(F&& f, double a, double b, double tol = 1e-10,
                             unsigned max_depth = 25) {
  IntegralResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, max_depth, tol, &r.error, &r.l1);
  return r;
}

/// Single-panel convenience wrapper with the convergence check applied.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-10,
                 unsigned max_depth = 25) {
  return integrate_raw(std::forward<F>(f), a, b, tol, max_depth).checked(tol);
}

}  // namespace couette
