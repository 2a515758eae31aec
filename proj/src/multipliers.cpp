#include "couette/multipliers.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "couette/quadrature.hpp"

namespace couette {

namespace {

constexpr double kPi = std::numbers::pi;

// Kernel of M3 on l > 0: <1/l>^{-1/3-kappa} l^{-4/3} = l^{kappa-1} (1+l^2)^{-1/6-kappa/2}.
// The algebraic endpoint factors are removed by substitution before handing
// the panels to adaptive Gauss-Kronrod:
//   (0,1]:  l = u^{1/kappa}   strips l^{kappa-1}
//   [1,oo): l = w^{-3}        integrand becomes 3 (1+w^6)^{-1/6-kappa/2} b(l)
template <typename Payload>
IntegralResult m3_kernel_halfline(double kappa, double tol, Payload&& b) {
  const double p = 1.0 / 6.0 + 0.5 * kappa;
  IntegralResult inner = integrate_raw(
      [&](double u) {
        const double l = std::pow(u, 1.0 / kappa);
        return std::pow(1.0 + l * l, -p) * b(l);
      },
      0.0, 1.0, tol);
  inner.value /= kappa;
  inner.error /= kappa;
  inner.l1 /= kappa;
  inner += integrate_raw(
      [&](double w) {
        const double l = 1.0 / (w * w * w);
        return 3.0 * std::pow(1.0 + std::pow(w, 6), -p) * b(l);
      },
      0.0, 1.0, tol);
  return inner;
}

// Kernel of Upsilon on l > 0: <1/l>^{-1/3-kappa} l^{-1/3} = l^kappa (1+l^2)^{-1/6-kappa/2}.
//   (0,1]:  l = u^{1/(1+kappa)}
//   [1,oo): l = w^{-3}, integrand 3 w^{-3} (1+w^6)^{-1/6-kappa/2} b(l)
// (the payload decays at least like 1/l, so the w^{-3} factor is harmless).
template <typename Payload>
IntegralResult upsilon_kernel_halfline(double kappa, double tol, Payload&& b) {
  const double p = 1.0 / 6.0 + 0.5 * kappa;
  IntegralResult inner = integrate_raw(
      [&](double u) {
        const double l = std::pow(u, 1.0 / (1.0 + kappa));
        return std::pow(1.0 + l * l, -p) * b(l);
      },
      0.0, 1.0, tol);
  inner.value /= 1.0 + kappa;
  inner.error /= 1.0 + kappa;
  inner.l1 /= 1.0 + kappa;
  inner += integrate_raw(
      [&](double w) {
        const double l = 1.0 / (w * w * w);
        return 3.0 * std::pow(1.0 + std::pow(w, 6), -p) * b(l) / (w * w * w);
      },
      0.0, 1.0, tol);
  return inner;
}

double m3_payload(double t, double k, double xi, double l) {
  const double big = 1.0 + std::abs(k - l) + std::abs(l);
  const double s = l > 0.0 ? 1.0 : -1.0;
  return s * std::atan((xi + t * (k - l)) / big) + kPi / 2.0;
}

double upsilon_payload(double t, double k, double xi, double l) {
  const double big = 1.0 + std::abs(k - l) + std::abs(l);
  const double shift = xi + t * (k - l);
  return big / (big * big + shift * shift);
}

}  // namespace

double eval_m1(const MultiplierContext& ctx, double k, double xi) {
  if (k == 0.0) return kPi / 2.0;
  const double s = k > 0.0 ? 1.0 : -1.0;
  return std::atan(std::cbrt(ctx.params.nu / std::abs(k)) * s * xi) + kPi / 2.0;
}

double eval_m2(const MultiplierContext&, double k, double xi) {
  if (k == 0.0) return kPi / 2.0;
  return std::atan(xi / k) + kPi / 2.0;
}

double eval_m3(const MultiplierContext& ctx, double t, double k, double xi) {
  if (t < 0.0) throw std::domain_error("eval_m3: t < 0");
  const double kappa = ctx.params.kappa;
  const double tol = ctx.quadrature_tol;
  IntegralResult r = m3_kernel_halfline(
      kappa, tol, [&](double l) { return m3_payload(t, k, xi, l); });
  r += m3_kernel_halfline(kappa, tol,
                          [&](double l) { return m3_payload(t, k, xi, -l); });
  return r.checked(tol);
}

double eval_upsilon(const MultiplierContext& ctx, double t, double k, double xi) {
  if (t < 0.0) throw std::domain_error("eval_upsilon: t < 0");
  const double kappa = ctx.params.kappa;
  const double tol = ctx.quadrature_tol;
  IntegralResult r = upsilon_kernel_halfline(
      kappa, tol, [&](double l) { return upsilon_payload(t, k, xi, l); });
  r += upsilon_kernel_halfline(
      kappa, tol, [&](double l) { return upsilon_payload(t, k, xi, -l); });
  return r.checked(tol);
}

double eval_m_total(const MultiplierContext& ctx, double t, double k, double xi) {
  const double m =
      eval_m1(ctx, k, xi) + eval_m2(ctx, k, xi) + eval_m3(ctx, t, k, xi) + 1.0;
  if (m < 1.0 || m > m_upper_bound(ctx.params.kappa))
    throw std::logic_error("eval_m_total: bracket [1, C_kappa] violated");
  return m;
}

double m_upper_bound(double kappa) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(kappa);
  if (it == cache.end())
    it = cache.emplace(kappa, 1.0 + 2.0 * kPi + 2.0 * c3_bound(kappa)).first;
  return it->second;
}

double c3_bound(double kappa, double tol) {
  return kPi * m3_kernel_halfline(kappa, tol, [](double) { return 1.0; })
                   .checked(tol);
}

double m1_transport_derivative(const MultiplierContext& ctx, double k, double xi) {
  const double nu13 = std::cbrt(ctx.params.nu);
  const double ak23 = std::pow(std::abs(k), 2.0 / 3.0);
  return nu13 * ak23 / (1.0 + nu13 * nu13 / ak23 * xi * xi);
}

double m2_transport_derivative(double k, double xi) {
  return k * k / (k * k + xi * xi);
}

double m3_transport_derivative_fd(const MultiplierContext& ctx, double t,
                                  double k, double xi, double h) {
  if (h == 0.0) h = 2e-3;
  const double kappa = ctx.params.kappa;
  const double tol = ctx.quadrature_tol;
  // Single-integral stencil: integrate the payload difference so the
  // quadrature sees the O(h) quantity directly.
  auto diff = [&](double hh) {
    // The two stencil arguments share the same B and differ by exactly
    // 2 hh l / B, so the arctan difference collapses via
    // atan(a) - atan(b) = atan((a-b)/(1+ab)) with no cancellation
    // (a and b are close, so 1 + ab > 0).
    auto payload_delta = [&](double l) {
      const double big = 1.0 + std::abs(k - l) + std::abs(l);
      const double a = (xi + k * hh + (t - hh) * (k - l)) / big;
      const double b = (xi - k * hh + (t + hh) * (k - l)) / big;
      const double s = l > 0.0 ? 1.0 : -1.0;
      return s * std::atan(2.0 * hh * l / (big * (1.0 + a * b)));
    };
    IntegralResult r = m3_kernel_halfline(
        kappa, tol, [&](double l) { return payload_delta(l); });
    r += m3_kernel_halfline(kappa, tol,
                            [&](double l) { return payload_delta(-l); });
    return r.checked(tol) / (2.0 * hh);
  };
  const double d1 = diff(h), d2 = diff(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

CoercivityReport check_coercivity(const MultiplierContext& ctx,
                                  const std::vector<CoercivityPoint>& samples) {
  CoercivityReport r{std::numeric_limits<double>::infinity(), 0.0, 0.0,
                     std::numeric_limits<double>::infinity()};
  for (const auto& p : samples) {
    if (p.k == 0.0) continue;
    const double nu = ctx.params.nu;
    const double lower = std::cbrt(nu) * std::pow(std::abs(p.k), 2.0 / 3.0) / 4.0 -
                         0.5 * nu * p.xi * p.xi;
    r.min_m1_slack =
        std::min(r.min_m1_slack, m1_transport_derivative(ctx, p.k, p.xi) - lower);

    const double m2_fd = transport_derivative_fd(
        [&](double, double k, double xi) { return eval_m2(ctx, k, xi); }, p.t,
        p.k, p.xi);
    r.max_m2_identity_err = std::max(
        r.max_m2_identity_err, std::abs(m2_fd - m2_transport_derivative(p.k, p.xi)));

    const double ups = eval_upsilon(ctx, p.t, p.k, p.xi);
    const double m3_fd = m3_transport_derivative_fd(ctx, p.t, p.k, p.xi);
    r.max_m3_upsilon_err =
        std::max(r.max_m3_upsilon_err, std::abs(m3_fd - ups) / std::abs(ups));
    r.min_upsilon = std::min(r.min_upsilon, ups);
  }
  return r;
}

}  // namespace couette
