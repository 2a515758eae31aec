#include "couette/estimates.hpp"

#include <numbers>

#include "couette/quadrature.hpp"

namespace couette {
namespace estimates {

namespace {

constexpr double kTiny = 1e-12;

double guarded_ratio(double num, double den) {
  if (num < kTiny && den < kTiny) return 0.0;
  return num / den;
}

}  // namespace

double inviscid_damping_ratio(double l, double eta, double t) {
  if (l == 0.0) throw std::domain_error("inviscid_damping_ratio: l = 0");
  const double num = 1.0 / (l * l + eta * eta);
  const double br = japanese_bracket(l, eta + l * t);
  const double tb = japanese_bracket(t);
  const double den = br * br / (l * l * l * l * tb * tb);
  return num / den;
}

double frequency_growth_ratio(double dk, double dxi, double t) {
  const double num = std::abs(dk) + std::abs(dxi);
  const double den = japanese_bracket(t) * japanese_bracket(dk, dxi + dk * t);
  return guarded_ratio(num, den);
}

double low_freq_interpolation_ratio(double l, double eta, double t, double delta) {
  if (l == 0.0 && eta == 0.0)
    throw std::domain_error("low_freq_interpolation_ratio: (l, eta) = 0");
  const double num = std::abs(l) + std::abs(eta + l * t);
  const double den = std::pow(japanese_bracket(l, eta + l * t), 1.0 - delta) *
                     std::pow(japanese_bracket(t), delta) *
                     std::pow(std::abs(l) + std::abs(eta), delta);
  return guarded_ratio(num, den);
}

double commutator_ratio(double k, double xi, double l, double eta, double t) {
  const double ba = japanese_bracket(k, xi + k * t);
  const double bb = japanese_bracket(k - l, xi - eta + (k - l) * t);
  const double num = std::abs(ba * ba * ba - bb * bb * bb);
  const double den =
      (std::abs(l) + std::abs(eta + l * t)) * (ba * ba + bb * bb);
  return guarded_ratio(num, den);
}

double riesz_ratio(double l, double eta) {
  if (l == 0.0) throw std::domain_error("riesz_ratio: l = 0");
  return std::abs(l) * (std::abs(l) + std::abs(eta)) / (l * l + eta * eta);
}

double riesz_sup() {
  // Homogeneous of degree 0, so maximize (1+r)/(1+r^2) over r = |eta|/|l|.
  auto f = [](double r) { return (1.0 + r) / (1.0 + r * r); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 4.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return f(0.5 * (a + b));
}

double interpolation_exponent(double delta, double epsilon, double kappa) {
  return (2.0 * epsilon - (1.0 - delta) * (1.0 + kappa)) / delta;
}

namespace {

// Integrand of the l-integral after the exact eta (Cauchy x Cauchy)
// convolution; |l|^{2 eps - 1} endpoint factor removed by the caller.
double convolution_payload(double t, double k, double xi, double l,
                           double epsilon) {
  const double a = std::abs(l);
  const double b = japanese_bracket(k - l);
  const double c = xi + (k - l) * t;
  const double ab = a + b;
  return std::pow(1.0 + l * l, -epsilon) * std::numbers::pi * ab /
         (b * (ab * ab + c * c));
}

double convolution_halfline(double t, double k, double xi, double epsilon,
                            double sign, double tol) {
  // <1/l>^{-2 eps} / |l| = |l|^{2 eps - 1} (1+l^2)^{-eps}; substitute
  // u = l^{2 eps} on (0,1] and l = 1/v on [1,oo).
  const double inner =
      (1.0 / (2.0 * epsilon)) *
      integrate(
          [&](double u) {
            const double l = std::pow(u, 1.0 / (2.0 * epsilon));
            return convolution_payload(t, k, xi, sign * l, epsilon);
          },
          0.0, 1.0, tol);
  const double outer = integrate(
      [&](double v) {
        const double l = 1.0 / v;
        return std::pow(l, 2.0 * epsilon - 1.0) *
               convolution_payload(t, k, xi, sign * l, epsilon) / (v * v);
      },
      0.0, 1.0, tol);
  return inner + outer;
}

}  // namespace

double m3_kernel_convolution(const MultiplierContext& ctx, double t, double k,
                             double xi) {
  const double eps = ctx.params.epsilon;
  const double tol = ctx.quadrature_tol;
  return convolution_halfline(t, k, xi, eps, +1.0, tol) +
         convolution_halfline(t, k, xi, eps, -1.0, tol);
}

double m3_kernel_ratio(const MultiplierContext& ctx, double t, double k,
                       double xi) {
  const auto& p = ctx.params;
  if (interpolation_exponent(p.delta, p.epsilon, p.kappa) <= 0.0)
    throw std::invalid_argument(
        "m3_kernel_ratio: inadmissible (delta, epsilon, kappa), alpha <= 0");
  const double conv = m3_kernel_convolution(ctx, t, k, xi);
  const double ups = eval_upsilon(ctx, t, k, xi);
  return conv / std::pow(ups, 1.0 - p.delta);
}

std::vector<double> frequency_axis(const GridSpec& spec) {
  std::vector<double> axis;
  axis.reserve(2 * spec.n_freq);
  const double ratio = std::log(spec.freq_max / spec.freq_min);
  for (int i = 0; i < spec.n_freq; ++i) {
    const double mag =
        spec.freq_min *
        std::exp(ratio * (spec.n_freq == 1 ? 0.0 : double(i) / (spec.n_freq - 1)));
    axis.push_back(-mag);
    axis.push_back(mag);
  }
  return axis;
}

std::vector<double> time_axis(const GridSpec& spec) {
  std::vector<double> axis;
  axis.reserve(spec.n_t);
  for (int i = 0; i < spec.n_t; ++i)
    axis.push_back(spec.t_max * (spec.n_t == 1 ? 0.0 : double(i) / (spec.n_t - 1)));
  return axis;
}

GridSpec refine(const GridSpec& spec) {
  GridSpec r = spec;
  r.n_freq *= 2;
  r.n_t *= 2;
  return r;
}

ScanResult scan_inviscid_damping(const GridSpec& spec) {
  double sup = 0.0;
  for (double l : frequency_axis(spec))
    for (double eta : frequency_axis(spec))
      for (double t : time_axis(spec))
        sup = std::max(sup, inviscid_damping_ratio(l, eta, t));
  return {"pointwise_inviscid_damping", sup, spec};
}

ScanResult scan_frequency_growth(const GridSpec& spec) {
  // At fixed (dk, t) the ratio is maximized on the ridge
  // dxi = -sign(dk) (|dk| t + s*), s* = (1 + dk^2) / (|dk| (1 + t)), where it
  // equals sqrt((dk^2 (1+t)^2 / (1+dk^2) + 1) / (1+t^2)); this grows in |dk|
  // and peaks in t at the golden-section time (sqrt(5)-1)/2, approaching the
  // golden ratio as |dk| -> oo. A pure product grid undersamples the ridge
  // and its sup keeps creeping under refinement, so probe the ridge (and its
  // optimal time) explicitly alongside the product grid.
  double sup = 0.0;
  std::vector<double> times = time_axis(spec);
  times.push_back((std::sqrt(5.0) - 1.0) / 2.0);
  for (double dk : frequency_axis(spec))
    for (double t : times) {
      for (double dxi : frequency_axis(spec))
        sup = std::max(sup, frequency_growth_ratio(dk, dxi, t));
      const double a = std::abs(dk);
      const double s = (1.0 + a * a) / (a * (1.0 + t));
      const double ridge = -std::copysign(a * t + s, dk);
      sup = std::max(sup, frequency_growth_ratio(dk, ridge, t));
    }
  return {"frequency_growth", sup, spec};
}

ScanResult scan_low_freq_interpolation(const GridSpec& spec, double delta) {
  double sup = 0.0;
  for (double l : frequency_axis(spec))
    for (double eta : frequency_axis(spec)) {
      if (l * l + eta * eta >= 1.0) continue;  // regime of the bound
      for (double t : time_axis(spec))
        sup = std::max(sup, low_freq_interpolation_ratio(l, eta, t, delta));
    }
  return {"low_freq_interpolation", sup, spec};
}

ScanResult scan_commutator(const GridSpec& spec) {
  // 5-D scan: thin the axes to keep the point count workable.
  GridSpec thin = spec;
  thin.n_freq = std::max(5, spec.n_freq / 4);
  thin.n_t = std::max(5, spec.n_t / 4);
  double sup = 0.0;
  for (double k : frequency_axis(thin))
    for (double xi : frequency_axis(thin))
      for (double l : frequency_axis(thin))
        for (double eta : frequency_axis(thin))
          for (double t : time_axis(thin))
            sup = std::max(sup, commutator_ratio(k, xi, l, eta, t));
  return {"commutator", sup, spec};
}

ScanResult scan_riesz(const GridSpec& spec) {
  double sup = 0.0;
  for (double l : frequency_axis(spec))
    for (double eta : frequency_axis(spec))
      sup = std::max(sup, riesz_ratio(l, eta));
  return {"riesz_bound", sup, spec};
}

ScanResult scan_m3_kernel(const MultiplierContext& ctx, const GridSpec& spec) {
  GridSpec thin = spec;
  thin.n_freq = std::max(5, spec.n_freq / 4);
  thin.n_t = std::max(5, spec.n_t / 4);
  double sup = 0.0;
  for (double k : frequency_axis(thin))
    for (double xi : frequency_axis(thin))
      for (double t : time_axis(thin))
        sup = std::max(sup, m3_kernel_ratio(ctx, t, k, xi));
  return {"m3_kernel_bound", sup, spec};
}

}  // namespace estimates
}  // namespace couette
