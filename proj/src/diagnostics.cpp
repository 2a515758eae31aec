#include "couette/diagnostics.hpp"

namespace couette {

double weighted_l2_norm(const SpectralField& field, double t,
                        const WeightSpec& spec, const PhysParams& params) {
  if (t < 0.0) throw std::domain_error("weighted_l2_norm: t < 0");
  const FrequencyGrid& g = field.grid;
  const bool skip_k0 =
      spec.inv_bracket_power != 0.0 || spec.extra_abs_k_power != 0.0;
  MultiplierContext ctx{params, 1e-8};
  const double nu13 = std::cbrt(params.nu);

  double sum = 0.0;
  for (int i = 0; i < g.modes_x; ++i) {
    const double k = g.wavenumber_x(i);
    if (k == 0.0 && skip_k0) continue;
    double col = 1.0;
    if (spec.lambda_on) col *= std::exp(spec.exp_rate_c * nu13 * lambda_rate(k) * t);
    if (spec.bracket_k_power != 0.0)
      col *= std::pow(japanese_bracket(k), spec.bracket_k_power);
    if (spec.inv_bracket_power != 0.0)
      col *= std::pow(japanese_bracket(1.0 / k), spec.inv_bracket_power);
    if (spec.extra_abs_k_power != 0.0)
      col *= std::pow(std::abs(k), spec.extra_abs_k_power);
    for (int j = 0; j < g.modes_y; ++j) {
      const double xi = stationary_from_moving(g.wavenumber_y(j), k, t);
      double w = col;
      if (spec.shear_bracket_power != 0.0)
        w *= std::pow(japanese_bracket(k, xi + k * t), spec.shear_bracket_power);
      if (spec.multiplier_M) w *= eval_m_total(ctx, t, k, xi);
      if (spec.upsilon_sqrt) w *= std::sqrt(eval_upsilon(ctx, t, k, xi));
      sum += w * w * std::norm(field.at(i, j));
    }
  }
  return std::sqrt(g.box_length_x * g.box_length_y * sum);
}

double shear_average_l2_norm(const SpectralField& field) {
  const FrequencyGrid& g = field.grid;
  double sum = 0.0;
  for (int j = 0; j < g.modes_y; ++j) sum += std::norm(field.at(0, j));
  return std::sqrt(g.box_length_x * g.box_length_y * sum);
}

double mode_shell_energy(const SpectralField& field, int k_mode) {
  const FrequencyGrid& g = field.grid;
  double sum = 0.0;
  for (int i = 0; i < g.modes_x; ++i) {
    if (std::abs(g.signed_index_x(i)) != std::abs(k_mode)) continue;
    for (int j = 0; j < g.modes_y; ++j) sum += std::norm(field.at(i, j));
  }
  return g.box_length_x * g.box_length_y * sum;
}

std::vector<TrajectoryPoint> split_linear_nonlinear(
    const std::vector<TrajectoryPoint>& trajectory, const LinearSolution& linear) {
  linear.validate();
  std::vector<TrajectoryPoint> out;
  out.reserve(trajectory.size());
  for (const auto& pt : trajectory) {
    TrajectoryPoint nl;
    nl.time = pt.time;
    nl.omega_hat = SpectralField(pt.omega_hat.grid);
    nl.theta_hat = SpectralField(pt.theta_hat.grid);
    evaluate_linear_on_grid(linear, pt.time, nl.omega_hat, nl.theta_hat);
    nl.omega_hat.coeffs = pt.omega_hat.coeffs - nl.omega_hat.coeffs;
    nl.theta_hat.coeffs = pt.theta_hat.coeffs - nl.theta_hat.coeffs;
    out.push_back(std::move(nl));
  }
  return out;
}

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& series,
                            double window_start, double window_end,
                            DecayModel model) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  std::vector<std::pair<double, double>> used;
  for (const auto& [t, v] : series) {
    if (t < window_start || t > window_end) continue;
    if (!(v > 0.0))
      throw std::invalid_argument("fit_decay_exponent: nonpositive value in window");
    const double x =
        model == DecayModel::Algebraic ? std::log(japanese_bracket(t)) : t;
    const double y = std::log(v);
    used.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2)
    throw std::invalid_argument("fit_decay_exponent: fewer than 2 points in window");
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("fit_decay_exponent: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (const auto& [x, y] : used) {
    const double r = y - (intercept + slope * x);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / n)};
}

std::optional<double> enhanced_dissipation_timescale(
    const std::vector<std::pair<double, double>>& series) {
  if (series.empty() || !(series.front().second > 0.0)) return std::nullopt;
  const double target = series.front().second / std::numbers::e;
  for (size_t i = 1; i < series.size(); ++i) {
    const auto [t0, v0] = series[i - 1];
    const auto [t1, v1] = series[i];
    if (v1 <= target) {
      if (v0 == v1) return t1;
      return t0 + (t1 - t0) * (v0 - target) / (v0 - v1);
    }
  }
  return std::nullopt;
}

}  // namespace couette
