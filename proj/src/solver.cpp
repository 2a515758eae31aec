#include "couette/solver.hpp"

#include <cmath>
#include <iostream>

namespace couette {

void FlowState::validate() const {
  require_same_grid(omega_hat, theta_hat);
  if (time < 0.0 || frame_time < 0.0 || frame_time > time)
    throw std::invalid_argument("FlowState: need 0 <= frame_time <= time");
  if (!omega_hat.all_finite() || !theta_hat.all_finite())
    throw std::invalid_argument("FlowState: non-finite coefficients");
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end < 0");
  if (!(dealias_fraction > 0.5 && dealias_fraction < 1.0))
    throw std::invalid_argument("SolverConfig: dealias_fraction must be in (1/2, 1)");
  if (remap_interval < 0.0)
    throw std::invalid_argument("SolverConfig: remap_interval < 0");
  if (!(record_dt > 0.0))
    throw std::invalid_argument("SolverConfig: record_dt must be positive");
}

std::pair<Complex, Complex> moving_frame_gradient_symbol(double k, double eta,
                                                         double t) {
  return {Complex(0.0, k), Complex(0.0, eta - k * t)};
}

double damping_integral(double k, double eta, double t1, double t2) {
  if (t2 < t1) throw std::domain_error("damping_integral: t2 < t1");
  if (k == 0.0) return eta * eta * (t2 - t1);
  const double a = eta - k * t1, b = eta - k * t2;
  return k * k * (t2 - t1) + (a * a * a - b * b * b) / (3.0 * k);
}

void biot_savart(const SpectralField& omega_hat, double t, SpectralField& u1_hat,
                 SpectralField& u2_hat) {
  const FrequencyGrid& g = omega_hat.grid;
  u1_hat = SpectralField(g);
  u2_hat = SpectralField(g);
  for (int i = 0; i < g.modes_x; ++i) {
    const double k = g.wavenumber_x(i);
    for (int j = 0; j < g.modes_y; ++j) {
      const double xi = stationary_from_moving(g.wavenumber_y(j), k, t);
      const double denom = k * k + xi * xi;
      if (denom == 0.0) continue;  // mean mode pinned to zero
      const Complex w = omega_hat.at(i, j);
      u1_hat.at(i, j) = Complex(0.0, -xi) * w / denom;
      u2_hat.at(i, j) = Complex(0.0, k) * w / denom;
    }
  }
}

Solver::Solver(const FrequencyGrid& grid, const SolverConfig& config)
    : config_(config), transform_(grid) {
  config_.validate();
  dealias_mask_ = RealGrid::Ones(grid.modes_x, grid.modes_y);
  const double cut_x = config_.dealias_fraction * (grid.modes_x / 2);
  const double cut_y = config_.dealias_fraction * (grid.modes_y / 2);
  for (int i = 0; i < grid.modes_x; ++i)
    for (int j = 0; j < grid.modes_y; ++j)
      if (std::abs(grid.signed_index_x(i)) >= cut_x ||
          std::abs(grid.signed_index_y(j)) >= cut_y)
        dealias_mask_(i, j) = 0.0;
}

void Solver::nonlinear_term(const SpectralField& omega_hat,
                            const SpectralField& theta_hat, double shear_age,
                            SpectralField& n_omega, SpectralField& n_theta,
                            bool with_buoyancy) {
  const FrequencyGrid& g = omega_hat.grid;
  n_omega = SpectralField(g);
  n_theta = SpectralField(g);

  if (with_buoyancy)
    for (int i = 0; i < g.modes_x; ++i) {
      const Complex ik(0.0, g.wavenumber_x(i));
      for (int j = 0; j < g.modes_y; ++j)
        n_omega.at(i, j) = ik * theta_hat.at(i, j);
    }
  if (!config_.nonlinear) return;

  SpectralField u1, u2, dwx(g), dwy(g), dtx(g), dty(g);
  biot_savart(omega_hat, shear_age, u1, u2);
  for (int i = 0; i < g.modes_x; ++i) {
    const double k = g.wavenumber_x(i);
    for (int j = 0; j < g.modes_y; ++j) {
      const auto [dx, dy] =
          moving_frame_gradient_symbol(k, g.wavenumber_y(j), shear_age);
      dwx.at(i, j) = dx * omega_hat.at(i, j);
      dwy.at(i, j) = dy * omega_hat.at(i, j);
      dtx.at(i, j) = dx * theta_hat.at(i, j);
      dty.at(i, j) = dy * theta_hat.at(i, j);
    }
  }

  const RealGrid pu1 = transform_.to_physical(u1);
  const RealGrid pu2 = transform_.to_physical(u2);
  const RealGrid adv_w = pu1 * transform_.to_physical(dwx).eval() +
                         pu2 * transform_.to_physical(dwy).eval();
  const RealGrid adv_t = pu1 * transform_.to_physical(dtx).eval() +
                         pu2 * transform_.to_physical(dty).eval();
  last_u_over_dx_ =
      std::max(pu1.abs().maxCoeff() / (g.box_length_x / g.modes_x),
               pu2.abs().maxCoeff() / (g.box_length_y / g.modes_y));

  SpectralField conv_w = transform_.to_spectral(adv_w);
  SpectralField conv_t = transform_.to_spectral(adv_t);
  n_omega.coeffs -= dealias_mask_ * conv_w.coeffs;
  n_theta.coeffs -= dealias_mask_ * conv_t.coeffs;
}

void Solver::step(FlowState& state, double dt) {
  const FrequencyGrid& g = state.omega_hat.grid;
  const double tau = state.shear_age();
  const double nu = config_.params.nu, mu = config_.params.mu;

  // Exact viscous/shear semigroup between stage times, per mode.
  RealGrid ew1(g.modes_x, g.modes_y), ew2(g.modes_x, g.modes_y),
      et1(g.modes_x, g.modes_y), et2(g.modes_x, g.modes_y);
  for (int i = 0; i < g.modes_x; ++i) {
    const double k = g.wavenumber_x(i);
    for (int j = 0; j < g.modes_y; ++j) {
      const double eta = g.wavenumber_y(j);
      const double d1 = damping_integral(k, eta, tau, tau + dt / 2.0);
      const double d2 = damping_integral(k, eta, tau + dt / 2.0, tau + dt);
      ew1(i, j) = std::exp(-nu * d1);
      ew2(i, j) = std::exp(-nu * d2);
      et1(i, j) = std::exp(-mu * d1);
      et2(i, j) = std::exp(-mu * d2);
    }
  }
  const RealGrid ewf = ew1 * ew2, etf = et1 * et2;

  SpectralField g1w, g1t, g2w, g2t, g3w, g3t, g4w, g4t;
  SpectralField aw(g), at(g);

  nonlinear_term(state.omega_hat, state.theta_hat, tau, g1w, g1t);
  last_cfl_ = last_u_over_dx_ * dt;
  if (last_cfl_ > 1.0 && !cfl_warned_) {
    std::cerr << "solver: CFL heuristic exceeded (|u| dt / dx = " << last_cfl_
              << " at t = " << state.time << ")\n";
    cfl_warned_ = true;
  }

  aw.coeffs = ew1 * (state.omega_hat.coeffs + (dt / 2.0) * g1w.coeffs);
  at.coeffs = et1 * (state.theta_hat.coeffs + (dt / 2.0) * g1t.coeffs);
  nonlinear_term(aw, at, tau + dt / 2.0, g2w, g2t);

  aw.coeffs = ew1 * state.omega_hat.coeffs + (dt / 2.0) * g2w.coeffs;
  at.coeffs = et1 * state.theta_hat.coeffs + (dt / 2.0) * g2t.coeffs;
  nonlinear_term(aw, at, tau + dt / 2.0, g3w, g3t);

  aw.coeffs = ewf * state.omega_hat.coeffs + dt * ew2 * g3w.coeffs;
  at.coeffs = etf * state.theta_hat.coeffs + dt * et2 * g3t.coeffs;
  nonlinear_term(aw, at, tau + dt, g4w, g4t);

  state.omega_hat.coeffs =
      ewf * state.omega_hat.coeffs +
      (dt / 6.0) * (ewf * g1w.coeffs + 2.0 * ew2 * (g2w.coeffs + g3w.coeffs) +
                    g4w.coeffs);
  state.theta_hat.coeffs =
      etf * state.theta_hat.coeffs +
      (dt / 6.0) * (etf * g1t.coeffs + 2.0 * et2 * (g2t.coeffs + g3t.coeffs) +
                    g4t.coeffs);
  state.time += dt;

  if (!state.omega_hat.all_finite() || !state.theta_hat.all_finite())
    throw std::runtime_error("solver: non-finite state at t = " +
                             std::to_string(state.time));
}

void Solver::run(FlowState& state,
                 const std::function<void(const FlowState&)>& observer) {
  state.validate();
  if (observer) observer(state);
  double next_record = state.time + config_.record_dt;
  const double t_end = config_.t_end;
  while (state.time < t_end - 1e-12) {
    const double h = std::min(config_.dt, t_end - state.time);
    step(state, h);
    if (config_.remap_interval > 0.0 &&
        state.shear_age() >= config_.remap_interval - 1e-12)
      remap(state);
    const bool at_end = state.time >= t_end - 1e-12;
    if (observer && (state.time + 1e-12 >= next_record || at_end)) {
      observer(state);
      while (next_record <= state.time + 1e-12) next_record += config_.record_dt;
    }
  }
}

void Solver::remap(FlowState& state) {
  const FrequencyGrid& g = state.omega_hat.grid;
  const double age = state.shear_age();
  if (age == 0.0) return;
  auto shift_rows = [&](SpectralField& f) {
    ComplexGrid out = ComplexGrid::Zero(g.modes_x, g.modes_y);
    for (int i = 0; i < g.modes_x; ++i) {
      const double k = g.wavenumber_x(i);
      const long m = std::llround(k * age / g.dky());
      for (int j = 0; j < g.modes_y; ++j) {
        const long sj = g.signed_index_y(j) - m;
        if (sj < -g.modes_y / 2 || sj >= g.modes_y / 2) continue;
        out(i, int((sj + g.modes_y) % g.modes_y)) = f.coeffs(i, j);
      }
    }
    f.coeffs = std::move(out);
  };
  shift_rows(state.omega_hat);
  shift_rows(state.theta_hat);
  state.frame_time = state.time;
}

}  // namespace couette
