#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "couette/initial_data.hpp"
#include "couette/snapshot_io.hpp"
#include "couette/solver.hpp"

using namespace couette;

namespace {

PhysParams make_params(double nu, double mu) {
  PhysParams p;
  p.nu = nu;
  p.mu = mu;
  return p;
}

SpectralField bump(const FrequencyGrid& g, double amplitude, double ck = 1.0,
                   double ce = 0.0) {
  GaussianBumpSpec spec;
  spec.center_k = ck;
  spec.center_eta = ce;
  spec.amplitude = amplitude;
  return gaussian_bump_field(g, spec);
}

double divergence_defect(const SpectralField& u1, const SpectralField& u2,
                         double t) {
  const FrequencyGrid& g = u1.grid;
  double worst = 0.0;
  for (int i = 0; i < g.modes_x; ++i)
    for (int j = 0; j < g.modes_y; ++j) {
      const auto [dx, dy] =
          moving_frame_gradient_symbol(g.wavenumber_x(i), g.wavenumber_y(j), t);
      worst = std::max(worst, std::abs(dx * u1.at(i, j) + dy * u2.at(i, j)));
    }
  return worst;
}

// Direct convolution oracle for u . grad f on the signed-mode lattice; only
// bins inside the dealias mask are alias-free in the FFT path, so the caller
// compares masked output.
SpectralField brute_force_advection(const SpectralField& u1,
                                    const SpectralField& u2,
                                    const SpectralField& f, double t) {
  const FrequencyGrid& g = f.grid;
  SpectralField out(g);
  const int nx = g.modes_x, ny = g.modes_y;
  for (int i1 = 0; i1 < nx; ++i1)
    for (int j1 = 0; j1 < ny; ++j1) {
      const Complex a1 = u1.at(i1, j1), a2 = u2.at(i1, j1);
      if (a1 == Complex(0.0) && a2 == Complex(0.0)) continue;
      for (int i2 = 0; i2 < nx; ++i2)
        for (int j2 = 0; j2 < ny; ++j2) {
          const Complex fc = f.at(i2, j2);
          if (fc == Complex(0.0)) continue;
          const int sm_x = g.signed_index_x(i1) + g.signed_index_x(i2);
          const int sm_y = g.signed_index_y(j1) + g.signed_index_y(j2);
          if (sm_x < -nx / 2 || sm_x >= nx / 2 || sm_y < -ny / 2 ||
              sm_y >= ny / 2)
            continue;
          const auto [dx, dy] = moving_frame_gradient_symbol(
              g.wavenumber_x(i2), g.wavenumber_y(j2), t);
          out.at((sm_x + nx) % nx, (sm_y + ny) % ny) +=
              a1 * dx * fc + a2 * dy * fc;
        }
    }
  return out;
}

bool inside_dealias(const FrequencyGrid& g, double fraction, int i, int j) {
  return std::abs(g.signed_index_x(i)) < fraction * (g.modes_x / 2) &&
         std::abs(g.signed_index_y(j)) < fraction * (g.modes_y / 2);
}

}  // namespace

TEST_CASE("moving frame gradient symbol") {
  const auto [dx, dy] = moving_frame_gradient_symbol(1.0, 0.0, 2.0);
  CHECK(dx == Complex(0.0, 1.0));
  CHECK(dy == Complex(0.0, -2.0));
  const auto [dx0, dy0] = moving_frame_gradient_symbol(3.0, -1.0, 0.0);
  CHECK(dx0 == Complex(0.0, 3.0));
  CHECK(dy0 == Complex(0.0, -1.0));
}

TEST_CASE("damping integral closed form") {
  // Equals heat_phase(k, eta - k t, t) on (0, t).
  for (double k : {0.0, 1.0, -2.5})
    for (double eta : {0.0, 1.5, -3.0})
      for (double t : {0.5, 2.0}) {
        const double xi = stationary_from_moving(eta, k, t);
        CHECK(damping_integral(k, eta, 0.0, t) ==
              doctest::Approx(heat_phase(k, xi, t)).epsilon(1e-13));
      }
  // Additivity over subintervals.
  CHECK(damping_integral(1.0, 2.0, 0.0, 1.0) +
            damping_integral(1.0, 2.0, 1.0, 3.0) ==
        doctest::Approx(damping_integral(1.0, 2.0, 0.0, 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(damping_integral(1.0, 0.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("biot_savart single modes") {
  FrequencyGrid g;
  SpectralField w(g), u1, u2;
  w.at(1, 0) = Complex(1.0, 0.0);

  biot_savart(w, 0.0, u1, u2);
  CHECK(u1.at(1, 0) == Complex(0.0, 0.0));
  CHECK(u2.at(1, 0) == Complex(0.0, 1.0));  // i k / (k^2) = i

  // t = 2: xi = eta - k t = -2, denominator 1 + 4 = 5.
  biot_savart(w, 2.0, u1, u2);
  CHECK(std::abs(u1.at(1, 0) - Complex(0.0, 0.4)) < 1e-15);  // -i xi / 5 = 2i/5
  CHECK(std::abs(u2.at(1, 0) - Complex(0.0, 0.2)) < 1e-15);
}

TEST_CASE("biot_savart is divergence-free and pins the mean") {
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 16, 16);
  SpectralField w(g), u1, u2;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (int i = 0; i < g.modes_x; ++i)
    for (int j = 0; j < g.modes_y; ++j)
      w.at(i, j) = Complex(normal(rng), normal(rng));
  w.symmetrize_hermitian();
  for (double t : {0.0, 1.7}) {
    biot_savart(w, t, u1, u2);
    CHECK(divergence_defect(u1, u2, t) < 1e-14);
    CHECK(u1.at(0, 0) == Complex(0.0, 0.0));
    CHECK(u2.at(0, 0) == Complex(0.0, 0.0));
  }
}

TEST_CASE("nonlinear_term trivial inputs") {
  FrequencyGrid g;
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  Solver solver(g, cfg);

  SpectralField w(g), th(g), nw, nt;
  solver.nonlinear_term(w, th, 0.0, nw, nt);
  CHECK(nw.coeffs.abs().maxCoeff() == 0.0);
  CHECK(nt.coeffs.abs().maxCoeff() == 0.0);

  // Constant theta (mode (0,0)): buoyancy ik theta vanishes at k=0 and the
  // gradient of a constant is zero.
  th.at(0, 0) = Complex(3.0, 0.0);
  w.at(1, 0) = Complex(1.0, 0.0);
  w.at(g.modes_x - 1, 0) = Complex(1.0, 0.0);
  solver.nonlinear_term(w, th, 0.0, nw, nt);
  CHECK(nt.coeffs.abs().maxCoeff() < 1e-15);
}

TEST_CASE("nonlinear_term: two-mode beat against hand convolution") {
  FrequencyGrid g;
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  Solver solver(g, cfg);

  const Complex a(0.7, 0.2), b(-0.4, 0.9);
  SpectralField w(g), th(g), nw, nt;
  w.at(1, 0) = a;
  w.at(g.modes_x - 1, 0) = std::conj(a);
  th.at(0, 1) = b;
  th.at(0, g.modes_y - 1) = std::conj(b);
  solver.nonlinear_term(w, th, 0.0, nw, nt, /*with_buoyancy=*/false);

  // u2(1,0) = i a; (u2 d_y theta)(1,1) = (i a)(i b) = -a b; negated -> +a b.
  CHECK(std::abs(nt.at(1, 1) - a * b) < 1e-12);
  CHECK(std::abs(nt.at(g.modes_x - 1, g.modes_y - 1) - std::conj(a * b)) < 1e-12);
}

TEST_CASE("nonlinear_term matches brute-force convolution on random data") {
  FrequencyGrid g;
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  Solver solver(g, cfg);

  std::mt19937_64 rng(37);
  std::normal_distribution<double> normal;
  SpectralField w(g), th(g);
  for (int i = 0; i < g.modes_x; ++i)
    for (int j = 0; j < g.modes_y; ++j)
      if (inside_dealias(g, cfg.dealias_fraction, i, j)) {
        w.at(i, j) = Complex(normal(rng), normal(rng));
        th.at(i, j) = Complex(normal(rng), normal(rng));
      }
  w.symmetrize_hermitian();
  th.symmetrize_hermitian();

  const double t = 0.8;
  SpectralField nw, nt;
  solver.nonlinear_term(w, th, t, nw, nt, /*with_buoyancy=*/false);

  SpectralField u1, u2;
  biot_savart(w, t, u1, u2);
  const SpectralField adv_w = brute_force_advection(u1, u2, w, t);
  const SpectralField adv_t = brute_force_advection(u1, u2, th, t);
  for (int i = 0; i < g.modes_x; ++i)
    for (int j = 0; j < g.modes_y; ++j) {
      if (!inside_dealias(g, cfg.dealias_fraction, i, j)) {
        CHECK(nw.at(i, j) == Complex(0.0));
        continue;
      }
      CHECK(std::abs(nw.at(i, j) + adv_w.at(i, j)) < 1e-12);
      CHECK(std::abs(nt.at(i, j) + adv_t.at(i, j)) < 1e-12);
    }
}

TEST_CASE("linear solver matches the exact propagator") {
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 32, 32);
  SolverConfig cfg;
  cfg.params = make_params(5e-2, 5e-2);
  cfg.nonlinear = false;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  Solver solver(g, cfg);

  FlowState state;
  state.omega_hat = bump(g, 1.0);
  state.theta_hat = bump(g, 0.5, 1.0, 1.0);
  const SpectralField w0 = state.omega_hat, th0 = state.theta_hat;
  solver.run(state);

  LinearSolution sol{cfg.params, 0,
                     [&](double k, double xi) {
                       // nearest-mode lookup: data lives on the integer lattice
                       const int i = (int(std::lround(k)) + g.modes_x) % g.modes_x;
                       const int j = (int(std::lround(xi)) + g.modes_y) % g.modes_y;
                       return w0.at(i, j);
                     },
                     [&](double k, double xi) {
                       const int i = (int(std::lround(k)) + g.modes_x) % g.modes_x;
                       const int j = (int(std::lround(xi)) + g.modes_y) % g.modes_y;
                       return th0.at(i, j);
                     }};
  SpectralField w_exact(g), th_exact(g);
  evaluate_linear_on_grid(sol, state.time, w_exact, th_exact);
  CHECK((state.omega_hat.coeffs - w_exact.coeffs).abs().maxCoeff() < 1e-8);
  CHECK((state.theta_hat.coeffs - th_exact.coeffs).abs().maxCoeff() < 1e-8);
}

TEST_CASE("nonlinear step converges at 4th order") {
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 32, 32);
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  cfg.t_end = 0.5;
  auto advance = [&](double dt) {
    SolverConfig c = cfg;
    c.dt = dt;
    Solver solver(g, c);
    FlowState state;
    state.omega_hat = bump(g, 1.0);
    state.theta_hat = bump(g, 0.5, 1.0, 1.0);
    solver.run(state);
    return state;
  };
  const FlowState ref = advance(0.5 / 320.0);
  const FlowState s1 = advance(0.5 / 20.0);
  const FlowState s2 = advance(0.5 / 40.0);
  const double e1 = (s1.omega_hat.coeffs - ref.omega_hat.coeffs).abs().maxCoeff();
  const double e2 = (s2.omega_hat.coeffs - ref.omega_hat.coeffs).abs().maxCoeff();
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.5);
  CHECK(order < 4.6);
}

TEST_CASE("inviscid enstrophy conservation, theta = 0") {
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 128, 128);
  SolverConfig cfg;
  cfg.params = make_params(1e-3, 1e-3);
  cfg.params.nu = 0.0;  // Euler transport; SolverConfig does not re-validate
  cfg.params.mu = 0.0;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  Solver solver(g, cfg);

  FlowState state;
  state.omega_hat = bump(g, 0.5);
  state.theta_hat = SpectralField(g);
  const double n0 = state.omega_hat.l2_norm();
  solver.run(state);
  CHECK(std::abs(state.omega_hat.l2_norm() - n0) < 1e-8);
  CHECK(state.omega_hat.hermitian_defect() < 1e-13);
}

TEST_CASE("remap shifts rows by the integer shear displacement") {
  FrequencyGrid g;
  FlowState state;
  state.omega_hat = SpectralField(g);
  state.theta_hat = SpectralField(g);
  state.omega_hat.at(1, 2) = Complex(1.0, -2.0);
  state.omega_hat.at(g.modes_x - 1, g.modes_y - 2) = Complex(1.0, 2.0);
  state.time = 1.0;  // dky = 1 and k integer: the shift is exact
  state.frame_time = 0.0;

  Solver::remap(state);
  CHECK(state.frame_time == 1.0);
  CHECK(state.shear_age() == 0.0);
  // Row k=1 moves labels down by 1: (1,2) -> (1,1).
  CHECK(state.omega_hat.at(1, 1) == Complex(1.0, -2.0));
  CHECK(state.omega_hat.at(1, 2) == Complex(0.0));
  // Row k=-1 moves up by 1: (-1,-2) -> (-1,-1).
  CHECK(state.omega_hat.at(g.modes_x - 1, g.modes_y - 1) == Complex(1.0, 2.0));
}

TEST_CASE("remapped evolution agrees with the unremapped one") {
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 32, 32);
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  cfg.dt = 0.1;
  cfg.t_end = 2.0;
  // Linear mode keeps the comparison exact: with advection on, the fixed
  // dealias window covers different stationary frequencies in the two frames
  // and the runs legitimately differ at the truncation-tail level.
  cfg.nonlinear = false;

  auto make_state = [&] {
    FlowState s;
    s.omega_hat = bump(g, 0.8);
    s.theta_hat = bump(g, 0.3, 1.0, 1.0);
    return s;
  };

  SolverConfig with_remap = cfg;
  with_remap.remap_interval = 1.0;
  Solver s1(g, with_remap);
  FlowState a = make_state();
  s1.run(a);
  CHECK(a.frame_time == doctest::Approx(2.0));

  Solver s2(g, cfg);
  FlowState b = make_state();
  s2.run(b);
  Solver::remap(b);  // align frames before comparing coefficient arrays
  CHECK((a.omega_hat.coeffs - b.omega_hat.coeffs).abs().maxCoeff() < 1e-12);
  CHECK((a.theta_hat.coeffs - b.theta_hat.coeffs).abs().maxCoeff() < 1e-12);
}

TEST_CASE("snapshot restart is bit-identical") {
  namespace fs = std::filesystem;
  FrequencyGrid g(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 16, 16);
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  cfg.dt = 0.05;
  cfg.t_end = 0.4;

  FlowState state;
  state.omega_hat = bump(g, 1.0);
  state.theta_hat = bump(g, 0.5, 1.0, 1.0);
  {
    Solver solver(g, cfg);
    solver.run(state);
  }

  const fs::path dir = fs::temp_directory_path() / "couette_test_restart";
  fs::create_directories(dir);
  write_snapshot(dir / "w.bin", state.omega_hat, {{"time", state.time}});
  write_snapshot(dir / "t.bin", state.theta_hat, {{"time", state.time}});

  FlowState resumed;
  resumed.omega_hat = read_snapshot(dir / "w.bin");
  resumed.theta_hat = read_snapshot(dir / "t.bin");
  resumed.time = read_snapshot_metadata(dir / "w.bin").at("time").get<double>();
  CHECK(resumed.time == state.time);
  CHECK((resumed.omega_hat.coeffs == state.omega_hat.coeffs).all());

  SolverConfig cont = cfg;
  cont.t_end = 0.8;
  {
    Solver solver(g, cont);
    solver.run(resumed);
  }

  FlowState straight;
  straight.omega_hat = bump(g, 1.0);
  straight.theta_hat = bump(g, 0.5, 1.0, 1.0);
  {
    Solver solver(g, cont);
    solver.run(straight);
  }
  CHECK((resumed.omega_hat.coeffs == straight.omega_hat.coeffs).all());
  CHECK((resumed.theta_hat.coeffs == straight.theta_hat.coeffs).all());
  fs::remove_all(dir);
}

TEST_CASE("zero data stays zero; NaN input rejected") {
  FrequencyGrid g;
  SolverConfig cfg;
  cfg.params = make_params(1e-2, 1e-2);
  cfg.t_end = 0.3;
  cfg.dt = 0.1;
  Solver solver(g, cfg);
  FlowState state;
  state.omega_hat = SpectralField(g);
  state.theta_hat = SpectralField(g);
  solver.run(state);
  CHECK(state.omega_hat.coeffs.abs().maxCoeff() == 0.0);
  CHECK(state.theta_hat.coeffs.abs().maxCoeff() == 0.0);

  state.omega_hat.at(1, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(state.validate(), std::invalid_argument);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.dealias_fraction = 0.4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.record_dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
