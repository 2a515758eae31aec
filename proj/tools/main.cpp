#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "couette/estimates.hpp"
#include "couette/harness.hpp"
#include "couette/initial_data.hpp"
#include "couette/snapshot_io.hpp"

using nlohmann::json;

namespace {

std::filesystem::path default_out_root() {
  if (const char* root = std::getenv("COUETTE_OUTPUT_ROOT")) return root;
  return "out";
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  return json::parse(in);
}

couette::FrequencyGrid grid_from_json(const json& j) {
  const json g = j.value("grid", json::object());
  return couette::FrequencyGrid(g.value("box_length_x", 2.0 * std::numbers::pi),
                                g.value("box_length_y", 2.0 * std::numbers::pi),
                                g.value("modes_x", 64), g.value("modes_y", 64));
}

couette::SolverConfig solver_config_from_json(const json& j) {
  couette::SolverConfig c;
  const json p = j.value("params", json::object());
  c.params.nu = p.value("nu", c.params.nu);
  c.params.mu = p.value("mu", c.params.mu);
  c.params.delta = p.value("delta", c.params.delta);
  c.params.epsilon = p.value("epsilon", c.params.epsilon);
  c.params.kappa = p.value("kappa", c.params.kappa);
  c.params.c = p.value("c", c.params.c);
  c.params.c0 = p.value("c0", c.params.c0);
  const json s = j.value("solver", json::object());
  c.dt = s.value("dt", c.dt);
  c.t_end = s.value("t_end", c.t_end);
  c.dealias_fraction = s.value("dealias_fraction", c.dealias_fraction);
  c.remap_interval = s.value("remap_interval", c.remap_interval);
  c.nonlinear = s.value("nonlinear", c.nonlinear);
  c.record_dt = s.value("record_dt", c.record_dt);
  return c;
}

int cmd_verify_multipliers(double kappa, double nu, int grid_n, double t_max,
                           double tol) {
  couette::PhysParams params;
  params.kappa = kappa;
  params.nu = nu;
  couette::MultiplierContext ctx{params, tol};

  couette::estimates::GridSpec spec;
  spec.n_freq = grid_n;
  spec.n_t = grid_n;
  spec.t_max = t_max;
  const auto freqs = couette::estimates::frequency_axis(spec);
  const auto times = couette::estimates::time_axis(spec);

  const double c_kappa = couette::c3_bound(kappa, tol);
  double min_m = std::numeric_limits<double>::infinity(), max_m = 0.0;
  std::vector<couette::CoercivityPoint> pts;
  for (double t : times)
    for (double k : freqs)
      for (double xi : freqs) {
        const double m = couette::eval_m_total(ctx, t, k, xi);
        min_m = std::min(min_m, m);
        max_m = std::max(max_m, m);
      }
  // Coercivity / Upsilon identities on a thinner sample (they need kernel
  // quadratures per point).
  couette::estimates::GridSpec thin = spec;
  thin.n_freq = std::max(3, grid_n / 4);
  thin.n_t = std::max(3, grid_n / 4);
  for (double t : couette::estimates::time_axis(thin))
    for (double k : couette::estimates::frequency_axis(thin))
      for (double xi : couette::estimates::frequency_axis(thin))
        pts.push_back({t, k, xi});
  const couette::CoercivityReport rep = couette::check_coercivity(ctx, pts);

  json out = {{"c_kappa", c_kappa},
              {"min_M", min_m},
              {"max_M", max_m},
              {"min_upsilon", rep.min_upsilon},
              {"min_m1_slack", rep.min_m1_slack},
              {"max_m2_identity_err", rep.max_m2_identity_err},
              {"max_m3_upsilon_err", rep.max_m3_upsilon_err}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify_estimates(double delta, double kappa, double epsilon, double nu,
                         int grid_n) {
  couette::estimates::GridSpec spec;
  if (grid_n > 0) {
    spec.n_freq = grid_n;
    spec.n_t = grid_n;
  }
  couette::PhysParams params;
  params.delta = delta;
  params.kappa = kappa;
  params.epsilon = epsilon;
  params.nu = nu;
  couette::MultiplierContext ctx{params, 1e-8};

  json out = json::array();
  auto add = [&](const couette::estimates::ScanResult& r) {
    out.push_back({{"inequality", r.inequality},
                   {"sup_ratio", r.sup_ratio},
                   {"grid",
                    {{"freq_min", r.grid.freq_min},
                     {"freq_max", r.grid.freq_max},
                     {"n_freq", r.grid.n_freq},
                     {"t_max", r.grid.t_max},
                     {"n_t", r.grid.n_t}}}});
  };
  add(couette::estimates::scan_inviscid_damping(spec));
  add(couette::estimates::scan_frequency_growth(spec));
  add(couette::estimates::scan_low_freq_interpolation(spec, delta));
  add(couette::estimates::scan_commutator(spec));
  add(couette::estimates::scan_riesz(spec));
  add(couette::estimates::scan_m3_kernel(ctx, spec));
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, std::filesystem::path out_dir) {
  const json cfg = load_json_file(config_path);
  const couette::FrequencyGrid grid = grid_from_json(cfg);
  const couette::SolverConfig sc = solver_config_from_json(cfg);

  couette::FlowState state;
  state.omega_hat = couette::build_initial_field(
      grid, cfg.value("initial_omega", json{{"type", "zero"}}));
  state.theta_hat = couette::build_initial_field(
      grid, cfg.value("initial_theta", json{{"type", "zero"}}));

  std::filesystem::create_directories(out_dir);
  couette::write_snapshot(out_dir / "omega_initial.snap", state.omega_hat,
                          {{"time", 0.0}, {"field", "omega"}});
  couette::write_snapshot(out_dir / "theta_initial.snap", state.theta_hat,
                          {{"time", 0.0}, {"field", "theta"}});

  std::vector<std::vector<double>> rows;
  couette::Solver solver(grid, sc);
  solver.run(state, [&](const couette::FlowState& s) {
    rows.push_back({s.time, s.omega_hat.l2_norm(), s.theta_hat.l2_norm(),
                    couette::stability_functional(s, sc.params),
                    couette::shear_average_l2_norm(s.omega_hat)});
  });
  couette::write_csv(out_dir / "series.csv",
                     {"t", "l2_omega", "l2_theta", "functional", "shear_avg_omega"},
                     rows);
  couette::write_snapshot(out_dir / "omega_final.snap", state.omega_hat,
                          {{"time", state.time}, {"field", "omega"}});
  couette::write_snapshot(out_dir / "theta_final.snap", state.theta_hat,
                          {{"time", state.time}, {"field", "theta"}});
  std::ofstream(out_dir / "config.json") << cfg.dump(2) << "\n";
  std::cout << "simulate: wrote " << (out_dir / "series.csv").string() << "\n";
  return 0;
}

int cmd_fit(const std::string& series_path, int tcol, int vcol, double t0,
            double t1, const std::string& model) {
  std::ifstream in(series_path);
  if (!in) throw CLI::ValidationError("--series", "cannot open " + series_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::pair<double, double>> series;
  while (std::getline(in, line)) {
    std::vector<double> cells;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t comma = line.find(',', pos);
      cells.push_back(std::stod(line.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (int(cells.size()) > std::max(tcol, vcol))
      series.emplace_back(cells[tcol], cells[vcol]);
  }
  const auto fit = couette::fit_decay_exponent(
      series, t0, t1,
      model == "exp" ? couette::DecayModel::Exponential
                     : couette::DecayModel::Algebraic);
  json out = {{"exponent", fit.exponent},
              {"residual", fit.residual},
              {"model", model},
              {"window", {t0, t1}}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_scan(const std::string& config_path, int workers,
             std::filesystem::path out_dir) {
  const couette::ScanConfig config =
      couette::parse_scan_config(load_json_file(config_path));
  const couette::ScanOutcome outcome =
      couette::scan_thresholds(config, {}, workers);
  couette::export_report(outcome, out_dir);
  std::cout << "scan: " << outcome.runs.size() << " runs, slope "
            << outcome.slope << (outcome.slope_valid ? "" : " (invalid)")
            << ", report in " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for 2D Boussinesq stability around Couette flow"};
  app.require_subcommand(1);

  // verify-multipliers
  double vm_kappa = 0.1, vm_nu = 1e-3, vm_tmax = 64.0, vm_tol = 1e-8;
  int vm_grid = 9;
  auto* vm = app.add_subcommand("verify-multipliers",
                                "Certify multiplier bounds and coercivity");
  vm->add_option("--kappa", vm_kappa);
  vm->add_option("--nu", vm_nu);
  vm->add_option("--grid", vm_grid, "points per scan axis");
  vm->add_option("--t-max", vm_tmax);
  vm->add_option("--tol", vm_tol, "quadrature tolerance");

  // verify-estimates
  double ve_delta = 0.2, ve_kappa = 0.05, ve_eps = 0.45, ve_nu = 1e-3;
  int ve_grid = 0;
  auto* ve = app.add_subcommand("verify-estimates",
                                "Scan the scalar inequality ratios");
  ve->add_option("--delta", ve_delta);
  ve->add_option("--kappa", ve_kappa);
  ve->add_option("--epsilon", ve_eps);
  ve->add_option("--nu", ve_nu);
  ve->add_option("--grid", ve_grid, "points per scan axis (0 = default)");

  // simulate
  std::string sim_config;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Run one nonlinear simulation");
  sim->add_option("--config", sim_config)->required();
  sim->add_option("--out", sim_out);

  // fit
  std::string fit_series, fit_model = "alg";
  int fit_tcol = 0, fit_vcol = 1;
  double fit_t0 = 0.0, fit_t1 = 1e30;
  auto* fit = app.add_subcommand("fit", "Fit a decay exponent to a series CSV");
  fit->add_option("--series", fit_series)->required();
  fit->add_option("--tcol", fit_tcol);
  fit->add_option("--vcol", fit_vcol);
  fit->add_option("--t0", fit_t0);
  fit->add_option("--t1", fit_t1);
  fit->add_option("--model", fit_model)->check(CLI::IsMember({"alg", "exp"}));

  // scan
  std::string scan_config, scan_out;
  int scan_workers = 1;
  auto* scan = app.add_subcommand("scan", "Threshold scan over (nu, amplitude)");
  scan->add_option("--config", scan_config)->required();
  scan->add_option("--workers", scan_workers);
  scan->add_option("--out", scan_out);

  // report
  std::string report_dir;
  auto* report =
      app.add_subcommand("report", "Regenerate summaries from stored runs");
  report->add_option("--dir", report_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (vm->parsed())
      return cmd_verify_multipliers(vm_kappa, vm_nu, vm_grid, vm_tmax, vm_tol);
    if (ve->parsed())
      return cmd_verify_estimates(ve_delta, ve_kappa, ve_eps, ve_nu, ve_grid);
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_out.empty()
                                          ? default_out_root() / "simulate"
                                          : std::filesystem::path(sim_out));
    if (fit->parsed())
      return cmd_fit(fit_series, fit_tcol, fit_vcol, fit_t0, fit_t1, fit_model);
    if (scan->parsed())
      return cmd_scan(scan_config, scan_workers,
                      scan_out.empty() ? default_out_root() / "scan"
                                       : std::filesystem::path(scan_out));
    if (report->parsed()) {
      couette::regenerate_report(report_dir);
      std::cout << "report: regenerated summaries in " << report_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
