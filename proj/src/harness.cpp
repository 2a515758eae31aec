#include "couette/harness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "couette/initial_data.hpp"
#include "couette/snapshot_io.hpp"

namespace couette {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    default: return "inconclusive";
  }
}

namespace {

Classification classification_from_string(const std::string& s) {
  if (s == "stable") return Classification::Stable;
  if (s == "unstable") return Classification::Unstable;
  if (s == "inconclusive") return Classification::Inconclusive;
  throw std::invalid_argument("unknown classification '" + s + "'");
}

// Thrown by the run observer once the functional has already crossed the
// instability threshold; the truncated series classifies identically, so
// there is no point integrating to the horizon.
struct EarlyStopSignal {};

}  // namespace

double stability_functional(const FlowState& state, const PhysParams& params) {
  WeightSpec w_omega;
  w_omega.exp_rate_c = params.c;
  w_omega.lambda_on = true;
  w_omega.bracket_k_power = 1.0;
  w_omega.inv_bracket_power = params.epsilon;

  WeightSpec w_theta = w_omega;
  w_theta.bracket_k_power = 1.0 + 1.0 / 3.0;

  const double theta_scale = std::pow(params.nu, -1.0 / 3.0 - params.delta);
  return weighted_l2_norm(state.omega_hat, state.time, w_omega, params) +
         theta_scale *
             weighted_l2_norm(state.theta_hat, state.time, w_theta, params);
}

Classification classify_run(const RunRecord& record, const ClassifierSpec& spec) {
  if (record.aborted) return Classification::Unstable;
  if (record.functional.empty()) return Classification::Inconclusive;
  const double e0 = record.functional.front();
  const double emax =
      *std::max_element(record.functional.begin(), record.functional.end());
  if (e0 == 0.0)
    return emax == 0.0 ? Classification::Stable : Classification::Inconclusive;
  if (emax > spec.growth_factor * e0) return Classification::Unstable;
  if (record.functional.back() <= spec.end_factor * e0)
    return Classification::Stable;
  return Classification::Inconclusive;
}

void ScanConfig::validate() const {
  grid.validate();
  base.validate();
  if (nu_ladder.empty() || amplitude_ladder.empty())
    throw std::invalid_argument("ScanConfig: empty ladder");
  for (size_t i = 1; i < nu_ladder.size(); ++i)
    if (!(nu_ladder[i] < nu_ladder[i - 1]))
      throw std::invalid_argument("ScanConfig: nu_ladder must strictly decrease");
  for (size_t i = 1; i < amplitude_ladder.size(); ++i)
    if (!(amplitude_ladder[i] > amplitude_ladder[i - 1]))
      throw std::invalid_argument(
          "ScanConfig: amplitude_ladder must strictly increase");
  for (double a : amplitude_ladder)
    if (!(a > 0.0))
      throw std::invalid_argument("ScanConfig: amplitudes must be positive");
  if (bisection_depth < 0)
    throw std::invalid_argument("ScanConfig: bisection_depth < 0");
  if (!(k_max_active > 0.0) || !(horizon_factor > 0.0) || !(cfl_target > 0.0))
    throw std::invalid_argument("ScanConfig: positive horizon/k/cfl required");
}

double ScanConfig::horizon(double nu) const {
  const double shear_cap =
      base.dealias_fraction * (grid.modes_y / 2) * grid.dky() / k_max_active;
  return std::min(horizon_factor * std::pow(nu, -1.0 / 3.0), shear_cap);
}

ScanConfig parse_scan_config(const nlohmann::json& j) {
  ScanConfig c;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid = FrequencyGrid(g.value("box_length_x", 2.0 * std::numbers::pi),
                           g.value("box_length_y", 2.0 * std::numbers::pi),
                           g.value("modes_x", 8), g.value("modes_y", 8));
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    c.base.params.nu = p.value("nu", c.base.params.nu);
    c.base.params.mu = p.value("mu", c.base.params.mu);
    c.base.params.delta = p.value("delta", c.base.params.delta);
    c.base.params.epsilon = p.value("epsilon", c.base.params.epsilon);
    c.base.params.kappa = p.value("kappa", c.base.params.kappa);
    c.base.params.c = p.value("c", c.base.params.c);
    c.base.params.c0 = p.value("c0", c.base.params.c0);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    c.base.dt = s.value("dt", c.base.dt);
    c.base.dealias_fraction = s.value("dealias_fraction", c.base.dealias_fraction);
    c.base.record_dt = s.value("record_dt", c.base.record_dt);
    c.base.remap_interval = s.value("remap_interval", c.base.remap_interval);
  }
  c.nu_ladder = j.value("nu_ladder", c.nu_ladder);
  c.amplitude_ladder = j.value("amplitude_ladder", c.amplitude_ladder);
  c.coupling_rho = j.value("coupling_rho", c.coupling_rho);
  c.bisection_depth = j.value("bisection_depth", c.bisection_depth);
  c.horizon_factor = j.value("horizon_factor", c.horizon_factor);
  c.k_max_active = j.value("k_max_active", c.k_max_active);
  c.cfl_target = j.value("cfl_target", c.cfl_target);
  if (j.contains("classifier")) {
    c.classifier.growth_factor =
        j.at("classifier").value("growth_factor", c.classifier.growth_factor);
    c.classifier.end_factor =
        j.at("classifier").value("end_factor", c.classifier.end_factor);
  }
  if (j.contains("initial_omega")) c.initial_omega = j.at("initial_omega");
  if (j.contains("initial_theta")) c.initial_theta = j.at("initial_theta");
  c.validate();
  return c;
}

nlohmann::json dump_scan_config(const ScanConfig& c) {
  return {
      {"grid",
       {{"box_length_x", c.grid.box_length_x},
        {"box_length_y", c.grid.box_length_y},
        {"modes_x", c.grid.modes_x},
        {"modes_y", c.grid.modes_y}}},
      {"params",
       {{"nu", c.base.params.nu},
        {"mu", c.base.params.mu},
        {"delta", c.base.params.delta},
        {"epsilon", c.base.params.epsilon},
        {"kappa", c.base.params.kappa},
        {"c", c.base.params.c},
        {"c0", c.base.params.c0}}},
      {"solver",
       {{"dt", c.base.dt},
        {"dealias_fraction", c.base.dealias_fraction},
        {"record_dt", c.base.record_dt},
        {"remap_interval", c.base.remap_interval}}},
      {"nu_ladder", c.nu_ladder},
      {"amplitude_ladder", c.amplitude_ladder},
      {"coupling_rho", c.coupling_rho},
      {"bisection_depth", c.bisection_depth},
      {"horizon_factor", c.horizon_factor},
      {"k_max_active", c.k_max_active},
      {"cfl_target", c.cfl_target},
      {"classifier",
       {{"growth_factor", c.classifier.growth_factor},
        {"end_factor", c.classifier.end_factor}}},
      {"initial_omega", c.initial_omega},
      {"initial_theta", c.initial_theta}};
}

RunRecord execute_run(const ScanConfig& config, double nu, double amplitude) {
  const auto t_start = std::chrono::steady_clock::now();

  SolverConfig sc = config.base;
  sc.params.nu = nu;
  sc.params.mu = nu;  // the theorem's regime
  sc.t_end = config.horizon(nu);

  nlohmann::json omega_spec = config.initial_omega;
  omega_spec["amplitude"] = amplitude;
  nlohmann::json theta_spec = config.initial_theta;
  theta_spec["amplitude"] = std::pow(amplitude, config.coupling_rho);

  FlowState state;
  state.omega_hat = build_initial_field(config.grid, omega_spec);
  state.theta_hat = build_initial_field(config.grid, theta_spec);

  // Deterministic per-run CFL-limited step from the initial velocity.
  {
    SpectralField u1, u2;
    biot_savart(state.omega_hat, 0.0, u1, u2);
    SpectralTransform tf(config.grid);
    const double umax = std::max(tf.to_physical(u1).abs().maxCoeff(),
                                 tf.to_physical(u2).abs().maxCoeff());
    const double dx = std::min(config.grid.box_length_x / config.grid.modes_x,
                               config.grid.box_length_y / config.grid.modes_y);
    if (umax > 0.0)
      sc.dt = std::min(sc.dt, config.cfl_target * dx / umax);
    sc.dt = std::min(sc.dt, sc.record_dt);
  }

  RunRecord record;
  record.config = {{"nu", nu},
                   {"amplitude", amplitude},
                   {"theta_amplitude", theta_spec["amplitude"]},
                   {"dt", sc.dt},
                   {"t_end", sc.t_end}};

  Solver solver(config.grid, sc);
  auto observer = [&](const FlowState& s) {
    record.times.push_back(s.time);
    record.functional.push_back(stability_functional(s, sc.params));

    WeightSpec w_omega;
    w_omega.exp_rate_c = sc.params.c;
    w_omega.lambda_on = true;
    w_omega.bracket_k_power = 1.0;
    w_omega.inv_bracket_power = sc.params.epsilon;
    WeightSpec w_theta = w_omega;
    w_theta.bracket_k_power = 1.0 + 1.0 / 3.0;
    record.omega_channel.push_back(
        weighted_l2_norm(s.omega_hat, s.time, w_omega, sc.params));
    record.theta_channel.push_back(
        std::pow(sc.params.nu, -1.0 / 3.0 - sc.params.delta) *
        weighted_l2_norm(s.theta_hat, s.time, w_theta, sc.params));

    const double e0 = record.functional.front();
    if (e0 > 0.0 &&
        record.functional.back() > config.classifier.growth_factor * e0)
      throw EarlyStopSignal{};
  };
  try {
    solver.run(state, observer);
  } catch (const EarlyStopSignal&) {
    // series already proves instability
  } catch (const std::runtime_error&) {
    record.aborted = true;
  }
  record.classification = classify_run(record, config.classifier);
  record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return record;
}

namespace {

struct PerNuResult {
  std::vector<RunRecord> runs;
  ThresholdPoint point{};
};

PerNuResult search_one_nu(const ScanConfig& config, double nu,
                          const std::function<RunRecord(double, double)>& runner) {
  PerNuResult result;
  std::vector<Classification> ladder_cls;
  for (double a : config.amplitude_ladder) {
    RunRecord rec = runner(nu, a);
    ladder_cls.push_back(rec.classification);
    result.runs.push_back(std::move(rec));
  }

  // Monotone = a (possibly empty) stable prefix followed by non-stable runs.
  bool seen_nonstable = false, monotone = true;
  int last_stable = -1;
  for (size_t i = 0; i < ladder_cls.size(); ++i) {
    if (ladder_cls[i] == Classification::Stable) {
      if (seen_nonstable) monotone = false;
      last_stable = int(i);
    } else {
      seen_nonstable = true;
    }
  }

  ThresholdPoint& pt = result.point;
  pt.nu = nu;
  pt.monotone = monotone;
  if (!seen_nonstable) {
    pt.a_star = config.amplitude_ladder.back();
    pt.censored = true;
    return result;
  }
  pt.censored = false;
  if (last_stable < 0 || !monotone) {
    pt.a_star = last_stable < 0 ? 0.0 : config.amplitude_ladder[last_stable];
    return result;
  }

  double lo = config.amplitude_ladder[last_stable];
  double hi = config.amplitude_ladder[last_stable + 1];
  for (int d = 0; d < config.bisection_depth; ++d) {
    const double mid = std::sqrt(lo * hi);
    RunRecord rec = runner(nu, mid);
    const bool stable = rec.classification == Classification::Stable;
    result.runs.push_back(std::move(rec));
    (stable ? lo : hi) = mid;
  }
  pt.a_star = lo;
  return result;
}

void fit_threshold_slope(ScanOutcome& outcome) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : outcome.thresholds) {
    if (p.censored || !p.monotone || !(p.a_star > 0.0)) continue;
    pts.emplace_back(std::log(p.nu), std::log(p.a_star));
  }
  if (pts.size() < 2) return;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(pts.size());
  const double sxx_c = sxx - sx * sx / n;
  if (sxx_c == 0.0) return;
  outcome.slope = (sxy - sx * sy / n) / sxx_c;
  const double intercept = (sy - outcome.slope * sx) / n;
  double rss = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (intercept + outcome.slope * x);
    rss += r * r;
  }
  outcome.slope_stderr =
      pts.size() > 2 ? std::sqrt(rss / ((n - 2.0) * sxx_c)) : 0.0;
  outcome.slope_valid = true;
}

}  // namespace

ScanOutcome scan_thresholds(
    const ScanConfig& config,
    const std::function<RunRecord(double, double)>& runner, int workers) {
  config.validate();
  std::function<RunRecord(double, double)> run_fn = runner;
  if (!run_fn)
    run_fn = [&config](double nu, double a) { return execute_run(config, nu, a); };

  std::vector<PerNuResult> by_nu(config.nu_ladder.size());
  const int pool = std::max(1, std::min<int>(workers, int(by_nu.size())));
  if (pool == 1) {
    for (size_t i = 0; i < by_nu.size(); ++i)
      by_nu[i] = search_one_nu(config, config.nu_ladder[i], run_fn);
  } else {
    std::vector<std::thread> threads;
    std::mutex next_mutex;
    size_t next = 0;
    for (int w = 0; w < pool; ++w)
      threads.emplace_back([&] {
        for (;;) {
          size_t i;
          {
            std::lock_guard lock(next_mutex);
            if (next >= by_nu.size()) return;
            i = next++;
          }
          by_nu[i] = search_one_nu(config, config.nu_ladder[i], run_fn);
        }
      });
    for (auto& t : threads) t.join();
  }

  ScanOutcome outcome;
  outcome.config = config;
  for (auto& r : by_nu) {
    outcome.thresholds.push_back(r.point);
    for (auto& rec : r.runs) outcome.runs.push_back(std::move(rec));
  }
  fit_threshold_slope(outcome);
  return outcome;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

void write_summary_files(const ScanOutcome& outcome,
                         const std::filesystem::path& dir) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : outcome.thresholds)
    rows.push_back({p.nu, p.a_star, p.censored ? 1.0 : 0.0, p.monotone ? 1.0 : 0.0});
  write_csv(dir / "summary.csv", {"nu", "a_star", "censored", "monotone"}, rows);

  nlohmann::json report = {{"slope", outcome.slope},
                           {"slope_stderr", outcome.slope_stderr},
                           {"slope_valid", outcome.slope_valid},
                           {"thresholds", nlohmann::json::array()}};
  for (const auto& p : outcome.thresholds)
    report["thresholds"].push_back({{"nu", p.nu},
                                    {"a_star", p.a_star},
                                    {"censored", p.censored},
                                    {"monotone", p.monotone}});
  write_text(dir / "report.json", report.dump(2) + "\n");

  std::ofstream plot(dir / "plot.csv");
  plot << "run,t,quantity,value\n";
  for (size_t r = 0; r < outcome.runs.size(); ++r) {
    const auto& rec = outcome.runs[r];
    for (size_t i = 0; i < rec.times.size(); ++i)
      plot << r << "," << format_double(rec.times[i]) << ",functional,"
           << format_double(rec.functional[i]) << "\n";
  }
}

}  // namespace

void export_report(const ScanOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "runs");

  nlohmann::json manifest = {{"format_version", 1},
                             {"config", dump_scan_config(outcome.config)}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  std::vector<std::vector<double>> timings;
  for (size_t r = 0; r < outcome.runs.size(); ++r) {
    const auto& rec = outcome.runs[r];
    nlohmann::json meta = {{"config", rec.config},
                           {"classification", to_string(rec.classification)},
                           {"aborted", rec.aborted}};
    write_text(dir / "runs" / ("run_" + std::to_string(r) + ".json"),
               meta.dump(2) + "\n");
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < rec.times.size(); ++i)
      rows.push_back({rec.times[i], rec.functional[i], rec.omega_channel[i],
                      rec.theta_channel[i]});
    write_csv(dir / "runs" / ("run_" + std::to_string(r) + ".csv"),
              {"t", "functional", "omega_channel", "theta_channel"}, rows);
    timings.push_back({double(r), rec.wall_time});
  }
  write_csv(dir / "timings.csv", {"run", "wall_time"}, timings);
  write_summary_files(outcome, dir);
}

void regenerate_report(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.json");
  if (!mf)
    throw std::runtime_error("cannot open manifest: " +
                             (dir / "manifest.json").string());
  const ScanConfig config =
      parse_scan_config(nlohmann::json::parse(mf).at("config"));

  // Stored records grouped per nu; replaying them through the search logic in
  // order reproduces the original bisection queries.
  std::map<double, std::vector<RunRecord>, std::greater<double>> queues;
  for (size_t r = 0;; ++r) {
    const auto path = dir / "runs" / ("run_" + std::to_string(r) + ".json");
    std::ifstream in(path);
    if (!in) break;
    const nlohmann::json meta = nlohmann::json::parse(in);
    RunRecord rec;
    rec.config = meta.at("config");
    rec.aborted = meta.at("aborted");
    rec.classification =
        classification_from_string(meta.at("classification").get<std::string>());
    {
      std::ifstream csv(dir / "runs" / ("run_" + std::to_string(r) + ".csv"));
      std::string line;
      std::getline(csv, line);  // header
      while (std::getline(csv, line)) {
        double t, f, oc, tc;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &f, &oc, &tc) == 4) {
          rec.times.push_back(t);
          rec.functional.push_back(f);
          rec.omega_channel.push_back(oc);
          rec.theta_channel.push_back(tc);
        }
      }
    }
    queues[rec.config.at("nu").get<double>()].push_back(std::move(rec));
  }
  std::mutex queue_mutex;
  auto replay = [&](double nu, double amplitude) {
    std::lock_guard lock(queue_mutex);
    auto it = queues.find(nu);
    if (it == queues.end() || it->second.empty())
      throw std::runtime_error("regenerate_report: missing stored run");
    RunRecord rec = std::move(it->second.front());
    it->second.erase(it->second.begin());
    const double stored = rec.config.at("amplitude").get<double>();
    if (std::abs(stored - amplitude) > 1e-12 * std::max(1.0, amplitude))
      throw std::runtime_error("regenerate_report: stored runs out of order");
    return rec;
  };

  ScanOutcome outcome = scan_thresholds(config, replay, 1);
  write_summary_files(outcome, dir);
}

}  // namespace couette
