#pragma once

#include <filesystem>
#include <functional>

#include <nlohmann/json.hpp>

#include "couette/diagnostics.hpp"
#include "couette/solver.hpp"

namespace couette {

enum class Classification { Stable, Unstable, Inconclusive };
const char* to_string(Classification c);

struct ClassifierSpec {
  double growth_factor = 10.0;  // G: unstable once E(t) > G * E(0)
  double end_factor = 1.0;      // stable additionally needs E(end) <= this * E(0)
};

/// The stability functional of the weighted pair:
///   E(t) = ||W omega|| + nu^{-1/3-delta} ||W <k>^{1/3} theta||,
/// W = exp(c nu^{1/3} lambda(k) t) <k> <1/k>^eps. k = 0 column excluded by
/// the <1/k> weight policy.
double stability_functional(const FlowState& state, const PhysParams& params);

struct RunRecord {
  nlohmann::json config;  // run-defining inputs (nu, amplitudes, dt, t_end)
  std::vector<double> times;
  std::vector<double> functional;
  std::vector<double> omega_channel;
  std::vector<double> theta_channel;
  bool aborted = false;  // solver blow-up / NaN
  Classification classification = Classification::Inconclusive;
  double wall_time = 0.0;
};

Classification classify_run(const RunRecord& record, const ClassifierSpec& spec);

struct ScanConfig {
  FrequencyGrid grid;
  SolverConfig base;  // dt is an upper bound; per-run dt obeys a CFL target
  std::vector<double> nu_ladder;        // strictly decreasing
  std::vector<double> amplitude_ladder; // strictly increasing A_omega values
  double coupling_rho = 2.0;            // A_theta = A_omega^rho
  ClassifierSpec classifier;
  int bisection_depth = 6;
  double horizon_factor = 5.0;  // t_end = min(factor * nu^{-1/3}, shear cap)
  double k_max_active = 2.0;    // largest energetic |k|, sets the shear cap
  double cfl_target = 0.5;
  nlohmann::json initial_omega = {{"type", "gaussian_bump"}};
  nlohmann::json initial_theta = {{"type", "gaussian_bump"}};

  void validate() const;
  /// min(horizon_factor nu^{-1/3}, dealias_fraction (Ny/2) dky / k_max_active).
  double horizon(double nu) const;
};

ScanConfig parse_scan_config(const nlohmann::json& j);
nlohmann::json dump_scan_config(const ScanConfig& config);

struct ThresholdPoint {
  double nu;
  double a_star;       // largest stable amplitude found
  bool censored;       // entire ladder stable (a_star = ladder top)
  bool monotone;       // classification monotone along the ladder
};

struct ScanOutcome {
  ScanConfig config;
  std::vector<RunRecord> runs;  // deterministic (config-order) sequence
  std::vector<ThresholdPoint> thresholds;
  double slope = 0.0;        // log a_star vs log nu least squares
  double slope_stderr = 0.0;
  bool slope_valid = false;  // >= 2 uncensored monotone points
};

/// One full simulation at (nu, A_omega), classified.
RunRecord execute_run(const ScanConfig& config, double nu, double amplitude);

/// Ladder sweep plus log-space bisection per nu. runner defaults to
/// execute_run; tests inject mock classifiers through it. workers bounds the
/// pool parallelizing over nu entries; reduction is config-ordered.
ScanOutcome scan_thresholds(
    const ScanConfig& config,
    const std::function<RunRecord(double, double)>& runner = {}, int workers = 1);

/// Writes manifest.json, summary.csv, report.json (fit), plot.csv and
/// runs/run_<i>.{json,csv}; everything except timings.csv is byte-deterministic.
void export_report(const ScanOutcome& outcome, const std::filesystem::path& dir);

/// Rebuild summary.csv / report.json / plot.csv from a stored run directory.
void regenerate_report(const std::filesystem::path& dir);

}  // namespace couette
