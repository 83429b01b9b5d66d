#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "survlim/depgen.hpp"
#include "survlim/estimators.hpp"
#include "survlim/limits.hpp"
#include "survlim/stats.hpp"

namespace survlim {

struct ExperimentConfig {
  DependenceModel model;
  long n = 1000;
  int replications = 100;
  std::string regime = "weak";  // "weak" | "lrd"

  std::vector<double> t_grid;  // explicit grid; if empty, H-quantiles below
  std::vector<double> h_quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};

  double sigma2 = 1.0;
  bool calibrate_sigma2 = false;  // "sigma2": "calibrate"

  std::uint64_t seed = 1;
  int limit_replications = 2000;
  double ks_alpha = 0.01;
  int subgrid = 8192;
  BridgeCoupling coupling = BridgeCoupling::EmpiricalJoint;

  // lrd machinery
  int k_max = 6;
  double rank_tol = 1e-6;
  std::size_t lrd_surrogate_m = std::size_t{1} << 16;

  // pinned verdict thresholds
  double variance_ratio_tol = 0.10;
  double rank_one_min = 0.90;
  double mid_corr_min = 0.95;
  double slope_tol = 0.05;

  void validate() const;
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct GridPointReport {
  double t = 0.0;
  double emp_mean_na = 0.0, emp_var_na = 0.0;
  double emp_mean_km = 0.0, emp_var_km = 0.0;
  double lim_var_na = 0.0, lim_var_km = 0.0;
  KsResult ks_na, ks_km;
};

struct ExperimentReport {
  std::string schema_version = "1";
  ExperimentConfig config;
  std::vector<double> t_grid;
  double a_n = 0.0;

  std::vector<GridPointReport> grid;
  bool ks_pass = true;

  // weak regime: classical variance oracle int_0^t (1-H)^{-2} dH1
  std::vector<double> variance_oracle;
  std::vector<double> variance_ratio_na;  // emp var of sqrt(n)-normalized dev / oracle
  bool variance_applicable = false;
  bool variance_pass = true;
  double sigma2_used = 1.0;
  bool sigma2_was_calibrated = false;
  std::string bridge_coupling;

  // lrd regime
  int rank_r = 0, rank_r0 = 0, rank_r1 = 0;  // r0 = 0 means "no censored mass"
  double sigma_n = 0.0;
  std::vector<double> zeta_literal, zeta_substitution;
  double zeta_sup_discrepancy = 0.0;
  DegeneracyDiagnostic degeneracy;
  double min_mid_abs_correlation = 0.0;
  std::size_t z_t_index = 0;
  KsResult z_normality;
  double slope_sigma_n2 = 0.0, slope_expected = 0.0;
  bool degeneracy_pass = true, z_pass = true, slope_pass = true;

  bool overall_pass = false;

  // raw per-replication samples (row = replication, column = grid point)
  std::vector<std::vector<double>> na_dev, km_dev;
  std::vector<std::vector<double>> limit_na, limit_km;

  std::string to_json_text() const;  // deterministic byte-stable serialization
};

// Monte Carlo FCLT verification: generate, estimate, normalize, compare
// against the constructed limit sample. threads = 0 picks the hardware
// concurrency; the output is byte-identical for any thread count.
ExperimentReport run_fclt_experiment(const ExperimentConfig& cfg, int threads = 0);

// report.json + samples.csv + plotdata.csv + limits.csv under dir
void write_report_files(const ExperimentReport& report, const std::string& dir);

// resolve the evaluation grid (explicit t_grid or H-quantiles cut at 0.95)
std::vector<double> resolve_t_grid(const ExperimentConfig& cfg, const TrueModel& model);

}  // namespace survlim
