// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one [PASS]/[FAIL] line per criterion. Exit code is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "survlim/depgen.hpp"
#include "survlim/distributions.hpp"
#include "survlim/estimators.hpp"
#include "survlim/harness.hpp"
#include "survlim/hermite.hpp"
#include "survlim/limits.hpp"
#include "survlim/rng.hpp"
#include "survlim/stats.hpp"
#include "survlim/stepfun.hpp"

using namespace survlim;

namespace {

struct CriterionResult {
  bool pass = true;
  std::ostringstream detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CensoredSample random_censored(RngStream& rng, std::size_t n) {
  std::vector<double> t(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = -std::log(rng.uniform01());
    c[i] = -2.0 * std::log(rng.uniform01());
  }
  return censoring_overlay(t, c);
}

CensoredSample random_uncensored(RngStream& rng, std::size_t n) {
  std::vector<double> t(n), c(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) t[i] = -std::log(rng.uniform01());
  return censoring_overlay(t, c);
}

// ---------------------------------------------------------------- criterion 1
CriterionResult criterion1() {
  CriterionResult res;
  const CensoredSample worked(
      {CensoredObservation{1.0, true}, CensoredObservation{2.0, false},
       CensoredObservation{3.0, true}});
  const StepFunction na = nelson_aalen(worked);
  const StepFunction km = kaplan_meier(worked);
  if (na.eval(3.0) != 4.0 / 3.0) {
    res.pass = false;
    res.detail << " Lambda_n(3) != 4/3;";
  }
  if (km.eval(3.0) != 0.0) {
    res.pass = false;
    res.detail << " S_n(3) != 0;";
  }
  double worst = 0.0;
  RngStream rng(101, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 200);
    const CensoredSample s = random_censored(rng, n);
    const StepFunction a = nelson_aalen(s);
    const StepFunction b = nelson_aalen_integral_form(s);
    for (std::size_t i = 0; i < a.jump_count(); ++i) {
      worst = std::max(worst, std::abs(a.cumulative()[i] - b.cumulative()[i]));
    }
  }
  if (!(worst <= 1e-12)) {
    res.pass = false;
  }
  res.detail << " max |integral - risk-set| = " << worst << " (tol 1e-12)";
  return res;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult criterion2() {
  CriterionResult res;
  RngStream rng(202, 0);
  double km_worst = 0.0;
  long km_mismatches = 0, km_points = 0;
  bool na_exact = true;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 200);
    const CensoredSample s = random_uncensored(rng, n);
    std::vector<double> times;
    for (const auto& o : s.observations) times.push_back(o.time);
    std::sort(times.begin(), times.end());

    // KM = 1 - ecdf, exact float equality against the (n-k)/n oracle
    const StepFunction km = kaplan_meier(s);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double oracle = static_cast<double>(n - k - 1) / static_cast<double>(n);
      const double got = km.eval(times[k]);
      ++km_points;
      if (got != oracle) {
        ++km_mismatches;
        km_worst = std::max(km_worst, std::abs(got - oracle));
      }
    }

    // NA = running sum of d/Y over order statistics, exact
    const StepFunction na = nelson_aalen(s);
    double acc = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      acc += 1.0 / static_cast<double>(n - k);
      if (na.eval(times[k]) != acc) na_exact = false;
    }
  }
  if (km_mismatches > 0) res.pass = false;
  if (!na_exact) res.pass = false;
  res.detail << " NA sums exact: " << (na_exact ? "yes" : "NO") << "; KM==1-ecdf exact at "
             << (km_points - km_mismatches) << "/" << km_points
             << " points, max |diff| = " << km_worst
             << " (cumulative float product of 1 - d/Y cannot reproduce the single-division "
                "(n-k)/n value bit-for-bit)";
  return res;
}

ExperimentConfig weak_iid_config() {
  ExperimentConfig cfg;
  cfg.model.variant = DependenceModel::Variant::Iid;
  cfg.model.lifetime = Dist::exponential(1.0);
  cfg.model.censoring = Dist::exponential(0.5);
  cfg.n = 5000;
  cfg.replications = 500;
  cfg.regime = "weak";
  cfg.sigma2 = 1.0;
  cfg.seed = 3;
  cfg.limit_replications = 2000;
  cfg.ks_alpha = 0.01;
  return cfg;
}

// ---------------------------------------------------------------- criterion 3
CriterionResult criterion3(const ExperimentReport& rep) {
  CriterionResult res;
  // variance of sqrt(n)(Lambda_n - Lambda) at H^{-1}(0.25), H^{-1}(0.5)
  for (std::size_t j : {std::size_t{1}, std::size_t{2}}) {
    const double ratio = rep.variance_ratio_na[j];
    if (!(std::abs(ratio - 1.0) <= 0.10)) res.pass = false;
    res.detail << " var ratio t" << j << " = " << ratio << ";";
  }
  if (!rep.ks_pass) res.pass = false;
  double worst_ks = 0.0, crit = 0.0;
  for (const auto& g : rep.grid) {
    worst_ks = std::max({worst_ks, g.ks_na.statistic, g.ks_km.statistic});
    crit = g.ks_na.critical_value;
  }
  res.detail << " max KS (na,km over grid) = " << worst_ks << " vs critical " << crit;
  return res;
}

// ---------------------------------------------------------------- criterion 4
CriterionResult criterion4() {
  CriterionResult res;
  ExperimentConfig cfg = weak_iid_config();
  cfg.model.variant = DependenceModel::Variant::MixingAr1;
  cfg.model.rho = 0.5;
  cfg.calibrate_sigma2 = true;
  cfg.seed = 5;
  const ExperimentReport rep = run_fclt_experiment(cfg);
  if (!rep.ks_pass) res.pass = false;
  if (!rep.sigma2_was_calibrated) res.pass = false;
  const std::string json = rep.to_json_text();
  if (json.find("sigma2_was_calibrated") == std::string::npos) res.pass = false;
  double worst_ks = 0.0, crit = 0.0;
  for (const auto& g : rep.grid) {
    worst_ks = std::max({worst_ks, g.ks_na.statistic, g.ks_km.statistic});
    crit = g.ks_na.critical_value;
  }
  res.detail << " calibrated sigma2 = " << rep.sigma2_used << " (recorded in report); max KS = "
             << worst_ks << " vs critical " << crit;
  return res;
}

// ---------------------------------------------------------------- criterion 5
CriterionResult criterion5() {
  CriterionResult res;
  const Dist f = Dist::exponential(1.0);
  const SubordinationMap map = SubordinationMap::quantile_of(f);
  const IndicatorSpec any_spec{map, EventClass::Any, Dist::none()};

  // eta_1 quadrature vs -phi(g^{-1}(t)) closed form on a 64-point grid
  double eta_worst = 0.0;
  const std::vector<double> grid = default_rank_grid(map, 64);
  for (double t : grid) {
    const double closed = -normal_pdf(normal_quantile(f.cdf(t)));
    eta_worst = std::max(eta_worst, std::abs(hermite_coefficient(1, t, any_spec) - closed));
  }
  if (!(eta_worst <= 1e-8)) res.pass = false;
  res.detail << " max |eta_1 - closed form| = " << eta_worst << " (tol 1e-8);";

  // Parseval at K_max = 40 with tolerance 1e-6
  double parseval_worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); j += 9) {
    const double t = grid[j];
    const double p = f.cdf(t);
    double acc = 0.0, kfact = 1.0;
    for (int k = 1; k <= 40; ++k) {
      kfact *= k;
      const double eta = hermite_coefficient(k, t, any_spec);
      acc += eta * eta / kfact;
    }
    parseval_worst = std::max(parseval_worst, std::abs(acc - p * (1.0 - p)));
  }
  if (!(parseval_worst <= 1e-6)) res.pass = false;
  res.detail << " Parseval residual at K_max=40: " << parseval_worst
             << " (tol 1e-6; indicator coefficients decay like k^{-3/2} in square, so the "
                "truncated sum is short of the variance by O(K^{-1/2}));";

  // rank detection
  bool ranks_ok = true;
  try {
    const auto mono = hermite_expansion(any_spec, grid, 4, 1e-6);
    if (mono.rank != 1) ranks_ok = false;
    const IndicatorSpec abs_spec{SubordinationMap::abs_value(), EventClass::Any, Dist::none()};
    const auto abs_exp =
        hermite_expansion(abs_spec, default_rank_grid(abs_spec.map, 64), 4, 1e-6);
    if (abs_exp.rank != 2) ranks_ok = false;
  } catch (const std::exception& e) {
    ranks_ok = false;
    res.detail << " rank detection error: " << e.what() << ";";
  }
  if (!ranks_ok) res.pass = false;
  res.detail << " ranks (monotone, |x|) = (1, 2): " << (ranks_ok ? "yes" : "NO");
  return res;
}

// ---------------------------------------------------------------- criterion 6
CriterionResult criterion6() {
  CriterionResult res;
  const auto cov = power_law_covariance(0.4, SlowlyVarying::constant());
  std::vector<double> lx, ly;
  for (int e = 10; e <= 14; ++e) {
    const long n = 1L << e;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(sigma_n_squared(cov, 1, n)));
  }
  double mx = 0.0, my = 0.0;
  for (double v : lx) mx += v;
  for (double v : ly) my += v;
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  if (!(std::abs(slope - 1.6) <= 0.05)) res.pass = false;
  res.detail << " slope of log sigma_n^2 vs log n = " << slope << " (want 1.6 +- 0.05)";
  return res;
}

// ---------------------------------------------------------------- criterion 7
CriterionResult criterion7() {
  CriterionResult res;
  const std::size_t n = std::size_t{1} << 14;
  const int paths = 200;
  const int max_lag = 50;
  for (double d : {0.2, 0.4}) {
    const GaussianLrdGenerator gen(n, d, SlowlyVarying::constant());
    std::vector<std::vector<double>> acv(static_cast<std::size_t>(max_lag),
                                         std::vector<double>(paths));
    for (int r = 0; r < paths; ++r) {
      RngStream rng(707, static_cast<std::uint64_t>(r));
      const auto x = gen.generate(rng);
      for (int lag = 1; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) acc += x[i] * x[i + lag];
        acv[static_cast<std::size_t>(lag - 1)][r] =
            acc / static_cast<double>(n - static_cast<std::size_t>(lag));
      }
    }
    double worst_z = 0.0;
    int worst_lag = 0;
    for (int lag = 1; lag <= max_lag; ++lag) {
      const auto& col = acv[static_cast<std::size_t>(lag - 1)];
      const double mean = sample_mean(col);
      const double se = std::sqrt(sample_variance(col) / paths);
      const double target = std::pow(static_cast<double>(lag), -d);
      const double z = (mean - target) / se;
      if (std::abs(z) > std::abs(worst_z)) {
        worst_z = z;
        worst_lag = lag;
      }
    }
    if (!(std::abs(worst_z) <= 3.0)) res.pass = false;
    res.detail << " d=" << d << ": max |z| = " << std::abs(worst_z) << " at lag " << worst_lag
               << " (realized-cov gap " << gen.realized_covariance(1) - 1.0 << " at lag 1, "
               << "spectral defect " << gen.spectral_defect() << ");";
  }
  res.detail << " target cov(0)=cov(1)=1 is not attainable by any nondegenerate process, so "
                "the PSD-projected generator misses k^{-d} beyond 3 SE at small lags";
  return res;
}

ExperimentConfig lrd_config() {
  ExperimentConfig cfg;
  cfg.model.variant = DependenceModel::Variant::Lrd;
  cfg.model.d = 0.2;
  cfg.model.lifetime = Dist::exponential(1.0);
  cfg.model.censoring = Dist::exponential(0.5);
  cfg.regime = "lrd";
  cfg.n = 1L << 14;
  cfg.replications = 200;
  cfg.limit_replications = 2000;
  cfg.seed = 2;
  cfg.ks_alpha = 0.01;
  return cfg;
}

// ---------------------------------------------------------------- criterion 8
CriterionResult criterion8(const ExperimentReport& rep) {
  CriterionResult res;
  if (!(rep.degeneracy.rank_one_score >= 0.9)) res.pass = false;
  if (!(rep.min_mid_abs_correlation >= 0.95)) res.pass = false;
  if (rep.z_normality.reject) res.pass = false;
  res.detail << " rank-one score = " << rep.degeneracy.rank_one_score
             << "; min mid-grid |corr| = " << rep.min_mid_abs_correlation
             << "; z KS = " << rep.z_normality.statistic << " vs critical "
             << rep.z_normality.critical_value << " at t index " << rep.z_t_index;
  return res;
}

// ---------------------------------------------------------------- criterion 9
CriterionResult criterion9(const ExperimentReport& rep) {
  CriterionResult res;
  const std::string json = rep.to_json_text();
  if (rep.zeta_literal.size() != rep.t_grid.size() ||
      rep.zeta_substitution.size() != rep.t_grid.size()) {
    res.pass = false;
  }
  if (json.find("zeta_literal") == std::string::npos ||
      json.find("zeta_substitution") == std::string::npos ||
      json.find("zeta_sup_discrepancy") == std::string::npos) {
    res.pass = false;
  }
  res.detail << " both zeta forms reported; sup discrepancy = " << rep.zeta_sup_discrepancy
             << " (open question, reported not gated)";
  return res;
}

// --------------------------------------------------------------- criterion 10
CriterionResult criterion10() {
  CriterionResult res;
  ExperimentConfig cfg = weak_iid_config();
  const ExperimentReport serial = run_fclt_experiment(cfg, 1);
  const ExperimentReport parallel = run_fclt_experiment(cfg, 0);  // hardware threads
  const bool identical = serial.to_json_text() == parallel.to_json_text();
  if (!identical) res.pass = false;
  res.detail << " serial and parallel report JSON "
             << (identical ? "byte-identical" : "DIFFER");
  return res;
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* name;
    double runtime_limit;
    CriterionResult result;
    double elapsed;
  };
  std::vector<Entry> entries;

  const auto run = [&entries](int number, const char* name, double limit, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " unexpected error: " << e.what();
    }
    const double elapsed = seconds_since(start);
    if (limit > 0.0 && elapsed > limit) {
      r.pass = false;
      r.detail << " [runtime " << elapsed << " s over limit " << limit << " s]";
    }
    entries.push_back({number, name, limit, std::move(r), elapsed});
    const Entry& e = entries.back();
    std::printf("[%s] criterion %d: %s —%s (%.2f s)\n", e.result.pass ? "PASS" : "FAIL",
                e.number, e.name, e.result.detail.str().c_str(), e.elapsed);
    std::fflush(stdout);
  };

  run(1, "estimator exactness", 1.0, criterion1);
  run(2, "no-censoring reduction (exact)", 1.0, criterion2);

  // criterion 3 runs once; its report is reused for the timing bound of 10
  ExperimentReport weak_report;
  double c3_elapsed = 0.0;
  {
    const auto start = std::chrono::steady_clock::now();
    weak_report = run_fclt_experiment(weak_iid_config());
    c3_elapsed = seconds_since(start);
  }
  run(3, "theorem 3, i.i.d. regime", 120.0, [&] {
    CriterionResult r = criterion3(weak_report);
    if (c3_elapsed > 120.0) {
      r.pass = false;
      r.detail << " [experiment runtime " << c3_elapsed << " s over 120 s]";
    }
    return r;
  });
  run(4, "theorem 3, mixing regime (calibrated sigma2)", 120.0, criterion4);
  run(5, "hermite machinery", 10.0, criterion5);
  run(6, "rate law slope", 5.0, criterion6);
  run(7, "lrd generator fidelity", 60.0, criterion7);

  ExperimentReport lrd_report;
  {
    const auto start = std::chrono::steady_clock::now();
    lrd_report = run_fclt_experiment(lrd_config());
    const double elapsed = seconds_since(start);
    run(8, "theorem 4 degeneracy", 180.0, [&] {
      CriterionResult r = criterion8(lrd_report);
      if (elapsed > 180.0) {
        r.pass = false;
        r.detail << " [experiment runtime " << elapsed << " s over 180 s]";
      }
      return r;
    });
  }
  run(9, "theorem 4 formula cross-check reported", 30.0,
      [&] { return criterion9(lrd_report); });
  run(10, "determinism across parallel schedules", 2.0 * std::max(c3_elapsed, 1.0) + 120.0,
      criterion10);

  int failures = 0;
  for (const auto& e : entries) {
    if (!e.result.pass) ++failures;
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", entries.size() - failures,
              entries.size());
  return failures;
}
