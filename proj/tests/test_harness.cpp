#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "survlim/harness.hpp"

using survlim::DependenceModel;
using survlim::Dist;
using survlim::ExperimentConfig;
using survlim::ExperimentReport;
using survlim::run_fclt_experiment;

namespace {

ExperimentConfig smoke_config() {
  ExperimentConfig cfg;
  cfg.model.variant = DependenceModel::Variant::Iid;
  cfg.model.lifetime = Dist::exponential(1.0);
  cfg.model.censoring = Dist::exponential(0.5);
  cfg.n = 50;
  cfg.replications = 100;
  cfg.regime = "weak";
  cfg.limit_replications = 200;
  cfg.subgrid = 256;
  cfg.seed = 4;
  return cfg;
}

}  // namespace

TEST_CASE("config JSON round trip") {
  const std::string text = R"({
    "model": {
      "variant": "lrd", "d": 0.2,
      "l0": {"kind": "log_power", "exponent": 0.5},
      "lifetime": {"family": "exponential", "rate": 1.0},
      "censoring": {"family": "exponential", "rate": 0.5}
    },
    "n": 1024, "replications": 200, "regime": "lrd",
    "sigma2": "calibrate", "seed": 9, "ks_alpha": 0.05
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
  CHECK(cfg.model.variant == DependenceModel::Variant::Lrd);
  CHECK(cfg.model.d == 0.2);
  CHECK(cfg.model.l0.kind == survlim::SlowlyVarying::Kind::LogPow);
  CHECK(cfg.calibrate_sigma2);
  CHECK(cfg.ks_alpha == 0.05);
  // echo parses back to the same config
  const ExperimentConfig echo = ExperimentConfig::from_json_text(cfg.to_json_text());
  CHECK(echo.model.d == cfg.model.d);
  CHECK(echo.calibrate_sigma2 == cfg.calibrate_sigma2);
  CHECK(echo.seed == cfg.seed);
}

TEST_CASE("config validation failures carry diagnostics") {
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text("{"), doctest::Contains("parse error"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text("{}"), doctest::Contains("model"),
                       std::runtime_error);
  const std::string bad_reps = R"({
    "model": {"variant": "iid", "lifetime": {"family": "exponential", "rate": 1.0}},
    "replications": 10
  })";
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text(bad_reps),
                       doctest::Contains("replications"), std::invalid_argument);
}

TEST_CASE("smoke experiment produces finite statistics everywhere") {
  const ExperimentReport rep = run_fclt_experiment(smoke_config());
  REQUIRE(rep.t_grid.size() == 5);
  for (const auto& g : rep.grid) {
    CHECK(std::isfinite(g.emp_mean_na));
    CHECK(std::isfinite(g.emp_var_na));
    CHECK(std::isfinite(g.emp_mean_km));
    CHECK(std::isfinite(g.emp_var_km));
    CHECK(std::isfinite(g.ks_na.statistic));
    CHECK(std::isfinite(g.ks_km.statistic));
    CHECK(g.ks_na.critical_value > 0.0);
  }
  CHECK(rep.a_n == doctest::Approx(1.0 / std::sqrt(50.0)));
  // centering: replication mean within 4 MC standard errors of zero
  for (const auto& g : rep.grid) {
    const double se = std::sqrt(g.emp_var_na / 100.0);
    CHECK(std::abs(g.emp_mean_na) < 4.0 * se);
  }
}

TEST_CASE("report JSON is byte-identical across thread counts") {
  const ExperimentConfig cfg = smoke_config();
  const ExperimentReport serial = run_fclt_experiment(cfg, 1);
  const ExperimentReport parallel = run_fclt_experiment(cfg, 4);
  REQUIRE(serial.to_json_text() == parallel.to_json_text());
}

TEST_CASE("report files are written and parse back") {
  const ExperimentReport rep = run_fclt_experiment(smoke_config());
  const std::string dir = (std::filesystem::temp_directory_path() / "survlim_test_out").string();
  std::filesystem::remove_all(dir);
  survlim::write_report_files(rep, dir);
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "report.json"));
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "samples.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "plotdata.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "limits.csv"));
  std::ifstream is(std::filesystem::path(dir) / "samples.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,replication,na_dev,km_dev");
  std::filesystem::remove_all(dir);
}

TEST_CASE("explicit t_grid outside the precondition is rejected") {
  ExperimentConfig cfg = smoke_config();
  cfg.t_grid = {10.0};  // H(10) is essentially 1
  CHECK_THROWS_WITH_AS(run_fclt_experiment(cfg), doctest::Contains("0.95"),
                       std::invalid_argument);
}

TEST_CASE("lrd smoke run carries the degenerate-limit diagnostics") {
  ExperimentConfig cfg;
  cfg.model.variant = DependenceModel::Variant::Lrd;
  cfg.model.d = 0.2;
  cfg.model.lifetime = Dist::exponential(1.0);
  cfg.model.censoring = Dist::exponential(0.5);
  cfg.regime = "lrd";
  cfg.n = 512;
  cfg.replications = 120;
  cfg.limit_replications = 150;
  cfg.seed = 11;
  const ExperimentReport rep = run_fclt_experiment(cfg);
  CHECK(rep.rank_r == 1);
  CHECK(rep.rank_r1 == 1);
  CHECK(rep.rank_r0 == 1);
  REQUIRE(rep.zeta_literal.size() == rep.t_grid.size());
  REQUIRE(rep.zeta_substitution.size() == rep.t_grid.size());
  CHECK(rep.zeta_sup_discrepancy > 0.0);
  CHECK(rep.degeneracy.rank_one_score > 0.5);
  CHECK(std::isfinite(rep.z_normality.statistic));
  CHECK(rep.slope_expected == doctest::Approx(1.8));
  CHECK(std::abs(rep.slope_sigma_n2 - 1.8) < 0.05);
  const std::string json = rep.to_json_text();
  CHECK(json.find("zeta_literal") != std::string::npos);
  CHECK(json.find("zeta_substitution") != std::string::npos);
}
