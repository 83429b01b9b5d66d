#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "survlim/rng.hpp"
#include "survlim/stats.hpp"

using survlim::degeneracy_diagnostic;
using survlim::ks_one_sample;
using survlim::ks_two_sample;
using survlim::RngStream;

TEST_CASE("identical samples give a zero KS statistic") {
  std::vector<double> a(60);
  for (int i = 0; i < 60; ++i) a[static_cast<std::size_t>(i)] = i * 0.1;
  const auto r = ks_two_sample(a, a, 0.01);
  CHECK(r.statistic == 0.0);
  CHECK_FALSE(r.reject);
}

TEST_CASE("undersized samples are rejected") {
  std::vector<double> small(10, 1.0), ok(50, 1.0);
  CHECK_THROWS_AS(ks_two_sample(small, ok), std::invalid_argument);
  CHECK_THROWS_AS(ks_one_sample(small, [](double) { return 0.5; }), std::invalid_argument);
}

TEST_CASE("two-sample KS holds its level on matched normals") {
  int rejections = 0;
  const int runs = 200;
  for (int run = 0; run < runs; ++run) {
    RngStream rng(100 + run, 0);
    std::vector<double> a(500), b(500);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    if (ks_two_sample(a, b, 0.01).reject) ++rejections;
  }
  // alpha = 0.01: expect ~2 rejections in 200 runs; demand >= 98% acceptance
  CHECK(rejections <= 4);
}

TEST_CASE("two-sample KS separates a two-sigma mean shift") {
  RngStream rng(7, 0);
  std::vector<double> a(500), b(500);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal() + 2.0;
  CHECK(ks_two_sample(a, b, 0.01).reject);
}

TEST_CASE("one-sample KS accepts its own cdf") {
  RngStream rng(13, 0);
  std::vector<double> u(2000);
  for (auto& v : u) v = rng.uniform01();
  const auto r = ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.01);
  CHECK_FALSE(r.reject);
}

TEST_CASE("degeneracy diagnostic on an exact rank-one matrix") {
  RngStream rng(17, 0);
  const std::vector<double> shape = {0.5, -1.0, 2.0, 0.25};
  std::vector<std::vector<double>> samples(500, std::vector<double>(4));
  for (auto& row : samples) {
    const double z = rng.normal();
    for (std::size_t j = 0; j < 4; ++j) row[j] = shape[j] * z;
  }
  const auto diag = degeneracy_diagnostic(samples);
  CHECK(diag.rank_one_score == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(diag.correlation[j][k]) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("degeneracy diagnostic on white noise scores about 1/m") {
  RngStream rng(19, 0);
  const std::size_t m = 8;
  std::vector<std::vector<double>> samples(4000, std::vector<double>(m));
  for (auto& row : samples) {
    for (auto& v : row) v = rng.normal();
  }
  const auto diag = degeneracy_diagnostic(samples);
  CHECK(diag.rank_one_score < 2.5 / static_cast<double>(m));
  CHECK(diag.rank_one_score > 0.5 / static_cast<double>(m));
}

TEST_CASE("degeneracy diagnostic needs 100 replications") {
  std::vector<std::vector<double>> samples(99, std::vector<double>(3, 1.0));
  CHECK_THROWS_AS(degeneracy_diagnostic(samples), std::invalid_argument);
}

TEST_CASE("moment helpers") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  CHECK(survlim::sample_mean(x) == 2.5);
  CHECK(survlim::sample_variance(x) == doctest::Approx(5.0 / 3.0));
  CHECK(survlim::sample_quantile(x, 0.0) == 1.0);
  CHECK(survlim::sample_quantile(x, 1.0) == 4.0);
  CHECK(survlim::sample_quantile(x, 0.5) == 2.5);
  const std::vector<double> skewed = {0.0, 0.0, 0.0, 10.0};
  CHECK(survlim::sample_skewness(skewed) > 0.0);
  const std::vector<double> y = {2.0, 4.0, 6.0, 8.0};
  CHECK(survlim::pearson_correlation(x, y) == doctest::Approx(1.0));
}
