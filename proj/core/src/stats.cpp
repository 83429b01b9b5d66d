#include "survlim/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace survlim {

double ks_asymptotic_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks: alpha must be in (0,1)");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  if (a.size() < 30 || b.size() < 30) {
    throw std::invalid_argument("ks_two_sample: both samples need at least 30 points");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  KsResult out;
  out.statistic = d;
  out.alpha = alpha;
  out.critical_value = ks_asymptotic_coefficient(alpha) * std::sqrt((m + n) / (m * n));
  out.reject = out.statistic > out.critical_value;
  return out;
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double alpha) {
  if (sample.size() < 30) {
    throw std::invalid_argument("ks_one_sample: sample needs at least 30 points");
  }
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  KsResult out;
  out.statistic = d;
  out.alpha = alpha;
  out.critical_value = ks_asymptotic_coefficient(alpha) / std::sqrt(n);
  out.reject = out.statistic > out.critical_value;
  return out;
}

DegeneracyDiagnostic degeneracy_diagnostic(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 100) {
    throw std::invalid_argument("degeneracy_diagnostic: need at least 100 replications");
  }
  const std::size_t reps = samples.size();
  const std::size_t m = samples[0].size();
  for (const auto& row : samples) {
    if (row.size() != m) {
      throw std::invalid_argument("degeneracy_diagnostic: ragged sample matrix");
    }
  }
  std::vector<double> means(m, 0.0);
  for (const auto& row : samples) {
    for (std::size_t j = 0; j < m; ++j) means[j] += row[j];
  }
  for (double& v : means) v /= static_cast<double>(reps);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<int>(m), static_cast<int>(m));
  for (const auto& row : samples) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j; k < m; ++k) {
        cov(static_cast<int>(j), static_cast<int>(k)) +=
            (row[j] - means[j]) * (row[k] - means[k]);
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      const double v = cov(static_cast<int>(j), static_cast<int>(k)) /
                       static_cast<double>(reps - 1);
      cov(static_cast<int>(j), static_cast<int>(k)) = v;
      cov(static_cast<int>(k), static_cast<int>(j)) = v;
    }
  }

  DegeneracyDiagnostic out;
  out.correlation.assign(m, std::vector<double>(m, 1.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const double denom = std::sqrt(cov(static_cast<int>(j), static_cast<int>(j)) *
                                     cov(static_cast<int>(k), static_cast<int>(k)));
      out.correlation[j][k] =
          denom > 0.0 ? cov(static_cast<int>(j), static_cast<int>(k)) / denom : 0.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("degeneracy_diagnostic: eigensolver failed");
  }
  const double trace = solver.eigenvalues().sum();
  out.rank_one_score =
      trace > 0.0 ? solver.eigenvalues()(static_cast<int>(m) - 1) / trace : 0.0;
  return out;
}

double sample_mean(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("sample_mean: empty sample");
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
  const double m = sample_mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size() - 1);
}

double sample_skewness(const std::vector<double>& x) {
  if (x.size() < 3) throw std::invalid_argument("sample_skewness: need at least 3 points");
  const double m = sample_mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(x.size());
  m3 /= static_cast<double>(x.size());
  return m3 / std::pow(m2, 1.5);
}

double sample_quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_quantile: p outside [0,1]");
  std::sort(x.begin(), x.end());
  const double idx = p * static_cast<double>(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double frac = idx - static_cast<double>(lo);
  return x[lo] * (1.0 - frac) + x[hi] * frac;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation: need equal-length samples, n >= 2");
  }
  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double denom = std::sqrt(sxx * syy);
  return denom > 0.0 ? sxy / denom : 0.0;
}

}  // namespace survlim
