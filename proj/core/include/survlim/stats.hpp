#pragma once

#include <functional>
#include <vector>

namespace survlim {

struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double alpha = 0.0;
  bool reject = false;
};

// classical two-sample Kolmogorov-Smirnov statistic with the asymptotic
// critical value c(alpha) * sqrt((m+n)/(mn)), c(alpha) = sqrt(-ln(alpha/2)/2);
// both samples need at least 30 points
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = 0.01);

// one-sample KS against a continuous cdf, critical value c(alpha)/sqrt(n)
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double alpha = 0.01);

double ks_asymptotic_coefficient(double alpha);

// Pairwise correlations across grid points and the share of the total
// variance carried by the top eigenvalue of the sample covariance
// (rank-one score in [0,1]). samples[r][j] = replication r at grid point j;
// needs >= 100 replications.
struct DegeneracyDiagnostic {
  std::vector<std::vector<double>> correlation;
  double rank_one_score = 0.0;
};

DegeneracyDiagnostic degeneracy_diagnostic(const std::vector<std::vector<double>>& samples);

double sample_mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);  // unbiased
double sample_skewness(const std::vector<double>& x);
double sample_quantile(std::vector<double> x, double p);
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace survlim
