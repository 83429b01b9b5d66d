#pragma once

#include <memory>
#include <string>
#include <vector>

#include "survlim/distributions.hpp"
#include "survlim/estimators.hpp"
#include "survlim/hermite.hpp"
#include "survlim/rng.hpp"

namespace survlim {

// joint law of lifetimes and censoring times; censoring times are always
// drawn i.i.d. from G on an independent stream
struct DependenceModel {
  enum class Variant { Iid, MixingAr1, Lrd };

  Variant variant = Variant::Iid;
  double rho = 0.0;  // MixingAr1: AR(1) coefficient, |rho| < 1
  double d = 0.0;    // Lrd: memory parameter, 0 < d < 1
  SlowlyVarying l0;
  Dist lifetime = Dist::exponential(1.0);
  Dist censoring = Dist::none();

  void validate() const;
  std::string variant_name() const;
};

std::vector<double> gen_gaussian_iid(std::size_t n, RngStream& rng);

// stationary Gaussian AR(1), unit marginal variance, Cov(k) = rho^k
std::vector<double> gen_gaussian_ar1(double rho, std::size_t n, RngStream& rng);

// Stationary Gaussian sequence via circulant embedding of the covariance
// cov(0) = 1, cov(k) = k^{-d} l0(k), synthesized from complex normal
// spectral draws (Dietrich-Newsam).
//
// The literal target is not positive semidefinite (cov(1) = cov(0) = 1
// would force xi_{i+1} = xi_i), so the embedded spectrum always carries
// some negative mass. Negative eigenvalues are clamped to zero and the
// spectrum rescaled to unit variance; the realized covariance is the
// spectral projection of the target onto the valid cone and is exposed via
// realized_covariance(). Construction fails if the relative clamped mass
// exceeds max_spectral_defect.
class GaussianLrdGenerator {
 public:
  GaussianLrdGenerator(std::size_t n, double d, SlowlyVarying l0,
                       double max_spectral_defect = 0.10);
  ~GaussianLrdGenerator();
  GaussianLrdGenerator(const GaussianLrdGenerator&) = delete;
  GaussianLrdGenerator& operator=(const GaussianLrdGenerator&) = delete;

  // thread-safe for concurrent calls with independent streams
  std::vector<double> generate(RngStream& rng) const;

  std::size_t size() const { return n_; }
  std::size_t embedding_size() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }
  double spectral_defect() const { return defect_; }
  // covariance of the generated sequence at a given lag (0 <= lag < n)
  double realized_covariance(std::size_t lag) const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> weights_;
  std::vector<double> realized_cov_;
  double min_eig_ = 0.0;
  double defect_ = 0.0;
  void* plan_ = nullptr;
};

// one-shot convenience wrapper around GaussianLrdGenerator
std::vector<double> gen_gaussian_lrd(double d, SlowlyVarying l0, std::size_t n, RngStream& rng);

// t_i = F^{-1}(Phi(xi_i)); marginals are exactly F for standard normal xi
std::vector<double> subordinate(const std::vector<double>& xi, const Dist& marginal);

// Generator of censored samples under a dependence model. Lifetimes are the
// model variant subordinated to F on lane 0 of the replication stream;
// censoring times are i.i.d. from G on lane 1.
class SampleGenerator {
 public:
  SampleGenerator(DependenceModel model, std::size_t n);
  CensoredSample generate(RngStream rng) const;
  const DependenceModel& model() const { return model_; }
  std::size_t n() const { return n_; }
  const GaussianLrdGenerator* lrd_generator() const { return lrd_.get(); }

 private:
  DependenceModel model_;
  std::size_t n_;
  std::shared_ptr<const GaussianLrdGenerator> lrd_;
};

CensoredSample gen_censored_sample(const DependenceModel& model, std::size_t n, RngStream rng);

}  // namespace survlim
