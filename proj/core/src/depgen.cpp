#include "survlim/depgen.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace survlim {

namespace {
// FFTW planning is not thread-safe; plan execution on distinct buffers is.
std::mutex fftw_planner_mutex;

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) {
    data = fftw_alloc_complex(n);
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};
}  // namespace

void DependenceModel::validate() const {
  switch (variant) {
    case Variant::Iid:
      break;
    case Variant::MixingAr1:
      if (!(std::abs(rho) < 1.0)) {
        throw std::invalid_argument("DependenceModel: MixingAr1 requires |rho| < 1");
      }
      break;
    case Variant::Lrd:
      if (!(d > 0.0 && d < 1.0)) {
        throw std::invalid_argument("DependenceModel: Lrd requires 0 < d < 1");
      }
      break;
  }
  if (lifetime.is_none()) {
    throw std::invalid_argument("DependenceModel: lifetime marginal cannot be 'none'");
  }
}

std::string DependenceModel::variant_name() const {
  switch (variant) {
    case Variant::Iid: return "iid";
    case Variant::MixingAr1: return "mixing_ar1";
    case Variant::Lrd: return "lrd";
  }
  return "?";
}

std::vector<double> gen_gaussian_iid(std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("gen_gaussian_iid: n must be >= 1");
  std::vector<double> out;
  rng.fill_normals(out, n);
  return out;
}

std::vector<double> gen_gaussian_ar1(double rho, std::size_t n, RngStream& rng) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("gen_gaussian_ar1: need |rho| < 1");
  if (n < 1) throw std::invalid_argument("gen_gaussian_ar1: n must be >= 1");
  std::vector<double> out(n);
  const double innovation_sd = std::sqrt(1.0 - rho * rho);
  out[0] = rng.normal();  // stationary start
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = rho * out[i - 1] + innovation_sd * rng.normal();
  }
  return out;
}

GaussianLrdGenerator::GaussianLrdGenerator(std::size_t n, double d, SlowlyVarying l0,
                                           double max_spectral_defect) {
  if (n < 2) throw std::invalid_argument("GaussianLrdGenerator: n must be >= 2");
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("GaussianLrdGenerator: d must be in (0,1)");
  }
  n_ = n;
  std::size_t half = 1;
  while (half < n) half *= 2;
  m_ = 2 * half;

  // symmetric circulant row of the target covariance
  std::vector<double> row(m_, 0.0);
  row[0] = 1.0;
  for (std::size_t k = 1; k <= half; ++k) {
    const double kk = static_cast<double>(k);
    row[k] = std::pow(kk, -d) * l0(kk);
  }
  for (std::size_t k = half + 1; k < m_; ++k) {
    row[k] = row[m_ - k];
  }

  FftwBuffer in(m_), out(m_);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m_), in.data, out.data, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
    for (std::size_t j = 0; j < m_; ++j) {
      in.data[j][0] = row[j];
      in.data[j][1] = 0.0;
    }
    fftw_execute(p);
    fftw_destroy_plan(p);
  }

  std::vector<double> eig(m_);
  double pos_mass = 0.0, neg_mass = 0.0;
  min_eig_ = 0.0;
  for (std::size_t j = 0; j < m_; ++j) {
    eig[j] = out.data[j][0];
    min_eig_ = std::min(min_eig_, eig[j]);
    if (eig[j] > 0.0) {
      pos_mass += eig[j];
    } else {
      neg_mass -= eig[j];
      eig[j] = 0.0;  // clamp
    }
  }
  defect_ = neg_mass / (pos_mass + neg_mass);
  if (defect_ > max_spectral_defect) {
    std::ostringstream msg;
    msg << "GaussianLrdGenerator: clamped spectral mass " << defect_ << " exceeds "
        << max_spectral_defect
        << "; the target autocovariance is too far from positive semidefinite "
        << "(min eigenvalue " << min_eig_ << ")";
    throw std::runtime_error(msg.str());
  }

  // realized covariance of the clamped circulant, then rescale to unit variance
  const double md = static_cast<double>(m_);
  double var0 = 0.0;
  for (std::size_t j = 0; j < m_; ++j) var0 += eig[j];
  var0 /= md;
  realized_cov_.resize(n_);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m_), in.data, out.data, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    for (std::size_t j = 0; j < m_; ++j) {
      in.data[j][0] = eig[j];
      in.data[j][1] = 0.0;
    }
    fftw_execute(p);
    fftw_destroy_plan(p);
    // backward FFTW transform is unnormalized: gamma'(k) = out[k] / M
    for (std::size_t k = 0; k < n_; ++k) {
      realized_cov_[k] = out.data[k][0] / (md * var0);
    }
  }

  weights_.resize(m_);
  for (std::size_t j = 0; j < m_; ++j) {
    weights_[j] = std::sqrt(eig[j] / (var0 * md));
  }

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan_ = fftw_plan_dft_1d(static_cast<int>(m_), in.data, out.data, FFTW_FORWARD,
                             FFTW_ESTIMATE);
  }
}

GaussianLrdGenerator::~GaussianLrdGenerator() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

std::vector<double> GaussianLrdGenerator::generate(RngStream& rng) const {
  FftwBuffer in(m_), out(m_);
  for (std::size_t j = 0; j < m_; ++j) {
    in.data[j][0] = weights_[j] * rng.normal();
    in.data[j][1] = weights_[j] * rng.normal();
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_), in.data, out.data);
  std::vector<double> x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[k] = out.data[k][0];
  return x;
}

double GaussianLrdGenerator::realized_covariance(std::size_t lag) const {
  if (lag >= n_) throw std::out_of_range("realized_covariance: lag out of range");
  return realized_cov_[lag];
}

std::vector<double> gen_gaussian_lrd(double d, SlowlyVarying l0, std::size_t n, RngStream& rng) {
  GaussianLrdGenerator gen(n, d, l0);
  return gen.generate(rng);
}

std::vector<double> subordinate(const std::vector<double>& xi, const Dist& marginal) {
  // guard the p=1 rounding edge of the normal cdf at |x| beyond ~8.2
  const double p_max = std::nextafter(1.0, 0.0);
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    out[i] = marginal.quantile(std::min(normal_cdf(xi[i]), p_max));
  }
  return out;
}

SampleGenerator::SampleGenerator(DependenceModel model, std::size_t n)
    : model_(std::move(model)), n_(n) {
  model_.validate();
  if (n_ < 1) throw std::invalid_argument("SampleGenerator: n must be >= 1");
  if (model_.variant == DependenceModel::Variant::Lrd) {
    lrd_ = std::make_shared<const GaussianLrdGenerator>(n_, model_.d, model_.l0);
  }
}

CensoredSample SampleGenerator::generate(RngStream rng) const {
  RngStream life_rng = rng.lane(0);
  RngStream cens_rng = rng.lane(1);

  std::vector<double> xi;
  switch (model_.variant) {
    case DependenceModel::Variant::Iid:
      xi = gen_gaussian_iid(n_, life_rng);
      break;
    case DependenceModel::Variant::MixingAr1:
      xi = gen_gaussian_ar1(model_.rho, n_, life_rng);
      break;
    case DependenceModel::Variant::Lrd:
      xi = lrd_->generate(life_rng);
      break;
  }
  std::vector<double> lifetimes = subordinate(xi, model_.lifetime);

  std::vector<double> censors(n_);
  if (model_.censoring.is_none()) {
    std::fill(censors.begin(), censors.end(), std::numeric_limits<double>::infinity());
  } else {
    for (std::size_t i = 0; i < n_; ++i) {
      censors[i] = model_.censoring.quantile(cens_rng.uniform01());
    }
  }
  return censoring_overlay(lifetimes, censors);
}

CensoredSample gen_censored_sample(const DependenceModel& model, std::size_t n, RngStream rng) {
  return SampleGenerator(model, n).generate(rng);
}

}  // namespace survlim
