#include "survlim/distributions.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace survlim {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

double require_param(const std::map<std::string, double>& params, const std::string& key,
                     const std::string& family) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument("distribution '" + family + "' requires parameter '" + key + "'");
  }
  return it->second;
}
}  // namespace

double normal_cdf(double x) { return boost::math::cdf(kStdNormal, x); }
double normal_pdf(double x) { return boost::math::pdf(kStdNormal, x); }
double normal_quantile(double p) { return boost::math::quantile(kStdNormal, p); }

Dist Dist::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  return Dist(Family::Exponential, rate, 0.0);
}

Dist Dist::weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("weibull: shape and scale must be > 0");
  }
  return Dist(Family::Weibull, shape, scale);
}

Dist Dist::uniform(double lower, double upper) {
  if (!(lower >= 0.0) || !(upper > lower)) {
    throw std::invalid_argument("uniform: need 0 <= lower < upper");
  }
  return Dist(Family::Uniform, lower, upper);
}

Dist Dist::lognormal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: sigma must be > 0");
  return Dist(Family::Lognormal, mu, sigma);
}

Dist Dist::none() { return Dist(Family::None, 0.0, 0.0); }

Dist Dist::from_params(const std::string& family, const std::map<std::string, double>& params) {
  if (family == "exponential") return exponential(require_param(params, "rate", family));
  if (family == "weibull") {
    return weibull(require_param(params, "shape", family), require_param(params, "scale", family));
  }
  if (family == "uniform") {
    return uniform(require_param(params, "lower", family), require_param(params, "upper", family));
  }
  if (family == "lognormal") {
    return lognormal(require_param(params, "mu", family), require_param(params, "sigma", family));
  }
  if (family == "none") return none();
  throw std::invalid_argument("unknown distribution family '" + family + "'");
}

double Dist::cdf(double t) const {
  switch (family_) {
    case Family::Exponential:
      return t <= 0.0 ? 0.0 : -std::expm1(-a_ * t);
    case Family::Weibull:
      return t <= 0.0 ? 0.0 : -std::expm1(-std::pow(t / b_, a_));
    case Family::Uniform:
      if (t <= a_) return 0.0;
      if (t >= b_) return 1.0;
      return (t - a_) / (b_ - a_);
    case Family::Lognormal:
      return t <= 0.0 ? 0.0 : normal_cdf((std::log(t) - a_) / b_);
    case Family::None:
      return 0.0;
  }
  return 0.0;
}

double Dist::pdf(double t) const {
  switch (family_) {
    case Family::Exponential:
      return t < 0.0 ? 0.0 : a_ * std::exp(-a_ * t);
    case Family::Weibull: {
      if (t <= 0.0) return 0.0;
      const double z = t / b_;
      return (a_ / b_) * std::pow(z, a_ - 1.0) * std::exp(-std::pow(z, a_));
    }
    case Family::Uniform:
      return (t < a_ || t > b_) ? 0.0 : 1.0 / (b_ - a_);
    case Family::Lognormal:
      return t <= 0.0 ? 0.0 : normal_pdf((std::log(t) - a_) / b_) / (t * b_);
    case Family::None:
      return 0.0;
  }
  return 0.0;
}

double Dist::quantile(double p) const {
  if (!(p >= 0.0) || p >= 1.0) {
    if (p == 1.0 && family_ == Family::Uniform) return b_;
    throw std::domain_error("quantile: p must be in [0,1)");
  }
  switch (family_) {
    case Family::Exponential:
      return -std::log1p(-p) / a_;
    case Family::Weibull:
      return b_ * std::pow(-std::log1p(-p), 1.0 / a_);
    case Family::Uniform:
      return a_ + p * (b_ - a_);
    case Family::Lognormal:
      return p == 0.0 ? 0.0 : std::exp(a_ + b_ * normal_quantile(p));
    case Family::None:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::string Dist::family_name() const {
  switch (family_) {
    case Family::Exponential: return "exponential";
    case Family::Weibull: return "weibull";
    case Family::Uniform: return "uniform";
    case Family::Lognormal: return "lognormal";
    case Family::None: return "none";
  }
  return "?";
}

std::map<std::string, double> Dist::params() const {
  switch (family_) {
    case Family::Exponential: return {{"rate", a_}};
    case Family::Weibull: return {{"shape", a_}, {"scale", b_}};
    case Family::Uniform: return {{"lower", a_}, {"upper", b_}};
    case Family::Lognormal: return {{"mu", a_}, {"sigma", b_}};
    case Family::None: return {};
  }
  return {};
}

}  // namespace survlim
