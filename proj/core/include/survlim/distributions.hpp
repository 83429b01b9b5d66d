#pragma once

#include <map>
#include <string>

namespace survlim {

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);  // p in (0,1)

// Lifetime / censoring marginal from a small set of named families, all
// supported on [0, inf). The special family "none" is the no-censoring
// marginal: a point mass at +infinity (cdf identically 0).
class Dist {
 public:
  enum class Family { Exponential, Weibull, Uniform, Lognormal, None };

  static Dist exponential(double rate);
  static Dist weibull(double shape, double scale);
  static Dist uniform(double lower, double upper);
  static Dist lognormal(double mu, double sigma);
  static Dist none();

  // family name + named parameters, e.g. ("exponential", {{"rate", 1.0}})
  static Dist from_params(const std::string& family,
                          const std::map<std::string, double>& params);

  double cdf(double t) const;
  double pdf(double t) const;
  double quantile(double p) const;  // p in [0,1); +inf allowed for "none"

  bool is_none() const { return family_ == Family::None; }
  Family family() const { return family_; }
  std::string family_name() const;
  std::map<std::string, double> params() const;

 private:
  Dist(Family f, double a, double b) : family_(f), a_(a), b_(b) {}
  Family family_;
  double a_ = 0.0;  // rate | shape | lower | mu
  double b_ = 0.0;  // -     | scale | upper | sigma
};

}  // namespace survlim
