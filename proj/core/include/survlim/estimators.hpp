#pragma once

#include <iosfwd>
#include <vector>

#include "survlim/distributions.hpp"
#include "survlim/stepfun.hpp"

namespace survlim {

// one observed pair (t_i, delta_i) with t_i = min(T_i, tau_i) and
// delta_i = 1{T_i <= tau_i}
struct CensoredObservation {
  double time = 0.0;
  bool event = false;
};

struct CensoredSample {
  std::vector<CensoredObservation> observations;

  CensoredSample() = default;
  explicit CensoredSample(std::vector<CensoredObservation> obs);

  std::size_t n() const { return observations.size(); }

  // CSV with header "time,event", event in {0,1}
  void write_csv(std::ostream& os) const;
  static CensoredSample read_csv(std::istream& is);
};

// pairs componentwise: (min(T_i, tau_i), 1{T_i <= tau_i}); ties count as events
CensoredSample censoring_overlay(const std::vector<double>& lifetimes,
                                 const std::vector<double>& censors);

struct EmpiricalSubdistributions {
  StepFunction h;   // H_n
  StepFunction h1;  // H_n^1 (events only)
  StepFunction h0;  // H_n^0 (censorings only)
};

// H_n, H_n^1, H_n^0 as step functions. Jumps of H_n are stored as the float
// sum of the event and censoring jumps at each time, so H_n^0 + H_n^1 = H_n
// holds exactly jump by jump.
EmpiricalSubdistributions empirical_subdistributions(const CensoredSample& s);

// Nelson-Aalen estimator of the cumulative hazard: at each distinct event
// time u the increment is d(u) / Y(u), with d(u) the number of events at u
// and Y(u) = #{i : t_i >= u} the risk-set size (integer counts).
StepFunction nelson_aalen(const CensoredSample& s);

// Same estimator computed through the Stieltjes-integral route
// int_0^t (1 - H_n(u-))^{-1} dH_n^1(u); agrees with nelson_aalen up to
// floating-point rounding of the integrand (tested to 1e-12).
StepFunction nelson_aalen_integral_form(const CensoredSample& s);

// Kaplan-Meier product-limit estimator: the product integral of the
// Nelson-Aalen increments. Evaluates bit-identically to
// product_integral(nelson_aalen(s), t) at every t.
StepFunction kaplan_meier(const CensoredSample& s);

// Population functions of the censoring model (F for lifetimes, G for
// censoring times, censoring independent and noninformative).
class TrueModel {
 public:
  TrueModel(Dist lifetime, Dist censoring);

  const Dist& lifetime() const { return lifetime_; }
  const Dist& censoring() const { return censoring_; }

  double F(double t) const { return lifetime_.cdf(t); }
  double G(double t) const { return censoring_.cdf(t); }
  double S(double t) const { return 1.0 - F(t); }

  // H(t) = 1 - (1-F)(1-G)
  double H(double t) const;
  // H^1(t) = int_0^t (1-G(u-)) dF(u); closed form when both exponential,
  // adaptive quadrature otherwise (abs tol 1e-10)
  double H1(double t) const;
  double H0(double t) const { return H(t) - H1(t); }
  double Lambda(double t) const;  // -log(1 - F(t))

  double h_density(double t) const;   // H'
  double h1_density(double t) const;  // (H^1)' = f (1-G)
  double event_probability() const;   // P(delta = 1) = H^1(inf)

  double h_quantile(double p) const;  // H^{-1}(p), p in (0,1)

 private:
  Dist lifetime_;
  Dist censoring_;
  bool exponential_pair_ = false;
  double rate_sum_ = 0.0;  // lambda_F + lambda_G when exponential_pair_
};

}  // namespace survlim
