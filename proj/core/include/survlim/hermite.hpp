#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "survlim/distributions.hpp"

namespace survlim {

// probabilists' Hermite polynomial h_k via h_{k+1} = x h_k - k h_{k-1}
double hermite_poly(int k, double x);

// slowly varying factor l0 in the covariance k^{-d} l0(k)
struct SlowlyVarying {
  enum class Kind { Constant, LogPow };
  Kind kind = Kind::Constant;
  double exponent = 0.0;

  static SlowlyVarying constant() { return {}; }
  static SlowlyVarying log_power(double a) { return {Kind::LogPow, a}; }
  double operator()(double k) const;
  std::string describe() const;
};

enum class EventClass { Any, Event, Censored };

// the map g applied to the latent Gaussian; monotone maps are realized as
// F^{-1} o Phi so the subordinated marginal is exactly F
struct SubordinationMap {
  enum class Kind { Identity, QuantileOfF, AbsValue };
  Kind kind = Kind::Identity;
  Dist marginal = Dist::none();  // F, for QuantileOfF

  static SubordinationMap identity() { return {Kind::Identity, Dist::none()}; }
  static SubordinationMap quantile_of(Dist f) { return {Kind::QuantileOfF, std::move(f)}; }
  static SubordinationMap abs_value() { return {Kind::AbsValue, Dist::none()}; }

  bool monotone() const { return kind != Kind::AbsValue; }
  double apply(double x) const;        // g(x)
  double marginal_cdf(double t) const; // P(g(xi) <= t)
  double marginal_pdf(double t) const;
  // {x : g(x) <= t} as closed intervals (empty if none)
  std::vector<std::pair<double, double>> level_set(double t) const;
};

struct IndicatorSpec {
  SubordinationMap map;
  EventClass cls = EventClass::Any;
  Dist censoring = Dist::none();  // G; only read for Event / Censored
};

// eta_k(t), the projection of the centered indicator family on h_k, by panel
// quadrature against the standard normal weight with the domain split at the
// level-set boundary. The result is checked against a doubled node count and
// an error is raised if the two differ by more than 1e-8.
double hermite_coefficient(int k, double t, const IndicatorSpec& spec, int nodes = 48);

// analytic d/dt eta_k(t) for monotone maps (continuous F, G)
double hermite_coefficient_derivative(int k, double t, const IndicatorSpec& spec);

struct HermiteExpansion {
  std::string which_family;  // "any" | "event" | "censored"
  std::vector<double> grid;
  int k_max = 0;
  double tol = 0.0;
  // coefficients[k-1][j] = eta_k(grid[j]) for k = 1..k_max
  std::vector<std::vector<double>> coefficients;
  std::vector<int> rank_per_t;  // 0 where no coefficient exceeded tol
  int rank = 0;                 // min over grid of detected ranks

  void write_csv(std::ostream& os) const;  // columns t,k,eta_k
};

// expansion over a grid with rank detection; throws "rank undetectable" if
// no grid point has a coefficient above tol up to k_max
HermiteExpansion hermite_expansion(const IndicatorSpec& spec, std::vector<double> grid,
                                   int k_max, double tol, int nodes = 48);

// default detection grid: 64 points spanning [q(0.01), q(0.99)] of the
// subordinated marginal
std::vector<double> default_rank_grid(const SubordinationMap& map, int points = 64);

// exact sigma_n^2 = Var(sum_{i<=n} h_r(xi_i)) = r! sum_{|k|<n} (n-|k|) cov(k)^r
double sigma_n_squared(const std::function<double(long)>& cov, int r, long n);

// cov(0) = 1, cov(k) = k^{-d} l0(k) for k >= 1 (the rate-law covariance)
std::function<double(long)> power_law_covariance(double d, SlowlyVarying l0);

// l1(n) = 2 / (r! (1-rd)(2-rd)) * l0(n)^r ; requires rd < 1
double l1_constant(long n, double d, int r, const SlowlyVarying& l0);

// normalization a_n for the two regimes
struct RateSpec {
  enum class Regime { Weak, Lrd };
  Regime regime = Regime::Weak;
  double sigma2 = 1.0;  // weak
  double d = 0.0;       // lrd
  int r = 1;
  SlowlyVarying l0;

  static RateSpec weak(double sigma2);
  static RateSpec lrd(double d, int r, SlowlyVarying l0);
  // weak: sqrt(sigma2/n); lrd: sigma_n / n with the exact sigma_n
  double a_n(long n) const;
};

}  // namespace survlim
