#include "survlim/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "survlim/quadrature.hpp"

namespace survlim {

double hermite_poly(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_poly: k must be >= 0");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double SlowlyVarying::operator()(double k) const {
  switch (kind) {
    case Kind::Constant:
      return 1.0;
    case Kind::LogPow:
      return std::pow(std::log(M_E + k), exponent);
  }
  return 1.0;
}

std::string SlowlyVarying::describe() const {
  if (kind == Kind::Constant) return "1";
  std::ostringstream os;
  os << "log(e+k)^" << exponent;
  return os.str();
}

double SubordinationMap::apply(double x) const {
  switch (kind) {
    case Kind::Identity:
      return x;
    case Kind::QuantileOfF:
      return marginal.quantile(normal_cdf(x));
    case Kind::AbsValue:
      return std::abs(x);
  }
  return x;
}

double SubordinationMap::marginal_cdf(double t) const {
  switch (kind) {
    case Kind::Identity:
      return normal_cdf(t);
    case Kind::QuantileOfF:
      return marginal.cdf(t);
    case Kind::AbsValue:
      return t < 0.0 ? 0.0 : 2.0 * normal_cdf(t) - 1.0;
  }
  return 0.0;
}

double SubordinationMap::marginal_pdf(double t) const {
  switch (kind) {
    case Kind::Identity:
      return normal_pdf(t);
    case Kind::QuantileOfF:
      return marginal.pdf(t);
    case Kind::AbsValue:
      return t < 0.0 ? 0.0 : 2.0 * normal_pdf(t);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> SubordinationMap::level_set(double t) const {
  constexpr double kInf = 1e306;
  switch (kind) {
    case Kind::Identity:
      return {{-kInf, t}};
    case Kind::QuantileOfF: {
      const double p = marginal.cdf(t);
      if (p <= 0.0) return {};
      if (p >= 1.0) return {{-kInf, kInf}};
      return {{-kInf, normal_quantile(p)}};
    }
    case Kind::AbsValue:
      if (t < 0.0) return {};
      return {{-t, t}};
  }
  return {};
}

namespace {

// weight W(x) multiplying h_k(x) phi(x) on the level set, per event class
double class_weight(const IndicatorSpec& spec, double x, double t) {
  switch (spec.cls) {
    case EventClass::Any:
      return 1.0;
    case EventClass::Event:
      return 1.0 - spec.censoring.cdf(spec.map.apply(x));
    case EventClass::Censored:
      return spec.censoring.cdf(spec.map.apply(x)) - spec.censoring.cdf(t);
  }
  return 1.0;
}

double coefficient_once(int k, double t, const IndicatorSpec& spec, int nodes) {
  // eta_k(t) = int over {g <= t} of W(x) h_k(x) phi(x) dx for k >= 1;
  // the centering term vanishes against h_k
  const double trunc = 2.0 * std::sqrt(std::max(k, 4)) + 8.0;
  double acc = 0.0;
  for (const auto& [lo_raw, hi_raw] : spec.map.level_set(t)) {
    const double lo = std::max(lo_raw, -trunc);
    const double hi = std::min(hi_raw, trunc);
    if (hi <= lo) continue;
    const auto integrand = [&](double x) {
      return class_weight(spec, x, t) * hermite_poly(k, x) * normal_pdf(x);
    };
    acc += integrate_gl_composite(integrand, lo, hi, nodes, 4.0);
  }
  return acc;
}

}  // namespace

double hermite_coefficient(int k, double t, const IndicatorSpec& spec, int nodes) {
  if (k < 1) throw std::invalid_argument("hermite_coefficient: k must be >= 1");
  if (nodes < 4) throw std::invalid_argument("hermite_coefficient: need at least 4 nodes");
  const double coarse = coefficient_once(k, t, spec, nodes);
  const double fine = coefficient_once(k, t, spec, 2 * nodes);
  // The natural coefficient scale is sqrt(k!) (the Cauchy-Schwarz bound);
  // above order ~16 float cancellation in the oscillatory integrand limits
  // absolute accuracy to about 1e-8 * that scale, so the agreement check is
  // absolute at low order and scale-relative at high order.
  const double scale = std::max(1.0, std::exp(0.5 * std::lgamma(k + 1.0)) * 0.5);
  if (std::abs(fine - coarse) > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "hermite_coefficient: quadrature did not converge at k=" << k << ", t=" << t
        << " (node counts " << nodes << " and " << 2 * nodes << " differ by "
        << std::abs(fine - coarse) << ")";
    throw std::runtime_error(msg.str());
  }
  return fine;
}

double hermite_coefficient_derivative(int k, double t, const IndicatorSpec& spec) {
  if (k < 1) throw std::invalid_argument("hermite_coefficient_derivative: k must be >= 1");
  if (!spec.map.monotone()) {
    throw std::invalid_argument("hermite_coefficient_derivative: only monotone maps supported");
  }
  const double p = spec.map.marginal_cdf(t);
  if (p <= 0.0 || p >= 1.0) return 0.0;
  const double c = normal_quantile(p);
  const double f = spec.map.marginal_pdf(t);
  switch (spec.cls) {
    case EventClass::Any:
      return hermite_poly(k, c) * f;
    case EventClass::Event:
      return (1.0 - spec.censoring.cdf(t)) * hermite_poly(k, c) * f;
    case EventClass::Censored:
      // d/dt E[G(min(t, g(xi))) h_k] = G'(t) * P-weighted tail projection
      return spec.censoring.pdf(t) * normal_pdf(c) * hermite_poly(k - 1, c);
  }
  return 0.0;
}

void HermiteExpansion::write_csv(std::ostream& os) const {
  os << "t,k,eta_k\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int k = 1; k <= k_max; ++k) {
      os << std::setprecision(17) << grid[j] << ',' << k << ','
         << coefficients[static_cast<std::size_t>(k - 1)][j] << "\n";
    }
  }
}

HermiteExpansion hermite_expansion(const IndicatorSpec& spec, std::vector<double> grid,
                                   int k_max, double tol, int nodes) {
  if (k_max < 1) throw std::invalid_argument("hermite_expansion: k_max must be >= 1");
  if (grid.empty()) throw std::invalid_argument("hermite_expansion: empty grid");
  HermiteExpansion out;
  switch (spec.cls) {
    case EventClass::Any: out.which_family = "any"; break;
    case EventClass::Event: out.which_family = "event"; break;
    case EventClass::Censored: out.which_family = "censored"; break;
  }
  out.grid = std::move(grid);
  out.k_max = k_max;
  out.tol = tol;
  out.coefficients.assign(static_cast<std::size_t>(k_max),
                          std::vector<double>(out.grid.size(), 0.0));
  for (int k = 1; k <= k_max; ++k) {
    for (std::size_t j = 0; j < out.grid.size(); ++j) {
      out.coefficients[static_cast<std::size_t>(k - 1)][j] =
          hermite_coefficient(k, out.grid[j], spec, nodes);
    }
  }
  out.rank_per_t.assign(out.grid.size(), 0);
  int best = 0;
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    for (int k = 1; k <= k_max; ++k) {
      if (std::abs(out.coefficients[static_cast<std::size_t>(k - 1)][j]) > tol) {
        out.rank_per_t[j] = k;
        break;
      }
    }
    if (out.rank_per_t[j] > 0 && (best == 0 || out.rank_per_t[j] < best)) {
      best = out.rank_per_t[j];
    }
  }
  if (best == 0) {
    std::ostringstream msg;
    msg << "hermite_expansion: rank undetectable (no coefficient above tol=" << tol
        << " up to k_max=" << k_max << " on the grid)";
    throw std::runtime_error(msg.str());
  }
  out.rank = best;
  return out;
}

std::vector<double> default_rank_grid(const SubordinationMap& map, int points) {
  if (points < 2) throw std::invalid_argument("default_rank_grid: need at least 2 points");
  double lo, hi;
  switch (map.kind) {
    case SubordinationMap::Kind::Identity:
      lo = normal_quantile(0.01);
      hi = normal_quantile(0.99);
      break;
    case SubordinationMap::Kind::QuantileOfF:
      lo = map.marginal.quantile(0.01);
      hi = map.marginal.quantile(0.99);
      break;
    case SubordinationMap::Kind::AbsValue:
      // folded-normal quantiles: q(p) = Phi^{-1}((1+p)/2)
      lo = normal_quantile(0.5 + 0.01 / 2.0);
      hi = normal_quantile(0.5 + 0.99 / 2.0);
      break;
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  return grid;
}

double sigma_n_squared(const std::function<double(long)>& cov, int r, long n) {
  if (n < 1) throw std::invalid_argument("sigma_n_squared: n must be >= 1");
  if (r < 1) throw std::invalid_argument("sigma_n_squared: r must be >= 1");
  if (std::abs(cov(0) - 1.0) > 1e-12) {
    throw std::invalid_argument("sigma_n_squared: requires cov(0) = 1");
  }
  double rfact = 1.0;
  for (int j = 2; j <= r; ++j) rfact *= j;
  double acc = static_cast<double>(n);  // k = 0 term, cov(0)^r = 1
  for (long k = 1; k < n; ++k) {
    acc += 2.0 * static_cast<double>(n - k) * std::pow(cov(k), r);
  }
  return rfact * acc;
}

std::function<double(long)> power_law_covariance(double d, SlowlyVarying l0) {
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("power_law_covariance: d must be in (0,1)");
  }
  return [d, l0](long k) -> double {
    if (k == 0) return 1.0;
    const double kk = static_cast<double>(std::labs(k));
    return std::pow(kk, -d) * l0(kk);
  };
}

double l1_constant(long n, double d, int r, const SlowlyVarying& l0) {
  const double rd = r * d;
  if (!(rd < 1.0)) {
    throw std::domain_error("l1_constant: requires r*d < 1");
  }
  double rfact = 1.0;
  for (int j = 2; j <= r; ++j) rfact *= j;
  const double l0n = l0(static_cast<double>(n));
  return 2.0 / (rfact * (1.0 - rd) * (2.0 - rd)) * std::pow(l0n, r);
}

RateSpec RateSpec::weak(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("RateSpec::weak: sigma2 must be > 0");
  RateSpec spec;
  spec.regime = Regime::Weak;
  spec.sigma2 = sigma2;
  return spec;
}

RateSpec RateSpec::lrd(double d, int r, SlowlyVarying l0) {
  if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("RateSpec::lrd: d must be in (0,1)");
  if (r < 1) throw std::invalid_argument("RateSpec::lrd: r must be >= 1");
  if (!(r * d < 1.0)) throw std::invalid_argument("RateSpec::lrd: requires r*d < 1");
  RateSpec spec;
  spec.regime = Regime::Lrd;
  spec.d = d;
  spec.r = r;
  spec.l0 = l0;
  return spec;
}

double RateSpec::a_n(long n) const {
  if (n < 1) throw std::invalid_argument("RateSpec::a_n: n must be >= 1");
  switch (regime) {
    case Regime::Weak:
      return std::sqrt(sigma2 / static_cast<double>(n));
    case Regime::Lrd:
      return std::sqrt(sigma_n_squared(power_law_covariance(d, l0), r, n)) /
             static_cast<double>(n);
  }
  return 0.0;
}

}  // namespace survlim
