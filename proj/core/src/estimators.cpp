#include "survlim/estimators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace survlim {

namespace {

struct TimeGroup {
  double time;
  long events;
  long censored;
};

// distinct observation times with event / censoring counts, ascending
std::vector<TimeGroup> group_by_time(const CensoredSample& s) {
  std::vector<CensoredObservation> obs = s.observations;
  std::sort(obs.begin(), obs.end(), [](const CensoredObservation& a, const CensoredObservation& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.event > b.event;  // events before censorings at tied times
  });
  std::vector<TimeGroup> groups;
  for (const auto& o : obs) {
    if (groups.empty() || groups.back().time != o.time) {
      groups.push_back({o.time, 0, 0});
    }
    if (o.event) {
      ++groups.back().events;
    } else {
      ++groups.back().censored;
    }
  }
  return groups;
}

}  // namespace

CensoredSample::CensoredSample(std::vector<CensoredObservation> obs)
    : observations(std::move(obs)) {
  if (observations.empty()) {
    throw std::invalid_argument("CensoredSample: n = 0 (need at least one observation)");
  }
  for (const auto& o : observations) {
    if (!(o.time >= 0.0)) {
      throw std::invalid_argument("CensoredSample: observation times must be nonnegative");
    }
  }
}

void CensoredSample::write_csv(std::ostream& os) const {
  os << "time,event\n";
  for (const auto& o : observations) {
    os << std::setprecision(17) << o.time << ',' << (o.event ? 1 : 0) << "\n";
  }
}

CensoredSample CensoredSample::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "time,event") {
    throw std::runtime_error("sample CSV: expected header 'time,event'");
  }
  std::vector<CensoredObservation> obs;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw std::runtime_error("sample CSV: malformed row at line " + std::to_string(lineno));
    }
    double t;
    int ev;
    try {
      t = std::stod(a);
      ev = std::stoi(b);
    } catch (const std::exception&) {
      throw std::runtime_error("sample CSV: unparsable field at line " + std::to_string(lineno));
    }
    if (ev != 0 && ev != 1) {
      throw std::runtime_error("sample CSV: event must be 0 or 1 at line " + std::to_string(lineno));
    }
    obs.push_back({t, ev == 1});
  }
  if (obs.empty()) {
    throw std::runtime_error("sample CSV: n = 0 (no observation rows)");
  }
  return CensoredSample(std::move(obs));
}

CensoredSample censoring_overlay(const std::vector<double>& lifetimes,
                                 const std::vector<double>& censors) {
  if (lifetimes.size() != censors.size()) {
    throw std::invalid_argument("censoring_overlay: lifetimes and censors length mismatch");
  }
  std::vector<CensoredObservation> obs(lifetimes.size());
  for (std::size_t i = 0; i < lifetimes.size(); ++i) {
    obs[i].time = std::min(lifetimes[i], censors[i]);
    obs[i].event = lifetimes[i] <= censors[i];
  }
  return CensoredSample(std::move(obs));
}

EmpiricalSubdistributions empirical_subdistributions(const CensoredSample& s) {
  // Cumulative values come from single divisions of exact integer counts,
  // and H_n is stored as the float sum of the two subfamily values, so
  // H_n^0(t) + H_n^1(t) = H_n(t) holds exactly at every jump and
  // 1 - H_n(u-) stays within a couple of ulps of the rational Y(u)/n.
  const auto groups = group_by_time(s);
  const double n = static_cast<double>(s.n());
  std::vector<double> times_all, cums_all;
  std::vector<double> times1, cums1, times0, cums0;
  long events_so_far = 0, censored_so_far = 0;
  for (const auto& g : groups) {
    events_so_far += g.events;
    censored_so_far += g.censored;
    const double c1 = static_cast<double>(events_so_far) / n;
    const double c0 = static_cast<double>(censored_so_far) / n;
    times_all.push_back(g.time);
    cums_all.push_back(c1 + c0);
    if (g.events > 0) {
      times1.push_back(g.time);
      cums1.push_back(c1);
    }
    if (g.censored > 0) {
      times0.push_back(g.time);
      cums0.push_back(c0);
    }
  }
  EmpiricalSubdistributions out;
  out.h = StepFunction::from_cumulative(std::move(times_all), std::move(cums_all), 0.0);
  out.h1 = StepFunction::from_cumulative(std::move(times1), std::move(cums1), 0.0);
  out.h0 = StepFunction::from_cumulative(std::move(times0), std::move(cums0), 0.0);
  return out;
}

StepFunction nelson_aalen(const CensoredSample& s) {
  const auto groups = group_by_time(s);
  long at_risk = static_cast<long>(s.n());
  std::vector<double> times, jumps;
  for (const auto& g : groups) {
    if (g.events > 0) {
      if (at_risk <= 0) {
        std::ostringstream msg;
        msg << "nelson_aalen: event at time " << std::setprecision(17) << g.time
            << " with empty risk set";
        throw std::domain_error(msg.str());
      }
      times.push_back(g.time);
      jumps.push_back(static_cast<double>(g.events) / static_cast<double>(at_risk));
    }
    at_risk -= g.events + g.censored;
  }
  return StepFunction(std::move(times), std::move(jumps));
}

StepFunction nelson_aalen_integral_form(const CensoredSample& s) {
  const auto sub = empirical_subdistributions(s);
  const auto phi = [&sub](double u) { return 1.0 / (1.0 - sub.h.eval_left(u)); };
  std::vector<double> times = sub.h1.jump_times();
  std::vector<double> cums(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    cums[i] = stieltjes_integral(phi, sub.h1, times[i]);
  }
  return StepFunction::from_cumulative(std::move(times), std::move(cums), 0.0);
}

StepFunction kaplan_meier(const CensoredSample& s) {
  return product_integral_curve(nelson_aalen(s));
}

TrueModel::TrueModel(Dist lifetime, Dist censoring)
    : lifetime_(std::move(lifetime)), censoring_(std::move(censoring)) {
  if (lifetime_.is_none()) {
    throw std::invalid_argument("TrueModel: lifetime marginal cannot be 'none'");
  }
  if (lifetime_.family() == Dist::Family::Exponential &&
      censoring_.family() == Dist::Family::Exponential) {
    exponential_pair_ = true;
    rate_sum_ = lifetime_.params().at("rate") + censoring_.params().at("rate");
  }
}

double TrueModel::H(double t) const {
  if (censoring_.is_none()) return F(t);
  const double sf = 1.0 - F(t);
  const double sg = 1.0 - G(t);
  return 1.0 - sf * sg;
}

double TrueModel::H1(double t) const {
  if (t <= 0.0) return 0.0;
  if (censoring_.is_none()) return F(t);
  if (exponential_pair_) {
    const double rate_f = lifetime_.params().at("rate");
    return (rate_f / rate_sum_) * (-std::expm1(-rate_sum_ * t));
  }
  // probability-domain form: int_0^{F(t)} (1 - G(F^{-1}(p))) dp keeps the
  // integrand bounded in [0,1] even when the lifetime density has a kink
  const auto integrand = [this](double p) { return 1.0 - G(lifetime_.quantile(p)); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, F(t), 15, 1e-12, &error);
  if (!(error <= 1e-10)) {
    throw std::runtime_error("TrueModel::H1: quadrature did not reach the requested tolerance");
  }
  return value;
}

double TrueModel::Lambda(double t) const { return -std::log1p(-F(t)); }

double TrueModel::h_density(double t) const {
  return lifetime_.pdf(t) * (1.0 - G(t)) + censoring_.pdf(t) * (1.0 - F(t));
}

double TrueModel::h1_density(double t) const { return lifetime_.pdf(t) * (1.0 - G(t)); }

double TrueModel::event_probability() const {
  if (censoring_.is_none()) return 1.0;
  if (exponential_pair_) return lifetime_.params().at("rate") / rate_sum_;
  const auto integrand = [this](double u) { return (1.0 - G(u)) * lifetime_.pdf(u); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-12, &error);
}

double TrueModel::h_quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("h_quantile: p must be in (0,1)");
  }
  double lo = 0.0, hi = 1.0;
  while (H(hi) < p) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("h_quantile: failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (H(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace survlim
