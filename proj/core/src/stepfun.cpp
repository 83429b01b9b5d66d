#include "survlim/stepfun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace survlim {

StepFunction::StepFunction(std::vector<double> jump_times, std::vector<double> jump_sizes,
                           double initial_value)
    : initial_value_(initial_value) {
  if (jump_times.size() != jump_sizes.size()) {
    throw std::invalid_argument("StepFunction: jump_times and jump_sizes length mismatch");
  }
  const std::size_t n = jump_times.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jump_times[a] < jump_times[b]; });

  jump_times_.reserve(n);
  jump_sizes_.reserve(n);
  for (std::size_t idx : order) {
    const double t = jump_times[idx];
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("StepFunction: jump time must be finite and nonnegative");
    }
    if (!jump_times_.empty() && t == jump_times_.back()) {
      jump_sizes_.back() += jump_sizes[idx];  // merge ties
    } else {
      jump_times_.push_back(t);
      jump_sizes_.push_back(jump_sizes[idx]);
    }
  }
  cumulative_.resize(jump_times_.size());
  double acc = initial_value_;
  for (std::size_t i = 0; i < jump_sizes_.size(); ++i) {
    acc += jump_sizes_[i];
    cumulative_[i] = acc;
  }
}

StepFunction StepFunction::from_cumulative(std::vector<double> jump_times,
                                           std::vector<double> cumulative,
                                           double initial_value) {
  if (jump_times.size() != cumulative.size()) {
    throw std::invalid_argument("StepFunction: jump_times and cumulative length mismatch");
  }
  for (std::size_t i = 0; i < jump_times.size(); ++i) {
    if (!(jump_times[i] >= 0.0) || !std::isfinite(jump_times[i]) ||
        (i > 0 && jump_times[i] <= jump_times[i - 1])) {
      throw std::invalid_argument(
          "StepFunction::from_cumulative: times must be strictly increasing and nonnegative");
    }
  }
  StepFunction f;
  f.initial_value_ = initial_value;
  f.jump_times_ = std::move(jump_times);
  f.cumulative_ = std::move(cumulative);
  f.jump_sizes_.resize(f.jump_times_.size());
  double prev = initial_value;
  for (std::size_t i = 0; i < f.cumulative_.size(); ++i) {
    f.jump_sizes_[i] = f.cumulative_[i] - prev;
    prev = f.cumulative_[i];
  }
  return f;
}

double StepFunction::eval(double t) const {
  // index of last jump with time <= t
  auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return initial_value_;
  return cumulative_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::eval_left(double t) const {
  auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return initial_value_;
  return cumulative_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::jump_at(double t) const {
  auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.end() || *it != t) return 0.0;
  return jump_sizes_[static_cast<std::size_t>(it - jump_times_.begin())];
}

void StepFunction::write_csv(std::ostream& os) const {
  os << "# initial_value=" << std::setprecision(17) << initial_value_ << "\n";
  os << "jump_time,jump_size,cumulative_value\n";
  for (std::size_t i = 0; i < jump_times_.size(); ++i) {
    os << std::setprecision(17) << jump_times_[i] << ',' << jump_sizes_[i] << ','
       << cumulative_[i] << "\n";
  }
}

StepFunction StepFunction::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# initial_value=", 0) != 0) {
    throw std::runtime_error("StepFunction CSV: missing '# initial_value=' header row");
  }
  const double initial = std::stod(line.substr(std::string("# initial_value=").size()));
  if (!std::getline(is, line) || line != "jump_time,jump_size,cumulative_value") {
    throw std::runtime_error("StepFunction CSV: missing column header row");
  }
  std::vector<double> times, cums;
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw std::runtime_error("StepFunction CSV: malformed row at line " +
                               std::to_string(lineno));
    }
    times.push_back(std::stod(a));
    cums.push_back(std::stod(c));
  }
  return from_cumulative(std::move(times), std::move(cums), initial);
}

double stieltjes_integral(const std::function<double(double)>& phi, const StepFunction& y,
                          double t) {
  double acc = 0.0;
  const auto& times = y.jump_times();
  const auto& sizes = y.jump_sizes();
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) {
    const double w = phi(times[i]);
    if (!std::isfinite(w)) {
      std::ostringstream msg;
      msg << "stieltjes_integral: integrand not finite at jump time " << std::setprecision(17)
          << times[i];
      throw std::domain_error(msg.str());
    }
    acc += w * sizes[i];
  }
  return acc;
}

double product_integral(const StepFunction& x, double t) {
  double prod = 1.0;
  const auto& times = x.jump_times();
  const auto& sizes = x.jump_sizes();
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) {
    prod *= 1.0 - sizes[i];
  }
  return prod;
}

StepFunction product_integral_curve(const StepFunction& x) {
  std::vector<double> cums(x.jump_count());
  double prod = 1.0;
  for (std::size_t i = 0; i < x.jump_count(); ++i) {
    prod *= 1.0 - x.jump_sizes()[i];
    cums[i] = prod;
  }
  return StepFunction::from_cumulative(x.jump_times(), std::move(cums), 1.0);
}

}  // namespace survlim
