#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace survlim {

// Right-continuous pure-jump step function on [0, inf).
//
// Value at t is initial_value + sum of jump sizes with jump_time <= t; the
// left limit at t excludes the jump at t itself, with f(0-) = initial_value.
// Duplicate jump times are merged at construction by summing their sizes.
//
// Immutable after construction; all operations are const.
class StepFunction {
 public:
  StepFunction() = default;

  // from (time, size) pairs in any order; ties merged by summing sizes
  StepFunction(std::vector<double> jump_times, std::vector<double> jump_sizes,
               double initial_value = 0.0);

  // from already sorted times and the exact cumulative values the function
  // must evaluate to (jump sizes become adjacent differences)
  static StepFunction from_cumulative(std::vector<double> jump_times,
                                      std::vector<double> cumulative,
                                      double initial_value);

  double eval(double t) const;       // f(t), right-continuous
  double eval_left(double t) const;  // f(t-), with f(0-) = initial_value
  double jump_at(double t) const;    // size of the jump at t (0 if none)

  double initial_value() const { return initial_value_; }
  double total_value() const {
    return cumulative_.empty() ? initial_value_ : cumulative_.back();
  }
  std::size_t jump_count() const { return jump_times_.size(); }
  const std::vector<double>& jump_times() const { return jump_times_; }
  const std::vector<double>& jump_sizes() const { return jump_sizes_; }
  const std::vector<double>& cumulative() const { return cumulative_; }

  void write_csv(std::ostream& os) const;
  static StepFunction read_csv(std::istream& is);

 private:
  std::vector<double> jump_times_;
  std::vector<double> jump_sizes_;
  std::vector<double> cumulative_;  // value at and after each jump
  double initial_value_ = 0.0;
};

// Lebesgue-Stieltjes integral of phi against the pure-jump integrator y over
// (0, t]:  sum of phi(u_j) * dy(u_j) over jump times u_j <= t.
// Throws std::domain_error if phi is not finite at a jump inside the range
// (the empty-risk-set singularity), naming the offending jump time.
double stieltjes_integral(const std::function<double(double)>& phi,
                          const StepFunction& y, double t);

// Product integral over jumps:  prod over u_j <= t of (1 - dx(u_j)).
double product_integral(const StepFunction& x, double t);

// The whole product-integral path as a step function with value 1 before the
// first jump. Its stored cumulative values are exactly the running products,
// so eval agrees bit-for-bit with product_integral at every t.
StepFunction product_integral_curve(const StepFunction& x);

}  // namespace survlim
