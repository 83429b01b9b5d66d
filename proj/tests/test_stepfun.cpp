#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>
#include <vector>

#include "survlim/rng.hpp"
#include "survlim/stepfun.hpp"

using survlim::product_integral;
using survlim::product_integral_curve;
using survlim::RngStream;
using survlim::StepFunction;
using survlim::stieltjes_integral;

TEST_CASE("eval is right-continuous") {
  const StepFunction f({1.0, 2.0}, {0.5, 0.5});
  CHECK(f.eval(1.0) == 0.5);     // jump included at its own time
  CHECK(f.eval(0.999) == 0.0);   // value before the first jump
  CHECK(f.eval(5.0) == 1.0);     // total mass
}

TEST_CASE("eval_left excludes the jump at t") {
  const StepFunction f({1.0, 2.0}, {0.5, 0.5});
  CHECK(f.eval_left(1.0) == 0.0);
  CHECK(f.eval_left(1.5) == 0.5);
  CHECK(f.eval_left(0.0) == f.initial_value());  // f(0-) = initial_value
}

TEST_CASE("ties are merged at construction by summing sizes") {
  const StepFunction f({2.0, 1.0, 2.0}, {0.25, 0.5, 0.25});
  CHECK(f.jump_count() == 2);
  CHECK(f.jump_at(2.0) == 0.5);
  CHECK(f.eval(2.0) == 1.0);
}

TEST_CASE("eval minus eval_left recovers the jump size") {
  RngStream rng(99, 0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> times, sizes;
    const int k = 1 + static_cast<int>(rng.uniform01() * 20);
    for (int i = 0; i < k; ++i) {
      times.push_back(rng.uniform01() * 10.0);
      sizes.push_back(rng.normal());
    }
    const StepFunction f(times, sizes, rng.normal());
    for (double t : f.jump_times()) {
      const double diff = f.eval(t) - f.eval_left(t);
      CHECK(diff == doctest::Approx(f.jump_at(t)).epsilon(1e-13));
    }
    CHECK(f.eval(11.0) - f.eval_left(11.0) == 0.0);  // no jump there
  }
}

TEST_CASE("stieltjes integral of a pure-jump integrator") {
  const StepFunction y({1.0, 2.0}, {0.5, 0.5});
  CHECK(stieltjes_integral([](double) { return 1.0; }, y, 2.0) == 1.0);
  CHECK(stieltjes_integral([](double u) { return u; }, y, 2.0) ==
        doctest::Approx(1.5).epsilon(1e-15));  // 1*0.5 + 2*0.5
  CHECK(stieltjes_integral([](double) { return 1.0; }, y, 0.5) == 0.0);
}

TEST_CASE("stieltjes integral reports the offending jump on a singular integrand") {
  const StepFunction y({1.0, 3.0}, {0.5, 0.5});
  const auto phi = [](double u) { return u == 3.0 ? INFINITY : 1.0; };
  CHECK_NOTHROW(stieltjes_integral(phi, y, 2.0));
  CHECK_THROWS_WITH_AS(stieltjes_integral(phi, y, 3.0),
                       doctest::Contains("not finite at jump time 3"), std::domain_error);
}

TEST_CASE("stieltjes integral is additive over disjoint intervals and linear in phi") {
  RngStream rng(5, 0);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<double> times, sizes;
    for (int i = 0; i < 30; ++i) {
      times.push_back(rng.uniform01() * 10.0);
      sizes.push_back(rng.normal());
    }
    const StepFunction y(times, sizes);
    const auto phi = [](double u) { return std::sin(u) + 2.0; };
    const auto psi = [](double u) { return u * u; };
    const double t1 = 3.0, t2 = 8.0;
    // additivity over (0,t1] and (t1,t2]
    const double whole = stieltjes_integral(phi, y, t2);
    const double part1 = stieltjes_integral(phi, y, t1);
    double part2 = 0.0;
    for (std::size_t i = 0; i < y.jump_count(); ++i) {
      const double u = y.jump_times()[i];
      if (u > t1 && u <= t2) part2 += phi(u) * y.jump_sizes()[i];
    }
    CHECK(whole == doctest::Approx(part1 + part2).epsilon(1e-12));
    // linearity
    const double lhs = stieltjes_integral([&](double u) { return 2.0 * phi(u) - 3.0 * psi(u); },
                                          y, t2);
    const double rhs = 2.0 * stieltjes_integral(phi, y, t2) -
                       3.0 * stieltjes_integral(psi, y, t2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("product integral over jumps") {
  const StepFunction x({1.0, 3.0}, {1.0 / 3.0, 1.0});
  CHECK(product_integral(x, 3.0) == 0.0);  // (1-1/3)(1-1) = 0
  CHECK(product_integral(StepFunction({}, {}), 7.0) == 1.0);
  CHECK(product_integral(StepFunction({1.0}, {1.0 / 3.0}), 2.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("product integral agrees with exp of summed logs for jumps below one") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> times, sizes;
    for (int i = 0; i < 40; ++i) {
      times.push_back(rng.uniform01() * 5.0);
      sizes.push_back(rng.uniform01() * 0.9);
    }
    const StepFunction x(times, sizes);
    const double t = rng.uniform01() * 5.0;
    double log_acc = 0.0;
    for (std::size_t i = 0; i < x.jump_count() && x.jump_times()[i] <= t; ++i) {
      log_acc += std::log1p(-x.jump_sizes()[i]);
    }
    CHECK(product_integral(x, t) == doctest::Approx(std::exp(log_acc)).epsilon(1e-12));
  }
}

TEST_CASE("product integral curve evaluates bit-identically to the scalar form") {
  RngStream rng(23, 0);
  std::vector<double> times, sizes;
  for (int i = 0; i < 60; ++i) {
    times.push_back(rng.uniform01() * 4.0);
    sizes.push_back(rng.uniform01() * 0.5);
  }
  const StepFunction x(times, sizes);
  const StepFunction curve = product_integral_curve(x);
  for (double t : {0.0, 0.5, 1.7, 2.9, 4.0, 10.0}) {
    CHECK(curve.eval(t) == product_integral(x, t));
  }
  for (double t : x.jump_times()) {
    CHECK(curve.eval(t) == product_integral(x, t));
  }
}

TEST_CASE("CSV round trip preserves values exactly") {
  const StepFunction f({0.5, 1.25, 9.0}, {0.125, -0.25, 1.0 / 3.0}, 0.75);
  std::stringstream ss;
  f.write_csv(ss);
  const StepFunction g = StepFunction::read_csv(ss);
  REQUIRE(g.jump_count() == f.jump_count());
  CHECK(g.initial_value() == f.initial_value());
  for (std::size_t i = 0; i < f.jump_count(); ++i) {
    CHECK(g.jump_times()[i] == f.jump_times()[i]);
    CHECK(g.cumulative()[i] == f.cumulative()[i]);
  }
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(StepFunction({1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({-1.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({NAN}, {0.5}), std::invalid_argument);
}
