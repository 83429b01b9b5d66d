#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "survlim/distributions.hpp"

using survlim::Dist;

TEST_CASE("exponential cdf, quantile and pdf are mutually consistent") {
  const Dist d = Dist::exponential(1.5);
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-15));
  for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
    CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  // pdf = d/dt cdf, central difference
  const double t = 0.7, h = 1e-6;
  CHECK(d.pdf(t) == doctest::Approx((d.cdf(t + h) - d.cdf(t - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("weibull, uniform and lognormal families") {
  const Dist w = Dist::weibull(2.0, 1.5);
  CHECK(w.cdf(1.5) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(w.quantile(w.cdf(0.8)) == doctest::Approx(0.8).epsilon(1e-12));

  const Dist u = Dist::uniform(1.0, 3.0);
  CHECK(u.cdf(2.0) == 0.5);
  CHECK(u.quantile(0.25) == 1.5);
  CHECK(u.pdf(0.5) == 0.0);
  CHECK(u.pdf(2.0) == 0.5);

  const Dist ln = Dist::lognormal(0.0, 1.0);
  CHECK(ln.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ln.quantile(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the none family is a point mass at infinity") {
  const Dist g = Dist::none();
  CHECK(g.is_none());
  CHECK(g.cdf(1e12) == 0.0);
  CHECK(g.quantile(0.999) == std::numeric_limits<double>::infinity());
}

TEST_CASE("from_params parses families and rejects garbage") {
  const Dist d = Dist::from_params("exponential", {{"rate", 2.0}});
  CHECK(d.cdf(1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK_THROWS_AS(Dist::from_params("exponential", {}), std::invalid_argument);
  CHECK_THROWS_AS(Dist::from_params("cauchy", {{"scale", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Dist::from_params("weibull", {{"shape", -1.0}, {"scale", 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("normal helpers match known values") {
  CHECK(survlim::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(survlim::normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(survlim::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(survlim::normal_quantile(survlim::normal_cdf(1.234)) ==
        doctest::Approx(1.234).epsilon(1e-12));
}
