#pragma once

#include <functional>
#include <vector>

namespace survlim {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] (Golub-Welsch; rules are cached per order).
const QuadratureRule& gauss_legendre(int order);

// Gauss-Hermite rule for the probabilists' weight, i.e. nodes x_i and
// weights w_i with  sum w_i f(x_i) ~ E[f(Z)], Z standard normal.
const QuadratureRule& gauss_hermite_prob(int order);

// integral of f over [a, b] with a single Gauss-Legendre panel
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

// composite Gauss-Legendre: panels of width at most max_panel_width
double integrate_gl_composite(const std::function<double(double)>& f, double a, double b,
                              int order, double max_panel_width);

}  // namespace survlim
