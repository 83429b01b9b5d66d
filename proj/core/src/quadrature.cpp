#include "survlim/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace survlim {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the
// three-term recurrence, weights are mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
    J(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("golub_welsch: eigensolver failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

std::mutex cache_mutex;

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    std::vector<double> off(static_cast<std::size_t>(order - 1));
    for (int k = 1; k < order; ++k) {
      off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    }
    it = cache.emplace(order, golub_welsch(off, 2.0)).first;
  }
  return it->second;
}

namespace {

// orthonormal probabilists' Hermite values (p_0, ..., p_n) at x, stable up
// to high order; p_k = he_k / sqrt(k!)
void orthonormal_hermite(int n, double x, double& p_n, double& p_nm1) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  p_n = cur;
  p_nm1 = prev;
}

}  // namespace

const QuadratureRule& gauss_hermite_prob(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_prob: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    std::vector<double> off(static_cast<std::size_t>(order - 1));
    for (int k = 1; k < order; ++k) {
      off[static_cast<std::size_t>(k - 1)] = std::sqrt(static_cast<double>(k));
    }
    QuadratureRule rule = golub_welsch(off, 1.0);
    // Newton-polish the eigenvalue nodes and recompute the weights as
    // 1 / (n p_{n-1}(x)^2); the raw eigen decomposition leaves ~1e-13
    // node error, which the high-order orthogonality checks can see
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      double x = rule.nodes[i];
      double p_n = 0.0, p_nm1 = 0.0;
      for (int iter = 0; iter < 3; ++iter) {
        orthonormal_hermite(order, x, p_n, p_nm1);
        const double deriv = std::sqrt(static_cast<double>(order)) * p_nm1;
        if (deriv == 0.0) break;
        x -= p_n / deriv;
      }
      orthonormal_hermite(order, x, p_n, p_nm1);
      rule.nodes[i] = x;
      rule.weights[i] = 1.0 / (order * p_nm1 * p_nm1);
    }
    it = cache.emplace(order, std::move(rule)).first;
  }
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
  const QuadratureRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc;
}

double integrate_gl_composite(const std::function<double(double)>& f, double a, double b,
                              int order, double max_panel_width) {
  if (!(b >= a)) throw std::invalid_argument("integrate_gl_composite: b < a");
  if (!(max_panel_width > 0.0)) {
    throw std::invalid_argument("integrate_gl_composite: panel width must be > 0");
  }
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel_width)));
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels;
    const double hi = a + (b - a) * (p + 1) / panels;
    acc += integrate_gl(f, lo, hi, order);
  }
  return acc;
}

}  // namespace survlim
