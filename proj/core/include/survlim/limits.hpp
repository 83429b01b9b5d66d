#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "survlim/depgen.hpp"
#include "survlim/estimators.hpp"
#include "survlim/hermite.hpp"
#include "survlim/rng.hpp"

namespace survlim {

// standard Brownian bridge at sorted points of [0,1], B(0) = B(1) = 0,
// sampled left to right from the conditional law given the previous point
std::vector<double> simulate_brownian_bridge(const std::vector<double>& grid_u, RngStream& rng);

// How the single bridge B drives the two integrals of the weak limit.
//
// EmpiricalJoint realizes (w, w1) with the joint law the i.i.d. empirical
// processes actually converge to: w1(t) = B(H1(t)) and
// w(t) = B(H1(t)) + B(p1 + H0(t)) - B(p1), p1 = H1(inf). Both marginals
// are bridges composed with H1 and H as in the displayed limit.
//
// SharedTimeChange is the literal symbol-for-symbol reading with the same
// bridge evaluated at H1(u) and H(u); its joint law differs (it inflates
// the variance well above the classical Nelson-Aalen limit at later t).
enum class BridgeCoupling { EmpiricalJoint, SharedTimeChange };

// Simulates the Theorem-1/weak-regime limit
//   na(t) = int_0^t psi dw1 + int_0^t w(u) psi(u)^2 dH1(u),  psi = 1/(1-H),
//   km(t) = na(t) * S(t),
// discretized with the second integral integrated by parts so the bridge
// enters only through point evaluations and increments.
class WeakLimitSimulator {
 public:
  WeakLimitSimulator(const TrueModel& model, std::vector<double> t_grid, int subgrid = 8192,
                     BridgeCoupling coupling = BridgeCoupling::EmpiricalJoint,
                     double sigma2 = 1.0);

  struct Paths {
    std::vector<double> na;
    std::vector<double> km;
  };

  Paths simulate(RngStream& rng) const;
  // same computation from given bridge values at bridge_points() (tests)
  Paths paths_from_bridge(const std::vector<double>& bridge_values) const;
  // coarsened variant using every `stride`-th subgrid panel (refinement tests)
  Paths paths_from_bridge_coarse(const std::vector<double>& bridge_values, int stride) const;

  const std::vector<double>& bridge_points() const { return bridge_points_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  BridgeCoupling coupling() const { return coupling_; }

 private:
  Paths paths_from_bridge_impl(const std::vector<double>& bridge_values, int stride) const;

  std::vector<double> t_grid_;
  BridgeCoupling coupling_;
  double sigma_ = 1.0;  // sqrt(sigma2)
  double p1_ = 0.0;
  std::vector<double> u_;       // integration subgrid (contains t_grid)
  std::vector<std::size_t> t_index_;
  std::vector<double> psi_u_, big_psi_u_;  // psi and Psi = int psi^2 dH1 at u
  std::vector<double> s_t_;                // S at t_grid
  std::vector<double> bridge_points_;
  std::vector<std::size_t> a_index_;  // bridge index of H1(u_j)
  std::vector<std::size_t> c_index_;  // EmpiricalJoint: p1 + H0(u_j); Shared: H(u_j)
  std::size_t p1_index_ = 0;
};

// The deterministic scale function of the degenerate LRD limit, both as the
// literal Theorem-4 display (first integral against dH) and as the
// substitution of the degenerate Dehling-Taqqu limits into the Theorem-1
// functional (first integral against dH1). The two share the
// int psi d(eta_{r,1}) term; include_eta1_term = (r0 >= r1).
struct ZetaFunctions {
  std::vector<double> literal;
  std::vector<double> substitution;
  double sup_discrepancy = 0.0;
};

ZetaFunctions zeta_r(const TrueModel& model, const std::function<double(double)>& eta_r,
                     const std::function<double(double)>& eta_r1_derivative,
                     bool include_eta1_term, const std::vector<double>& t_grid);

// Degenerate limit of Theorem 4: path(t) = zeta(t) * Z / r!, with Z standard
// normal for r = 1 and a finite-m Hermite-sum surrogate
// Z = sigma_m^{-1} sum_{i<=m} h_r(xi_i) for r >= 2.
class LrdLimitSimulator {
 public:
  LrdLimitSimulator(std::vector<double> zeta_on_grid, int r, double d, SlowlyVarying l0,
                    std::size_t m = std::size_t{1} << 16);
  std::vector<double> simulate(RngStream& rng) const;
  double draw_z(RngStream& rng) const;

 private:
  std::vector<double> zeta_;
  int r_;
  double r_factorial_;
  double sigma_m_ = 1.0;
  std::shared_ptr<const GaussianLrdGenerator> gen_;  // r >= 2 only
};

struct LimitSample {
  std::string regime;  // "weak" | "lrd"
  std::vector<double> grid;
  std::vector<std::vector<double>> paths;  // [replication][grid point]
  std::map<std::string, std::string> metadata;

  void write_csv(std::ostream& os) const;  // replication,t,value
  std::string metadata_json() const;       // JSON sidecar text
};

}  // namespace survlim
