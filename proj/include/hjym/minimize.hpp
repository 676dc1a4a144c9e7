#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hjym/lattice.hpp"

namespace hjym {

struct MinimizerConfig {
  int max_iters = 5000;
  double grad_tol = 1e-8;        // stopping inf-norm of the projected gradient
  double initial_step = 0.05;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  bool weyl_gauge = true;
  std::uint64_t seed = 0;
  int n_starts = 1;  // >1: multi-start, reports min and spread

  void validate() const;
};

struct MinimizeReport {
  GaugeField final_field;
  double S = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<std::pair<int, double>> action_trace;  // accepted steps only
  SliceField E;
  bool converged = false;
  int n_starts = 1;
  double s_min = 0.0;
  double s_spread = 0.0;
};

// Solve the discrete Dirichlet problem: minimize the action over interior
// links with the t=0 spatial links pinned bit-exactly to bd.  Descent is a
// projected-gradient retraction U <- exp(-eta*G) U with Armijo backtracking.
MinimizeReport minimize(const BoundaryData& bd, const LatticeGeometry& geom,
                        const MinimizerConfig& cfg, const GaugeField* warm_start = nullptr);

double principal_functional(const BoundaryData& bd, const LatticeGeometry& geom,
                            const MinimizerConfig& cfg);

struct HjeResult {
  double lhs = 0.0;  // sum a^3 <E_i, E_i> at t=0
  double rhs = 0.0;  // sum a^3 <B^i, B^i> at t=0
  double rel_gap = 0.0;
};
HjeResult hje_residual(const MinimizeReport& report);

struct DerivativeCheck {
  double numeric = 0.0;
  double analytic = 0.0;
  double rel_gap = 0.0;
};
// Directional derivative of S along a tangential boundary perturbation h
// (algebra values per t=0 spatial link; datum perturbed as U -> U exp(eps h)).
// numeric: central difference of two full minimizations.  analytic: pairing
// of h with the action gradient at the pinned boundary links, the lattice
// realization of dS/dA evaluated at the minimizer.
DerivativeCheck functional_derivative_check(const BoundaryData& bd, const LatticeGeometry& geom,
                                            const MinimizerConfig& cfg, const SliceField& h,
                                            double eps);

struct DecayExponents {
  double p_F = 0.0;
  double p_A = 0.0;
  int shells = 0;
};
// Log-log fit of shell maxima of |F| and |A| against 4D distance from the
// datum's support centroid, over shells between 25% and 75% of box radius.
DecayExponents decay_diagnostic(const MinimizeReport& report, const BoundaryData& bd);

struct GaugeFixResult {
  BoundaryData fixed;
  GaugeTransform transform;
  int sweeps = 0;
  double divergence = 0.0;
};
// Iterative slice divergence minimization (lattice Hodge gauge): maximizes
// sum Re tr U_i(n) until the discrete divergence inf-norm drops below tol.
GaugeFixResult fix_spatial_gauge(const BoundaryData& bd, int max_sweeps = 20000,
                                 double tol = 1e-8);

// Full action gradient, one algebra element per link, pinned links included.
// Left-trivialized: dS = <X, g(link)> for the update U -> exp(eps X) U.
std::vector<AlgebraElement> action_gradient(const GaugeField& f);

// Covariant divergence of E on the t=0 slice, one algebra element per site:
// D_i E^i(x) = sum_i [E_i(x) - U_i(x-i)^{-1} E_i(x-i) U_i(x-i)] / a.
std::vector<AlgebraElement> gauss_residual(const MinimizeReport& report);

double slice_inf_norm(const SliceField& s);
double slice_l2_product(const SliceField& a, const SliceField& b);  // sum a^3 <a_i,b_i>
double algebra_inf_norm(const std::vector<AlgebraElement>& v);

GaugeField cold_start(const BoundaryData& bd, const LatticeGeometry& geom);

inline constexpr double kRelGapFloor = 1e-15;

}  // namespace hjym
