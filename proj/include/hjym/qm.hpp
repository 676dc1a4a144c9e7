#pragma once

#include <vector>

namespace hjym {

// Uniform grid with samples of a potential V >= 0 whose global minimum is
// zero at a grid point x_star.
struct PotentialGrid {
  double x_min = -5.0;
  double h = 1e-3;
  std::vector<double> V;
  int i_star = 0;  // grid index of the zero minimum

  double x(int i) const { return x_min + i * h; }
  int n() const { return (int)V.size(); }
  void validate() const;
};

// Samples of the principal function S with S(x_star) = 0, monotone away from
// the minimum.
struct PrincipalFunction1D {
  double x_min = -5.0;
  double h = 1e-3;
  std::vector<double> S;
  int i_star = 0;
};

// S(x) = int_{x_star}^x sqrt(2 V(u)) du, marched outward from x_star with
// composite Simpson panels (the half-panel uses the 3-point end rule).
PrincipalFunction1D solve_hje_1d(const PotentialGrid& V);

// Closed form for V = x^2/2 + lambda x^4/4:
//   S(x) = (2/(3 lambda)) [ (1 + lambda x^2/2)^{3/2} - 1 ],
// with a series branch for lambda below 1e-6.
double anharmonic_S(double x, double lambda);

// psi = exp(-S)/||exp(-S)||_2 on the grid (trapezoidal L2 norm); S is shifted
// by its minimum before exponentiation.
std::vector<double> ground_state(const PrincipalFunction1D& S);

// || (1/2)(S' - d/dx)(S' psi + psi') ||_2 / ||psi||_2 by centered second-order
// differences, restricted to where psi is above 1e-16 of its peak.
double nno_residual(const PotentialGrid& V, const PrincipalFunction1D& S,
                    const std::vector<double>& psi);

// max_i |(1/2) S'(x_i)^2 - V(x_i)| over the interior, S' by centered
// differences; O(h^2) for smooth V.
double hje_max_residual(const PotentialGrid& V, const PrincipalFunction1D& S);

// <psi| -1/2 d^2/dx^2 + V |psi> in the integration-by-parts form
// sum [ 1/2 psi'^2 + V psi^2 ] h; strictly positive for the exp(-S) state.
double conventional_ordering_energy(const PotentialGrid& V, const std::vector<double>& psi);

PotentialGrid make_anharmonic_grid(double lambda, double x_min, double x_max, double h);

}  // namespace hjym
