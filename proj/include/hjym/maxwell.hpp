#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "hjym/lattice.hpp"

namespace hjym {

// Real 3-vector field on a periodic N^3 grid.  Wavevectors come from integer
// modes m via k_i = 2 pi m~_i/(N a) with the symmetric alias m~ = m - N for
// m > N/2.  DFT convention: forward unnormalized, inverse carries 1/N^3.
struct VectorFieldGrid {
  int n = 16;
  double spacing = 1.0;
  std::array<std::vector<double>, 3> comp;

  long sites() const { return 1L * n * n * n; }
  long idx(int x, int y, int z) const { return (1L * x * n + y) * n + z; }
  static VectorFieldGrid zero(int n, double spacing);
};

// Spectral components with the longitudinal part removed mode by mode
// (k.A~ = 0 for every k != 0; the zero mode is untouched).
struct TransverseField {
  int n = 0;
  double spacing = 1.0;
  std::array<std::vector<std::complex<double>>, 3> modes;

  VectorFieldGrid to_position() const;
};

TransverseField transverse_project(const VectorFieldGrid& A);

// S = 1/2 (a^3/N^3) sum_{k != 0} |k| |A~_T(k)|^2.
double wheeler_S_spectral(const VectorFieldGrid& A);

struct KernelResult {
  double value = 0.0;
  bool localized_warning = false;
};
// Position-kernel form: B = curl A by central differences, then
// (1/4 pi^2) a^6 sum_{x,y} B(x).B(y)/|x-y|^2 with the minimal-image distance
// and the diagonal replaced by the cell average of the kernel.  The double
// sum is evaluated exactly through an FFT autocorrelation.
KernelResult wheeler_S_kernel(const VectorFieldGrid& A);

// Per-mode Euclidean decay reference for the U1 lattice minimizer.  Without
// the finite-grid correction this is exactly wheeler_S_spectral.  With it,
// each mode's weight is replaced by the value of the discrete two-point
// boundary problem on the (n_t, a) time grid, solved by direct quadratic
// minimization of the per-mode clover energy.
double abelian_mode_oracle(const VectorFieldGrid& a_tau, int n_t,
                           bool finite_grid_correction = true);

struct BoostCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_gap = 0.0;
  bool localized_warning = false;
};
// Moment identity sum x^i |dS/dA|^2 = sum x^i |B|^2 with dS/dA the field of
// modes |k| A~_T(k) and B the spectral curl; coordinates are measured from
// the grid centroid a*(N-1)/2.
BoostCheck boost_identity_check(const VectorFieldGrid& A, int axis);

// Spectral derivatives (exact symbols i*k): curl of a vector field and
// gradient of a scalar sampled into comp[0].
VectorFieldGrid spectral_curl(const VectorFieldGrid& W);
VectorFieldGrid spectral_gradient(const std::vector<double>& phi, int n, double spacing);

void save_vector_field(const VectorFieldGrid& A, const std::string& path);
VectorFieldGrid load_vector_field(const std::string& path);

// Lattice datum with link phases theta_i(x) = a * A_i(x).
BoundaryData to_u1_boundary(const VectorFieldGrid& A);

bool field_is_localized(const VectorFieldGrid& A);

}  // namespace hjym
