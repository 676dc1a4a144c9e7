#pragma once

#include <array>
#include <cstdint>

#include "hjym/lattice.hpp"
#include "hjym/maxwell.hpp"

namespace hjym {

// Dirichlet data on the t=0 slice.  Link phases are theta = a * A for the
// stated vector potential A; SU(2) data put the same profile into one algebra
// direction (color in 0..2).

// A_pol(x) = amplitude * cos(2 pi m.x / N); the polarization axis must have
// m_pol = 0 so the mode is transverse.
BoundaryData single_mode_boundary(int n_x, int n_y, int n_z, double spacing, GroupKind kind,
                                  const std::array<int, 3>& m, double amplitude, int pol_axis,
                                  int color = 0);

// Localized ring: A = amplitude * exp(-|d|^2 / 2 w^2) * (z_hat x d)/w with d
// the min-image displacement from the center.
BoundaryData localized_bump_boundary(int n_x, int n_y, int n_z, double spacing, GroupKind kind,
                                     const std::array<double, 3>& center, double width,
                                     double amplitude, int color = 0);

// Same generators for the Maxwell sector.
VectorFieldGrid vf_single_mode(int n, double spacing, const std::array<int, 3>& m,
                               double amplitude, int pol_axis);
VectorFieldGrid vf_bump(int n, double spacing, const std::array<double, 3>& center, double width,
                        double amplitude);
// Spectral gradient of a centered gaussian scalar; exactly longitudinal for
// the spectral projector.
VectorFieldGrid vf_gradient(int n, double spacing, double width, double amplitude);
// Curl of a few seeded gaussian bumps: exactly transverse, gaussian tails.
VectorFieldGrid vf_random_localized_transverse(int n, double spacing, std::uint64_t seed,
                                               double width, double amplitude);

VectorFieldGrid reflect_field(const VectorFieldGrid& A, int axis);

// Random tangential perturbation for derivative checks, ||h||_inf <= amplitude.
SliceField random_slice_perturbation(GroupKind kind, int n_x, int n_y, int n_z,
                                     std::uint64_t seed, double amplitude);

// Perturbation with a single transverse mode profile.
SliceField mode_slice_perturbation(GroupKind kind, int n_x, int n_y, int n_z,
                                   const std::array<int, 3>& m, double amplitude, int pol_axis,
                                   int color = 0);

}  // namespace hjym
