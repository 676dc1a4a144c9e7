#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hjym/lie.hpp"

namespace hjym {

// Finite 4D lattice modeling the Euclidean half space t >= 0.  Time is open
// (Dirichlet slice at t = 0, free end at t = (n_t-1)*a), space is periodic.
// Site index: ((t*n_x + x)*n_y + y)*n_z + z.  Link index: site*4 + mu with
// mu = 0 the time direction and 1,2,3 the spatial ones.
struct LatticeGeometry {
  int n_t = 8, n_x = 8, n_y = 8, n_z = 8;
  double spacing = 1.0;

  void validate() const;
  long sites() const { return 1L * n_t * n_x * n_y * n_z; }
  long links() const { return sites() * 4; }
  long slice_sites() const { return 1L * n_x * n_y * n_z; }
  int extent(int mu) const {
    return mu == 0 ? n_t : (mu == 1 ? n_x : (mu == 2 ? n_y : n_z));
  }
};

struct Site {
  int t = 0, x = 0, y = 0, z = 0;
  int& operator[](int mu) { return mu == 0 ? t : (mu == 1 ? x : (mu == 2 ? y : z)); }
  int operator[](int mu) const { return mu == 0 ? t : (mu == 1 ? x : (mu == 2 ? y : z)); }
};

inline long site_index(const LatticeGeometry& g, const Site& s) {
  return ((1L * s.t * g.n_x + s.x) * g.n_y + s.y) * g.n_z + s.z;
}

// Step one lattice unit along +/-mu.  Returns false when the move would cross
// the open time boundary; spatial directions wrap.
bool step_site(const LatticeGeometry& g, Site& s, int mu, int dir);

template <class G>
struct FieldT {
  LatticeGeometry geom;
  std::vector<typename G::Link> links;  // geom.links() entries

  typename G::Link& link(const Site& s, int mu) { return links[site_index(geom, s) * 4 + mu]; }
  const typename G::Link& link(const Site& s, int mu) const {
    return links[site_index(geom, s) * 4 + mu];
  }
};

using U1Field = FieldT<U1Group>;
using Su2Field = FieldT<Su2Group>;

// Kind-erased gauge field used at API boundaries.
struct GaugeField {
  std::variant<U1Field, Su2Field> impl;

  GroupKind kind() const {
    return std::holds_alternative<U1Field>(impl) ? GroupKind::U1 : GroupKind::Su2;
  }
  const LatticeGeometry& geometry() const;
  GroupElement link(const Site& s, int mu) const;
  void set_link(const Site& s, int mu, const GroupElement& u);

  static GaugeField flat(const LatticeGeometry& g, GroupKind kind);
};

// Fixed tangential links on the t = 0 slice (the Dirichlet datum).
struct BoundaryData {
  GroupKind kind = GroupKind::U1;
  int n_x = 8, n_y = 8, n_z = 8;
  double spacing = 1.0;
  // slice-site-major, spatial-direction-minor: idx = site3*3 + (i-1)
  std::variant<std::vector<double>, std::vector<Quat>> links;

  long slice_sites() const { return 1L * n_x * n_y * n_z; }
  static BoundaryData flat(int n_x, int n_y, int n_z, double spacing, GroupKind kind);
  bool compatible(const LatticeGeometry& g) const {
    return n_x == g.n_x && n_y == g.n_y && n_z == g.n_z && spacing == g.spacing;
  }
};

// Algebra-valued 3-vector field on a spatial slice (E and B live here).
struct SliceField {
  GroupKind kind = GroupKind::U1;
  int n_x = 0, n_y = 0, n_z = 0;
  double spacing = 1.0;
  std::vector<AlgebraElement> data;  // site3*3 + (i-1)

  long slice_sites() const { return 1L * n_x * n_y * n_z; }
  const AlgebraElement& at(long site3, int i) const { return data[site3 * 3 + i]; }
  AlgebraElement& at(long site3, int i) { return data[site3 * 3 + i]; }
};

// A gauge transformation: one group element per site.  Slice transforms are
// extended t-constant when applied to a 4D field.
struct GaugeTransform {
  GroupKind kind = GroupKind::U1;
  bool slice = true;
  std::variant<std::vector<double>, std::vector<Quat>> g;
};

GaugeTransform random_slice_transform(GroupKind kind, int n_x, int n_y, int n_z,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Operations

// Elementary oriented plaquette U_mu(n) U_nu(n+mu) U_mu(n+nu)^-1 U_nu(n)^-1.
GroupElement plaquette(const GaugeField& f, const Site& n, int mu, int nu);

// Clover-averaged field strength F_{mu nu}(n) in lattice units (log of the
// averaged leaf holonomies divided by a^2).  One-sided at the time edges.
AlgebraElement field_strength(const GaugeField& f, const Site& n, int mu, int nu);

// S = 1/2 sum_p a^4 <log(P_p)/a^2, log(P_p)/a^2> over elementary plaquettes:
// the log-of-plaquette discretization of 1/2 ||F||^2, exact to O(a^2) in the
// small-field limit and positive definite in the flux variables.  (Summing
// clover-averaged strengths instead leaves null flux directions that descent
// exploits; see the minimizer notes.)
double euclidean_action(const GaugeField& f);

GaugeField gauge_transform(const GaugeField& f, const GaugeTransform& t);
BoundaryData gauge_transform(const BoundaryData& bd, const GaugeTransform& t);

// E_i(x) = (log U_i(a,x) - log U_i(0,x))/a.  Requires Weyl gauge.
SliceField electric_field(const GaugeField& f);

// B^i(x) = 1/2 eps^{ijk} F_{jk}(t_slice, x).
SliceField magnetic_field(const GaugeField& f, int t_slice);

BoundaryData extract_boundary(const GaugeField& f);

// Exact lattice symmetries of the spatial slice (axes 0,1,2 = x,y,z).
BoundaryData shift_boundary(const BoundaryData& bd, const std::array<int, 3>& v);
BoundaryData rotate90_boundary(const BoundaryData& bd, int axis_a, int axis_b);
GaugeField shift_field(const GaugeField& f, const std::array<int, 3>& v);
GaugeField rotate90_field(const GaugeField& f, int axis_a, int axis_b);

// Clover action of an isolated spatial slice (spatial planes only).
double slice_action(const BoundaryData& bd);

// ---------------------------------------------------------------------------
// Persistence (see io.cpp for the byte layout).

void save_field(const GaugeField& f, const std::string& path);
GaugeField load_field(const std::string& path);

std::uint32_t boundary_digest(const BoundaryData& bd);

}  // namespace hjym
