#pragma once

#include <array>

#include "hjym/detail/ksum.hpp"
#include "hjym/lattice.hpp"

namespace hjym::detail {

struct LinkRef {
  long idx = -1;   // index into FieldT::links
  bool adj = false;
};

// The four leaves of the clover at n in the (mu,nu) plane, all based at n and
// all positively oriented, as signed step sequences.
inline const std::array<std::array<int, 4>, 4>& leaf_steps() {
  // +d encoded as (d+1), -d as -(d+1)
  static const std::array<std::array<int, 4>, 4> q = {{
      {{+1, +2, -1, -2}},  // (+mu,+nu)
      {{+2, -1, -2, +1}},  // (-mu,+nu)
      {{-1, -2, +1, +2}},  // (-mu,-nu)
      {{-2, +1, +2, -1}},  // (+mu,-nu)
  }};
  return q;
}

// Walk a closed loop of four signed steps in the (mu,nu) plane starting at n.
// Fills the traversed links; returns false if the loop leaves the open time
// range (that leaf is then unavailable).
inline bool walk_loop(const LatticeGeometry& g, Site n, int mu, int nu,
                      const std::array<int, 4>& steps, LinkRef out[4]) {
  Site s = n;
  for (int p = 0; p < 4; ++p) {
    const int code = steps[p];
    const int d = (code > 0 ? code : -code) == 1 ? mu : nu;
    if (code > 0) {
      out[p] = LinkRef{site_index(g, s) * 4 + d, false};
      if (!step_site(g, s, d, +1)) return false;
    } else {
      if (!step_site(g, s, d, -1)) return false;
      out[p] = LinkRef{site_index(g, s) * 4 + d, true};
    }
  }
  return true;
}

template <class G>
typename G::Link leaf_factor(const FieldT<G>& f, const LinkRef& r) {
  return r.adj ? G::adj(f.links[r.idx]) : f.links[r.idx];
}

template <class G>
typename G::Link leaf_product(const FieldT<G>& f, const LinkRef refs[4]) {
  typename G::Link u = leaf_factor(f, refs[0]);
  for (int p = 1; p < 4; ++p) u = G::mul(u, leaf_factor(f, refs[p]));
  return u;
}

// Sum of the available leaf holonomies around (n, mu<nu); count reports how
// many leaves exist (4 in the interior, 2 on the time edges for time planes).
template <class G>
typename G::Accum clover_accum(const FieldT<G>& f, const Site& n, int mu, int nu, int* count) {
  auto q = G::accum_zero();
  int c = 0;
  LinkRef refs[4];
  for (const auto& steps : leaf_steps()) {
    if (!walk_loop(f.geom, n, mu, nu, steps, refs)) continue;
    G::accum_add(q, leaf_product(f, refs));
    ++c;
  }
  if (count) *count = c;
  return q;
}

// Action sum over elementary plaquettes: S = 1/2 sum_p ||log P_p||^2.  The
// single-plaquette log keeps the flux quadratic form positive definite; the
// clover average is used only for field-strength estimates, where its symbol
// zeros at the Nyquist fluxes are harmless.  (As a minimization objective the
// clover-averaged form has exact null flux directions, and descent escapes
// into checkerboard-contaminated minima.)
template <class G>
double plaquette_action(const FieldT<G>& f) {
  const LatticeGeometry& g = f.geom;
  KSum total;
  LinkRef refs[4];
  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z)
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
              if (!walk_loop(g, n, mu, nu, leaf_steps()[0], refs)) continue;
              auto acc = G::accum_zero();
              G::accum_add(acc, leaf_product(f, refs));
              total.add(0.5 * G::norm2(G::log_accum(acc)));
            }
  return total.value();
}

}  // namespace hjym::detail
