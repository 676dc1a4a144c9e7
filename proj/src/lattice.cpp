#include "hjym/lattice.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hjym/detail/clover.hpp"
#include "hjym/detail/ksum.hpp"

namespace hjym {

void LatticeGeometry::validate() const {
  if (n_t < 4) throw std::invalid_argument("lattice geometry: n_t must be >= 4");
  if (n_x < 4 || n_y < 4 || n_z < 4)
    throw std::invalid_argument("lattice geometry: spatial extents must be >= 4");
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice geometry: spacing must be > 0");
}

bool step_site(const LatticeGeometry& g, Site& s, int mu, int dir) {
  if (mu == 0) {
    const int t = s.t + dir;
    if (t < 0 || t >= g.n_t) return false;
    s.t = t;
    return true;
  }
  const int n = g.extent(mu);
  int& c = s[mu];
  c += dir;
  if (c < 0) c += n;
  if (c >= n) c -= n;
  return true;
}

const LatticeGeometry& GaugeField::geometry() const {
  return std::visit([](const auto& f) -> const LatticeGeometry& { return f.geom; }, impl);
}

GroupElement GaugeField::link(const Site& s, int mu) const {
  if (const auto* u1 = std::get_if<U1Field>(&impl)) return GroupElement::u1(u1->link(s, mu));
  return GroupElement::su2(std::get<Su2Field>(impl).link(s, mu));
}

void GaugeField::set_link(const Site& s, int mu, const GroupElement& u) {
  if (u.kind != kind()) throw std::invalid_argument("set_link: group kind mismatch");
  if (auto* u1 = std::get_if<U1Field>(&impl))
    u1->link(s, mu) = u.phase();
  else
    std::get<Su2Field>(impl).link(s, mu) = u.quat();
}

GaugeField GaugeField::flat(const LatticeGeometry& g, GroupKind kind) {
  g.validate();
  GaugeField f;
  if (kind == GroupKind::U1) {
    f.impl = U1Field{g, std::vector<double>(g.links(), 0.0)};
  } else {
    f.impl = Su2Field{g, std::vector<Quat>(g.links(), Quat{})};
  }
  return f;
}

BoundaryData BoundaryData::flat(int n_x, int n_y, int n_z, double spacing, GroupKind kind) {
  BoundaryData bd;
  bd.kind = kind;
  bd.n_x = n_x;
  bd.n_y = n_y;
  bd.n_z = n_z;
  bd.spacing = spacing;
  if (kind == GroupKind::U1)
    bd.links = std::vector<double>(bd.slice_sites() * 3, 0.0);
  else
    bd.links = std::vector<Quat>(bd.slice_sites() * 3, Quat{});
  return bd;
}

namespace {

template <class G>
GroupElement plaquette_impl(const FieldT<G>& f, const Site& n, int mu, int nu) {
  detail::LinkRef refs[4];
  if (!detail::walk_loop(f.geom, n, mu, nu, detail::leaf_steps()[0], refs))
    throw BoundaryError("plaquette crosses the open time boundary");
  const auto u = detail::leaf_product(f, refs);
  if constexpr (G::kind == GroupKind::U1)
    return GroupElement::u1(u);
  else
    return GroupElement::su2(u);
}

template <class G>
AlgebraElement field_strength_impl(const FieldT<G>& f, const Site& n, int mu, int nu) {
  if (mu == nu) throw std::invalid_argument("field_strength: mu == nu");
  double sign = 1.0;
  int a = mu, b = nu;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;  // antisymmetry is exact at the clover-sum level
  }
  int count = 0;
  const auto q = detail::clover_accum(f, n, a, b, &count);
  if (count == 0) throw BoundaryError("field_strength: no leaves available in this plane");
  const double inv_a2 = 1.0 / (f.geom.spacing * f.geom.spacing);
  auto c = G::scale(sign * inv_a2, G::log_accum(q));
  if constexpr (G::kind == GroupKind::U1)
    return AlgebraElement::u1(c);
  else
    return AlgebraElement::su2(c);
}

template <class G>
double action_impl(const FieldT<G>& f) {
  return detail::plaquette_action(f);
}

template <class G>
const std::vector<typename G::Link>& transform_vec(const GaugeTransform& t);

template <>
const std::vector<double>& transform_vec<U1Group>(const GaugeTransform& t) {
  return std::get<std::vector<double>>(t.g);
}
template <>
const std::vector<Quat>& transform_vec<Su2Group>(const GaugeTransform& t) {
  return std::get<std::vector<Quat>>(t.g);
}

// U_mu(n) -> g(n)^-1 U_mu(n) g(n+mu); slice transforms are t-constant.
template <class G>
FieldT<G> gauge_transform_impl(const FieldT<G>& f, const GaugeTransform& t) {
  const LatticeGeometry& g = f.geom;
  const auto& gv = transform_vec<G>(t);
  const long expected = t.slice ? g.slice_sites() : g.sites();
  if ((long)gv.size() != expected)
    throw std::invalid_argument("gauge_transform: transform size mismatch");
  auto at = [&](const Site& s) -> const typename G::Link& {
    if (t.slice) {
      Site s3 = s;
      s3.t = 0;
      return gv[site_index(g, s3)];
    }
    return gv[site_index(g, s)];
  };
  FieldT<G> out = f;
  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z)
          for (int mu = 0; mu < 4; ++mu) {
            Site m = n;
            if (!step_site(g, m, mu, +1)) continue;  // unused last-slice time links
            out.link(n, mu) = G::mul(G::adj(at(n)), G::mul(f.link(n, mu), at(m)));
          }
  return out;
}

template <class G>
std::vector<typename G::Link>& bd_links(BoundaryData& bd);
template <>
std::vector<double>& bd_links<U1Group>(BoundaryData& bd) {
  return std::get<std::vector<double>>(bd.links);
}
template <>
std::vector<Quat>& bd_links<Su2Group>(BoundaryData& bd) {
  return std::get<std::vector<Quat>>(bd.links);
}
template <class G>
const std::vector<typename G::Link>& bd_links(const BoundaryData& bd);
template <>
const std::vector<double>& bd_links<U1Group>(const BoundaryData& bd) {
  return std::get<std::vector<double>>(bd.links);
}
template <>
const std::vector<Quat>& bd_links<Su2Group>(const BoundaryData& bd) {
  return std::get<std::vector<Quat>>(bd.links);
}

long slice_index(int n_y, int n_z, int x, int y, int z) {
  return (1L * x * n_y + y) * n_z + z;
}

template <class G>
BoundaryData gauge_transform_bd_impl(const BoundaryData& bd, const GaugeTransform& t) {
  const auto& gv = transform_vec<G>(t);
  if ((long)gv.size() != bd.slice_sites())
    throw std::invalid_argument("gauge_transform: transform size mismatch");
  BoundaryData out = bd;
  auto& links = bd_links<G>(out);
  const auto& in = bd_links<G>(bd);
  const int nx = bd.n_x, ny = bd.n_y, nz = bd.n_z;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) {
        const long s = slice_index(ny, nz, x, y, z);
        const int nb[3][3] = {{(x + 1) % nx, y, z}, {x, (y + 1) % ny, z}, {x, y, (z + 1) % nz}};
        for (int i = 0; i < 3; ++i) {
          const long sn = slice_index(ny, nz, nb[i][0], nb[i][1], nb[i][2]);
          links[s * 3 + i] = G::mul(G::adj(gv[s]), G::mul(in[s * 3 + i], gv[sn]));
        }
      }
  return out;
}

}  // namespace

GroupElement plaquette(const GaugeField& f, const Site& n, int mu, int nu) {
  return std::visit([&](const auto& ff) { return plaquette_impl(ff, n, mu, nu); }, f.impl);
}

AlgebraElement field_strength(const GaugeField& f, const Site& n, int mu, int nu) {
  return std::visit([&](const auto& ff) { return field_strength_impl(ff, n, mu, nu); }, f.impl);
}

double euclidean_action(const GaugeField& f) {
  return std::visit([](const auto& ff) { return action_impl(ff); }, f.impl);
}

GaugeField gauge_transform(const GaugeField& f, const GaugeTransform& t) {
  if (t.kind != f.kind()) throw std::invalid_argument("gauge_transform: group kind mismatch");
  GaugeField out;
  std::visit([&](const auto& ff) { out.impl = gauge_transform_impl(ff, t); }, f.impl);
  return out;
}

BoundaryData gauge_transform(const BoundaryData& bd, const GaugeTransform& t) {
  if (t.kind != bd.kind) throw std::invalid_argument("gauge_transform: group kind mismatch");
  if (!t.slice) throw std::invalid_argument("gauge_transform: boundary data needs a slice transform");
  if (bd.kind == GroupKind::U1) return gauge_transform_bd_impl<U1Group>(bd, t);
  return gauge_transform_bd_impl<Su2Group>(bd, t);
}

GaugeTransform random_slice_transform(GroupKind kind, int n_x, int n_y, int n_z,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GaugeTransform t;
  t.kind = kind;
  t.slice = true;
  const long n = 1L * n_x * n_y * n_z;
  if (kind == GroupKind::U1) {
    std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
    std::vector<double> g(n);
    for (auto& v : g) v = dist(rng);
    t.g = std::move(g);
  } else {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<Quat> g(n);
    for (auto& v : g) {
      Quat q{dist(rng), dist(rng), dist(rng), dist(rng)};
      v = qnormalize(q);
    }
    t.g = std::move(g);
  }
  return t;
}

SliceField electric_field(const GaugeField& f) {
  const LatticeGeometry& g = f.geometry();
  SliceField e;
  e.kind = f.kind();
  e.n_x = g.n_x;
  e.n_y = g.n_y;
  e.n_z = g.n_z;
  e.spacing = g.spacing;
  e.data.resize(e.slice_sites() * 3);
  std::visit(
      [&](const auto& ff) {
        using G = std::decay_t<decltype(ff)>;
        using Gr = std::conditional_t<std::is_same_v<G, U1Field>, U1Group, Su2Group>;
        // Weyl gauge precondition: all used time links must be identity.
        Site n;
        for (n.t = 0; n.t + 1 < g.n_t; ++n.t)
          for (n.x = 0; n.x < g.n_x; ++n.x)
            for (n.y = 0; n.y < g.n_y; ++n.y)
              for (n.z = 0; n.z < g.n_z; ++n.z) {
                const auto& u0 = ff.link(n, 0);
                if constexpr (Gr::kind == GroupKind::U1) {
                  if (std::abs(wrap_angle(u0)) > 1e-12)
                    throw std::invalid_argument("electric_field requires the Weyl gauge");
                } else {
                  if (std::abs(u0.w - 1.0) + std::abs(u0.x) + std::abs(u0.y) + std::abs(u0.z) >
                      1e-12)
                    throw std::invalid_argument("electric_field requires the Weyl gauge");
                }
              }
        const double inv_a = 1.0 / g.spacing;
        Site s0, s1;
        for (s0.x = 0; s0.x < g.n_x; ++s0.x)
          for (s0.y = 0; s0.y < g.n_y; ++s0.y)
            for (s0.z = 0; s0.z < g.n_z; ++s0.z) {
              s1 = s0;
              s1.t = 1;
              const long s3 = slice_index(g.n_y, g.n_z, s0.x, s0.y, s0.z);
              for (int i = 1; i <= 3; ++i) {
                const auto c1 = Gr::logmap(ff.link(s1, i));
                const auto c0 = Gr::logmap(ff.link(s0, i));
                const auto d = Gr::scale(inv_a, Gr::add(c1, Gr::scale(-1.0, c0)));
                if constexpr (Gr::kind == GroupKind::U1)
                  e.at(s3, i - 1) = AlgebraElement::u1(d);
                else
                  e.at(s3, i - 1) = AlgebraElement::su2(d);
              }
            }
      },
      f.impl);
  return e;
}

SliceField magnetic_field(const GaugeField& f, int t_slice) {
  const LatticeGeometry& g = f.geometry();
  if (t_slice < 0 || t_slice >= g.n_t) throw BoundaryError("magnetic_field: bad time slice");
  SliceField b;
  b.kind = f.kind();
  b.n_x = g.n_x;
  b.n_y = g.n_y;
  b.n_z = g.n_z;
  b.spacing = g.spacing;
  b.data.resize(b.slice_sites() * 3);
  Site n;
  n.t = t_slice;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        const long s3 = slice_index(g.n_y, g.n_z, n.x, n.y, n.z);
        b.at(s3, 0) = field_strength(f, n, 2, 3);
        b.at(s3, 1) = field_strength(f, n, 3, 1);
        b.at(s3, 2) = field_strength(f, n, 1, 2);
      }
  return b;
}

BoundaryData extract_boundary(const GaugeField& f) {
  const LatticeGeometry& g = f.geometry();
  BoundaryData bd = BoundaryData::flat(g.n_x, g.n_y, g.n_z, g.spacing, f.kind());
  std::visit(
      [&](const auto& ff) {
        using G = std::decay_t<decltype(ff)>;
        using Gr = std::conditional_t<std::is_same_v<G, U1Field>, U1Group, Su2Group>;
        auto& links = bd_links<Gr>(bd);
        Site n;
        n.t = 0;
        for (n.x = 0; n.x < g.n_x; ++n.x)
          for (n.y = 0; n.y < g.n_y; ++n.y)
            for (n.z = 0; n.z < g.n_z; ++n.z) {
              const long s3 = slice_index(g.n_y, g.n_z, n.x, n.y, n.z);
              for (int i = 1; i <= 3; ++i) links[s3 * 3 + (i - 1)] = ff.link(n, i);
            }
      },
      f.impl);
  return bd;
}

namespace {

// Spatial 90 degree rotation in the (a,b) plane as a mod-N lattice map:
// (xa, xb) -> (xb, N-1-xa) with direction a -> -b, b -> a.
struct Rot90 {
  int a, b, n;  // spatial axes 0..2, extents must match
  void map_site(Site& s) const {
    const int xa = s[a + 1], xb = s[b + 1];
    s[a + 1] = xb;
    s[b + 1] = (n - 1 - xa + n) % n;
  }
};

template <class G, class SiteMap>
FieldT<G> permute_field(const FieldT<G>& f, SiteMap&& map_site, int rot_a, int rot_b) {
  // rot_a/rot_b: spatial axes of a 90 degree rotation, or -1 for pure shifts.
  const LatticeGeometry& g = f.geom;
  FieldT<G> out = f;
  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z)
          for (int mu = 0; mu < 4; ++mu) {
            if (mu == 0 && n.t + 1 >= g.n_t) continue;  // unused last-slice time links
            Site img = n;
            map_site(img);
            if (rot_a >= 0 && mu == (rot_a + 1)) {
              // direction a maps to -b: the image link sits one step back in b.
              Site base = img;
              step_site(g, base, rot_b + 1, -1);
              out.link(base, rot_b + 1) = G::adj(f.link(n, mu));
            } else if (rot_a >= 0 && mu == (rot_b + 1)) {
              out.link(img, rot_a + 1) = f.link(n, mu);
            } else {
              out.link(img, mu) = f.link(n, mu);
            }
          }
  return out;
}

}  // namespace

GaugeField shift_field(const GaugeField& f, const std::array<int, 3>& v) {
  const LatticeGeometry& g = f.geometry();
  auto map_site = [&](Site& s) {
    s.x = ((s.x + v[0]) % g.n_x + g.n_x) % g.n_x;
    s.y = ((s.y + v[1]) % g.n_y + g.n_y) % g.n_y;
    s.z = ((s.z + v[2]) % g.n_z + g.n_z) % g.n_z;
  };
  GaugeField out;
  std::visit([&](const auto& ff) { out.impl = permute_field(ff, map_site, -1, -1); }, f.impl);
  return out;
}

GaugeField rotate90_field(const GaugeField& f, int axis_a, int axis_b) {
  const LatticeGeometry& g = f.geometry();
  if (axis_a == axis_b || axis_a < 0 || axis_a > 2 || axis_b < 0 || axis_b > 2)
    throw std::invalid_argument("rotate90: bad axes");
  if (g.extent(axis_a + 1) != g.extent(axis_b + 1))
    throw std::invalid_argument("rotate90: plane extents differ, not a lattice symmetry");
  Rot90 rot{axis_a, axis_b, g.extent(axis_a + 1)};
  auto map_site = [&](Site& s) { rot.map_site(s); };
  GaugeField out;
  std::visit([&](const auto& ff) { out.impl = permute_field(ff, map_site, axis_a, axis_b); },
             f.impl);
  return out;
}

namespace {

template <class G>
BoundaryData permute_boundary(const BoundaryData& bd,
                              const std::function<void(int&, int&, int&)>& map3, int rot_a,
                              int rot_b) {
  BoundaryData out = bd;
  auto& links = bd_links<G>(out);
  const auto& in = bd_links<G>(bd);
  const int nx = bd.n_x, ny = bd.n_y, nz = bd.n_z;
  const int ext[3] = {nx, ny, nz};
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) {
        const long s = slice_index(ny, nz, x, y, z);
        for (int i = 0; i < 3; ++i) {
          int ix = x, iy = y, iz = z;
          map3(ix, iy, iz);
          if (rot_a >= 0 && i == rot_a) {
            // direction a -> -b: step the image back along b
            int c[3] = {ix, iy, iz};
            c[rot_b] = (c[rot_b] - 1 + ext[rot_b]) % ext[rot_b];
            links[slice_index(ny, nz, c[0], c[1], c[2]) * 3 + rot_b] = G::adj(in[s * 3 + i]);
          } else if (rot_a >= 0 && i == rot_b) {
            links[slice_index(ny, nz, ix, iy, iz) * 3 + rot_a] = in[s * 3 + i];
          } else {
            links[slice_index(ny, nz, ix, iy, iz) * 3 + i] = in[s * 3 + i];
          }
        }
      }
  return out;
}

}  // namespace

BoundaryData shift_boundary(const BoundaryData& bd, const std::array<int, 3>& v) {
  const int ext[3] = {bd.n_x, bd.n_y, bd.n_z};
  auto map3 = std::function<void(int&, int&, int&)>([&, v](int& x, int& y, int& z) {
    x = ((x + v[0]) % ext[0] + ext[0]) % ext[0];
    y = ((y + v[1]) % ext[1] + ext[1]) % ext[1];
    z = ((z + v[2]) % ext[2] + ext[2]) % ext[2];
  });
  if (bd.kind == GroupKind::U1) return permute_boundary<U1Group>(bd, map3, -1, -1);
  return permute_boundary<Su2Group>(bd, map3, -1, -1);
}

BoundaryData rotate90_boundary(const BoundaryData& bd, int axis_a, int axis_b) {
  if (axis_a == axis_b || axis_a < 0 || axis_a > 2 || axis_b < 0 || axis_b > 2)
    throw std::invalid_argument("rotate90: bad axes");
  const int ext[3] = {bd.n_x, bd.n_y, bd.n_z};
  if (ext[axis_a] != ext[axis_b])
    throw std::invalid_argument("rotate90: plane extents differ, not a lattice symmetry");
  const int n = ext[axis_a];
  auto map3 = std::function<void(int&, int&, int&)>([=](int& x, int& y, int& z) {
    int c[3] = {x, y, z};
    const int xa = c[axis_a], xb = c[axis_b];
    c[axis_a] = xb;
    c[axis_b] = (n - 1 - xa + n) % n;
    x = c[0];
    y = c[1];
    z = c[2];
  });
  if (bd.kind == GroupKind::U1) return permute_boundary<U1Group>(bd, map3, axis_a, axis_b);
  return permute_boundary<Su2Group>(bd, map3, axis_a, axis_b);
}

namespace {

// Wrap a slice as a one-slice field so the clover machinery can evaluate the
// spatial-plane action of the datum alone.
template <class G>
double slice_action_impl(const BoundaryData& bd) {
  LatticeGeometry g;
  g.n_t = 1;  // internal use only; bypasses validate()
  g.n_x = bd.n_x;
  g.n_y = bd.n_y;
  g.n_z = bd.n_z;
  g.spacing = bd.spacing;
  FieldT<G> f{g, std::vector<typename G::Link>(g.links(), G::id())};
  const auto& in = bd_links<G>(bd);
  Site n;
  n.t = 0;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        const long s3 = slice_index(g.n_y, g.n_z, n.x, n.y, n.z);
        for (int i = 1; i <= 3; ++i) f.link(n, i) = in[s3 * 3 + (i - 1)];
      }
  return action_impl(f);
}

}  // namespace

double slice_action(const BoundaryData& bd) {
  if (bd.kind == GroupKind::U1) return slice_action_impl<U1Group>(bd);
  return slice_action_impl<Su2Group>(bd);
}

}  // namespace hjym
