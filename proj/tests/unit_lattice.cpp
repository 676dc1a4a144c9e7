#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hjym/generators.hpp"
#include "hjym/lattice.hpp"
#include "hjym/minimize.hpp"
#include "support/oracles.hpp"

using namespace hjym;

namespace {

LatticeGeometry small_geom() {
  LatticeGeometry g;
  g.n_t = 5;
  g.n_x = 4;
  g.n_y = 4;
  g.n_z = 4;
  g.spacing = 1.0;
  return g;
}

GaugeField random_u1_field(const LatticeGeometry& g, double amp, std::uint64_t seed) {
  GaugeField f = GaugeField::flat(g, GroupKind::U1);
  auto& links = std::get<U1Field>(f.impl).links;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  for (auto& th : links) th = d(rng);
  return f;
}

GaugeField random_su2_field(const LatticeGeometry& g, double amp, std::uint64_t seed) {
  GaugeField f = GaugeField::flat(g, GroupKind::Su2);
  auto& links = std::get<Su2Field>(f.impl).links;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  for (auto& u : links) u = su2_exp({d(rng), d(rng), d(rng)});
  return f;
}

oracle::U1Lattice to_oracle(const GaugeField& f) {
  const auto& ff = std::get<U1Field>(f.impl);
  return oracle::U1Lattice{ff.geom.n_t, ff.geom.n_x, ff.geom.n_y, ff.geom.n_z, ff.links};
}

GaugeTransform full_random_transform(const LatticeGeometry& g, GroupKind kind,
                                     std::uint64_t seed) {
  GaugeTransform t = random_slice_transform(kind, g.n_x, g.n_y, g.n_z, seed);
  t.slice = true;
  return t;
}

}  // namespace

TEST_CASE("flat and pure-gauge fields have identity plaquettes and zero action") {
  const LatticeGeometry g = small_geom();
  for (GroupKind kind : {GroupKind::U1, GroupKind::Su2}) {
    GaugeField f = GaugeField::flat(g, kind);
    CHECK(euclidean_action(f) == doctest::Approx(0.0).epsilon(1e-15));
    const GroupElement p = plaquette(f, Site{1, 1, 1, 1}, 1, 2);
    CHECK(unitarity_defect(p) < 1e-12);
    CHECK(algebra_norm(log_map(p)) < 1e-15);

    // pure gauge: U_mu(n) = g(n)^-1 g(n+mu) is a gauge transform of flat
    const GaugeField pg = gauge_transform(f, full_random_transform(g, kind, 42));
    CHECK(euclidean_action(pg) < 1e-22);
    CHECK(algebra_norm(log_map(plaquette(pg, Site{2, 0, 3, 1}, 1, 3))) < 1e-12);
  }
}

TEST_CASE("u1 plaquette phase equals the direct phase sum") {
  const LatticeGeometry g = small_geom();
  GaugeField f = random_u1_field(g, 0.4, 7);
  const auto& ff = std::get<U1Field>(f.impl);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Site n{(int)(rng() % (g.n_t - 1)), (int)(rng() % g.n_x), (int)(rng() % g.n_y),
           (int)(rng() % g.n_z)};
    const int mu = 1 + (int)(rng() % 3);
    int nu = 1 + (int)(rng() % 3);
    if (nu == mu) nu = mu % 3 + 1;
    Site nmu = n, nnu = n;
    step_site(g, nmu, mu, +1);
    step_site(g, nnu, nu, +1);
    const double direct =
        ff.link(n, mu) + ff.link(nmu, nu) - ff.link(nnu, mu) - ff.link(n, nu);
    CHECK(plaquette(f, n, mu, nu).phase() == doctest::Approx(direct).epsilon(1e-14));
  }
  // time boundary is open
  CHECK_THROWS_AS(plaquette(f, Site{g.n_t - 1, 0, 0, 0}, 0, 1), BoundaryError);
}

TEST_CASE("field strength: antisymmetry and flat limit") {
  const LatticeGeometry g = small_geom();
  GaugeField f = random_su2_field(g, 0.2, 21);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    Site n{(int)(rng() % g.n_t), (int)(rng() % g.n_x), (int)(rng() % g.n_y),
           (int)(rng() % g.n_z)};
    int mu = (int)(rng() % 4);
    int nu = (int)(rng() % 4);
    if (mu == nu) continue;
    const AlgebraElement a = field_strength(f, n, mu, nu);
    const AlgebraElement b = field_strength(f, n, nu, mu);
    CHECK(norm(a.c + b.c) < 1e-12);
  }
}

TEST_CASE("u1 clover action matches the direct-sum oracle") {
  const LatticeGeometry g = small_geom();

  SUBCASE("single excited link") {
    GaugeField f = GaugeField::flat(g, GroupKind::U1);
    std::get<U1Field>(f.impl).link(Site{2, 1, 2, 3}, 2) = 0.3;
    const double lib = euclidean_action(f);
    const double ref = oracle::u1_plaquette_action(to_oracle(f));
    CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    CHECK(lib > 0.0);
  }
  SUBCASE("random small field") {
    GaugeField f = random_u1_field(g, 0.3, 12);
    const double lib = euclidean_action(f);
    const double ref = oracle::u1_plaquette_action(to_oracle(f));
    CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
  }
  SUBCASE("single-mode datum propagated in t") {
    BoundaryData bd = single_mode_boundary(4, 4, 4, 1.0, GroupKind::U1, {1, 0, 0}, 0.05, 1);
    GaugeField f = GaugeField::flat(g, GroupKind::U1);
    auto& links = std::get<U1Field>(f.impl).links;
    const auto& bl = std::get<std::vector<double>>(bd.links);
    Site n;
    for (n.t = 0; n.t < g.n_t; ++n.t)
      for (n.x = 0; n.x < g.n_x; ++n.x)
        for (n.y = 0; n.y < g.n_y; ++n.y)
          for (n.z = 0; n.z < g.n_z; ++n.z) {
            Site s3 = n;
            s3.t = 0;
            for (int i = 1; i <= 3; ++i)
              links[site_index(g, n) * 4 + i] =
                  std::exp(-0.7 * n.t) * bl[site_index(g, s3) * 3 + (i - 1)];
          }
    const double lib = euclidean_action(f);
    const double ref = oracle::u1_plaquette_action(to_oracle(f));
    CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("action is gauge invariant") {
  const LatticeGeometry g = small_geom();
  GaugeField u1 = random_u1_field(g, 0.3, 31);
  GaugeField su2 = random_su2_field(g, 0.25, 32);
  const double s_u1 = euclidean_action(u1);
  const double s_su2 = euclidean_action(su2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double t_u1 =
        euclidean_action(gauge_transform(u1, full_random_transform(g, GroupKind::U1, seed)));
    CHECK(std::abs(t_u1 - s_u1) / s_u1 < 1e-12);
    if (seed < 25) {
      const double t_su2 =
          euclidean_action(gauge_transform(su2, full_random_transform(g, GroupKind::Su2, seed)));
      CHECK(std::abs(t_su2 - s_su2) / s_su2 < 1e-12);
    }
  }
}

TEST_CASE("action is invariant under exact lattice symmetries") {
  const LatticeGeometry g = small_geom();
  for (GroupKind kind : {GroupKind::U1, GroupKind::Su2}) {
    GaugeField f = kind == GroupKind::U1 ? random_u1_field(g, 0.3, 55) : random_su2_field(g, 0.2, 56);
    const double s = euclidean_action(f);
    CHECK(std::abs(euclidean_action(shift_field(f, {1, 0, 0})) - s) / s < 1e-12);
    CHECK(std::abs(euclidean_action(shift_field(f, {0, 2, 3})) - s) / s < 1e-12);
    CHECK(std::abs(euclidean_action(rotate90_field(f, 0, 1)) - s) / s < 1e-12);
    CHECK(std::abs(euclidean_action(rotate90_field(f, 1, 2)) - s) / s < 1e-12);
    CHECK(std::abs(euclidean_action(rotate90_field(f, 0, 2)) - s) / s < 1e-12);
  }
}

TEST_CASE("boundary data symmetries commute with slice action") {
  BoundaryData bd = localized_bump_boundary(6, 6, 6, 1.0, GroupKind::Su2, {2.0, 3.0, 2.5}, 1.2, 0.3);
  const double s = slice_action(bd);
  CHECK(s > 0.0);
  CHECK(std::abs(slice_action(shift_boundary(bd, {2, 1, 0})) - s) / s < 1e-12);
  CHECK(std::abs(slice_action(rotate90_boundary(bd, 0, 1)) - s) / s < 1e-12);
  CHECK(std::abs(slice_action(rotate90_boundary(bd, 1, 2)) - s) / s < 1e-12);
  CHECK_THROWS_AS(rotate90_boundary(BoundaryData::flat(4, 6, 4, 1.0, GroupKind::U1), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("quadratic amplitude scaling of the abelian action") {
  const LatticeGeometry g = small_geom();
  BoundaryData bd = single_mode_boundary(4, 4, 4, 1.0, GroupKind::U1, {1, 0, 0}, 1.0, 1);
  std::vector<double> eps, s;
  for (double e : {1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1}) {
    GaugeField f = GaugeField::flat(g, GroupKind::U1);
    auto& links = std::get<U1Field>(f.impl).links;
    const auto& bl = std::get<std::vector<double>>(bd.links);
    Site n;
    for (n.t = 0; n.t < g.n_t; ++n.t)
      for (n.x = 0; n.x < g.n_x; ++n.x)
        for (n.y = 0; n.y < g.n_y; ++n.y)
          for (n.z = 0; n.z < g.n_z; ++n.z) {
            Site s3 = n;
            s3.t = 0;
            for (int i = 1; i <= 3; ++i)
              links[site_index(g, n) * 4 + i] = e * bl[site_index(g, s3) * 3 + (i - 1)];
          }
    eps.push_back(e);
    s.push_back(euclidean_action(f));
  }
  // log-log slope across the ladder
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < eps.size(); ++i) {
    const double lx = std::log(eps[i]), ly = std::log(s[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double npts = (double)eps.size();
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("electric and magnetic fields") {
  LatticeGeometry g = small_geom();
  SUBCASE("static field has zero E") {
    BoundaryData bd = single_mode_boundary(4, 4, 4, 1.0, GroupKind::U1, {1, 0, 0}, 0.1, 1);
    GaugeField f = GaugeField::flat(g, GroupKind::U1);
    auto& links = std::get<U1Field>(f.impl).links;
    const auto& bl = std::get<std::vector<double>>(bd.links);
    Site n;
    for (n.t = 0; n.t < g.n_t; ++n.t)
      for (n.x = 0; n.x < g.n_x; ++n.x)
        for (n.y = 0; n.y < g.n_y; ++n.y)
          for (n.z = 0; n.z < g.n_z; ++n.z) {
            Site s3 = n;
            s3.t = 0;
            for (int i = 1; i <= 3; ++i)
              links[site_index(g, n) * 4 + i] = bl[site_index(g, s3) * 3 + (i - 1)];
          }
    const SliceField e = electric_field(f);
    CHECK(slice_inf_norm(e) < 1e-15);
  }
  SUBCASE("per-mode decay gives E ~ -|k| theta0 and abelian linearity") {
    const double k = 2.0 * std::numbers::pi / 4.0;
    const double rho = std::exp(-k);
    auto build = [&](double amp, std::array<int, 3> m, int pol) {
      BoundaryData bd = single_mode_boundary(4, 4, 4, 1.0, GroupKind::U1, m, amp, pol);
      GaugeField f = GaugeField::flat(g, GroupKind::U1);
      auto& links = std::get<U1Field>(f.impl).links;
      const auto& bl = std::get<std::vector<double>>(bd.links);
      Site n;
      for (n.t = 0; n.t < g.n_t; ++n.t)
        for (n.x = 0; n.x < g.n_x; ++n.x)
          for (n.y = 0; n.y < g.n_y; ++n.y)
            for (n.z = 0; n.z < g.n_z; ++n.z) {
              Site s3 = n;
              s3.t = 0;
              for (int i = 1; i <= 3; ++i)
                links[site_index(g, n) * 4 + i] =
                    std::pow(rho, n.t) * bl[site_index(g, s3) * 3 + (i - 1)];
            }
      return f;
    };
    GaugeField fa = build(0.05, {1, 0, 0}, 1);
    const SliceField ea = electric_field(fa);
    // E = (rho - 1) theta0 ~ -|k| theta0 within O(a)
    double emax = 0.0;
    for (const auto& x : ea.data) emax = std::max(emax, std::abs(x.c[0]));
    CHECK(emax == doctest::Approx(0.05 * (1.0 - rho)).epsilon(1e-10));
    CHECK(emax == doctest::Approx(0.05 * k).epsilon(0.45));  // one-sided O(a) bias

    GaugeField fb = build(0.03, {0, 1, 0}, 2);
    const SliceField eb = electric_field(fb);
    GaugeField fab = build(0.0, {1, 0, 0}, 1);
    {
      auto& la = std::get<U1Field>(fa.impl).links;
      auto& lb = std::get<U1Field>(fb.impl).links;
      auto& lab = std::get<U1Field>(fab.impl).links;
      for (size_t i = 0; i < lab.size(); ++i) lab[i] = la[i] + lb[i];
    }
    const SliceField eab = electric_field(fab);
    for (size_t i = 0; i < eab.data.size(); ++i)
      CHECK(std::abs(eab.data[i].c[0] - ea.data[i].c[0] - eb.data[i].c[0]) < 1e-8);
  }
  SUBCASE("magnetic field equals the discrete curl for u1 plane waves") {
    GaugeField f = GaugeField::flat(g, GroupKind::U1);
    auto& ff = std::get<U1Field>(f.impl);
    const double k = 2.0 * std::numbers::pi / 4.0;
    Site n;
    for (n.t = 0; n.t < g.n_t; ++n.t)
      for (n.x = 0; n.x < g.n_x; ++n.x)
        for (n.y = 0; n.y < g.n_y; ++n.y)
          for (n.z = 0; n.z < g.n_z; ++n.z) ff.link(n, 2) = 0.04 * std::cos(k * n.x);
    const SliceField b = magnetic_field(f, 2);
    // B_z = dA_y/dx for the clover estimate: amplitude 0.04 * k_hat * cos(k/2)
    const double expected = 0.04 * 2.0 * std::sin(k / 2.0) * std::cos(k / 2.0);
    double bmax = 0.0;
    for (long s3 = 0; s3 < b.slice_sites(); ++s3) {
      bmax = std::max(bmax, std::abs(b.at(s3, 2).c[0]));
      CHECK(std::abs(b.at(s3, 0).c[0]) < 1e-14);
      CHECK(std::abs(b.at(s3, 1).c[0]) < 1e-14);
    }
    CHECK(bmax == doctest::Approx(expected).epsilon(1e-10));
    // and the continuum value within O(a^2 k^2)
    CHECK(bmax == doctest::Approx(0.04 * k).epsilon(0.35));
  }
}
