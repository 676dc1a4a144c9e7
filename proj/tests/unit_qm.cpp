#include <cmath>
#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "hjym/qm.hpp"

using namespace hjym;

namespace {

PrincipalFunction1D closed_form(const PotentialGrid& g, double lambda) {
  PrincipalFunction1D s;
  s.x_min = g.x_min;
  s.h = g.h;
  s.i_star = g.i_star;
  s.S.resize(g.n());
  const double x0 = g.x(g.i_star);
  for (int i = 0; i < g.n(); ++i) s.S[i] = anharmonic_S(g.x(i) - x0, lambda);
  return s;
}

}  // namespace

TEST_CASE("anharmonic closed form") {
  // frozen value: lambda = 2, x = 1 -> (1/3)(2^{3/2} - 1)
  const double expected = (std::pow(2.0, 1.5) - 1.0) / 3.0;
  CHECK(anharmonic_S(1.0, 2.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.609476).epsilon(1e-6));
  CHECK(anharmonic_S(0.0, 0.7) == 0.0);
  // harmonic limit
  CHECK(anharmonic_S(1.0, 1e-9) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(anharmonic_S(1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-10));
  // evenness
  for (double x : {0.3, 1.7, 4.2}) CHECK(anharmonic_S(x, 1.3) == anharmonic_S(-x, 1.3));
  CHECK_THROWS_AS(anharmonic_S(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(anharmonic_S(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("solve_hje_1d matches closed forms") {
  SUBCASE("harmonic potential") {
    PotentialGrid g = make_anharmonic_grid(1e-7, -5.0, 5.0, 1e-3);
    // lambda ~ 0: V = x^2/2 up to 2.5e-6 relative; compare against x^2/2
    const PrincipalFunction1D s = solve_hje_1d(g);
    double worst = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      const double x = g.x(i);
      worst = std::max(worst, std::abs(s.S[i] - 0.5 * x * x));
    }
    CHECK(worst < 1e-5);  // dominated by the lambda floor, not the quadrature
  }
  SUBCASE("anharmonic potentials, 1e-8 gate") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      PotentialGrid g = make_anharmonic_grid(lambda, -5.0, 5.0, 1e-3);
      const PrincipalFunction1D s = solve_hje_1d(g);
      double worst = 0.0;
      for (int i = 0; i < g.n(); ++i)
        worst = std::max(worst, std::abs(s.S[i] - anharmonic_S(g.x(i), lambda)));
      CHECK(worst < 1e-8);
    }
  }
  SUBCASE("zero potential") {
    PotentialGrid g;
    g.x_min = -1.0;
    g.h = 1e-2;
    g.V.assign(201, 0.0);
    g.i_star = 100;
    const PrincipalFunction1D s = solve_hje_1d(g);
    for (double v : s.S) CHECK(v == 0.0);
  }
  SUBCASE("invalid potentials are rejected") {
    PotentialGrid g = make_anharmonic_grid(1.0, -5.0, 5.0, 1e-2);
    g.V[17] = -1e-3;
    CHECK_THROWS_AS(solve_hje_1d(g), std::invalid_argument);
    PotentialGrid g2 = make_anharmonic_grid(1.0, -5.0, 5.0, 1e-2);
    for (auto& v : g2.V) v += 0.5;  // no zero minimum
    CHECK_THROWS_AS(solve_hje_1d(g2), std::invalid_argument);
  }
}

TEST_CASE("hje residual is O(h^2)") {
  const double lambda = 1.0;
  double res[3];
  const double hs[3] = {4e-3, 2e-3, 1e-3};
  for (int i = 0; i < 3; ++i) {
    PotentialGrid g = make_anharmonic_grid(lambda, -5.0, 5.0, hs[i]);
    res[i] = hje_max_residual(g, solve_hje_1d(g));
  }
  // halving h quarters the residual within 15%
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("ground state: normalization, gaussian limit, evenness") {
  PotentialGrid g = make_anharmonic_grid(1e-8, -5.0, 5.0, 1e-3);
  const PrincipalFunction1D s = solve_hje_1d(g);
  const std::vector<double> psi = ground_state(s);
  // trapezoidal L2 norm is 1
  double norm2 = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double w = (i == 0 || i + 1 == g.n()) ? 0.5 : 1.0;
    norm2 += w * psi[i] * psi[i] * g.h;
  }
  CHECK(std::abs(norm2 - 1.0) < 1e-12);
  // gaussian limit: psi = exp(-x^2/2)/pi^{1/4}
  const double n4 = std::pow(std::numbers::pi, -0.25);
  double worst = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    worst = std::max(worst, std::abs(psi[i] - n4 * std::exp(-0.5 * x * x)));
  }
  CHECK(worst < 1e-6);
  for (double v : psi) CHECK(v > 0.0);

  PotentialGrid ga = make_anharmonic_grid(1.0, -5.0, 5.0, 1e-3);
  const std::vector<double> pa = ground_state(solve_hje_1d(ga));
  for (int i = 0; i < ga.n(); ++i) CHECK(pa[i] == doctest::Approx(pa[ga.n() - 1 - i]).epsilon(1e-12));
  // single peak at the origin
  CHECK(*std::max_element(pa.begin(), pa.end()) == pa[ga.i_star]);
}

TEST_CASE("nonlinear normal ordering annihilates exp(-S)") {
  SUBCASE("harmonic at h = 1e-3") {
    PotentialGrid g = make_anharmonic_grid(1e-9, -5.0, 5.0, 1e-3);
    const PrincipalFunction1D s = solve_hje_1d(g);
    CHECK(nno_residual(g, s, ground_state(s)) < 1e-5);
  }
  SUBCASE("anharmonic with the closed-form S") {
    for (double lambda : {0.5, 1.0, 2.0}) {
      PotentialGrid g = make_anharmonic_grid(lambda, -5.0, 5.0, 1e-3);
      const PrincipalFunction1D s = closed_form(g, lambda);
      CHECK(nno_residual(g, s, ground_state(s)) < 1e-6 * 10);
    }
  }
  SUBCASE("wrong-sign wavefunction is not annihilated") {
    PotentialGrid g = make_anharmonic_grid(1.0, -5.0, 5.0, 1e-3);
    const PrincipalFunction1D s = closed_form(g, 1.0);
    const std::vector<double> good = ground_state(s);
    // exp(+S) instead of exp(-S), normalized on the same grid
    PrincipalFunction1D flipped = s;
    for (auto& v : flipped.S) v = -v;
    const std::vector<double> bad = ground_state(flipped);
    const double r_good = nno_residual(g, s, good);
    const double r_bad = nno_residual(g, s, bad);
    CHECK(r_bad > 0.1);
    CHECK(r_bad > 1e3 * r_good);
  }
  SUBCASE("empirical convergence order is 2") {
    const double hs[3] = {4e-3, 2e-3, 1e-3};
    for (double lambda : {0.5, 1.0, 2.0}) {
      double r[3];
      for (int i = 0; i < 3; ++i) {
        PotentialGrid g = make_anharmonic_grid(lambda, -5.0, 5.0, hs[i]);
        const PrincipalFunction1D s = closed_form(g, lambda);
        r[i] = nno_residual(g, s, ground_state(s));
      }
      const double slope = std::log(r[0] / r[2]) / std::log(hs[0] / hs[2]);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
    }
  }
}

TEST_CASE("conventional ordering sees strictly positive energy") {
  PotentialGrid g = make_anharmonic_grid(1.0, -5.0, 5.0, 1e-3);
  const PrincipalFunction1D s = closed_form(g, 1.0);
  const double e = conventional_ordering_energy(g, ground_state(s));
  CHECK(e > 0.05);  // the zero-energy property is specific to the new ordering
}
