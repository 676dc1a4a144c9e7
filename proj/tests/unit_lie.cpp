#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hjym/lie.hpp"
#include "support/oracles.hpp"

using namespace hjym;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return Vec3{d(rng), d(rng), d(rng)};
}

Quat random_group(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return qnormalize(Quat{d(rng), d(rng), d(rng), d(rng)});
}

}  // namespace

TEST_CASE("quaternion product matches the 2x2 matrix product") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Quat a = random_group(rng), b = random_group(rng);
    const auto m = oracle::mul(
        oracle::M2{quat_to_matrix(a)[0], quat_to_matrix(a)[1], quat_to_matrix(a)[2],
                   quat_to_matrix(a)[3]},
        oracle::M2{quat_to_matrix(b)[0], quat_to_matrix(b)[1], quat_to_matrix(b)[2],
                   quat_to_matrix(b)[3]});
    const Mat2 q = quat_to_matrix(qmul(a, b));
    CHECK(oracle::frobenius_distance(m, oracle::M2{q[0], q[1], q[2], q[3]}) < 1e-14);
  }
}

TEST_CASE("exp map: identity, pi rotation, inverse") {
  const GroupElement id = exp_map(AlgebraElement::su2({0, 0, 0}));
  CHECK(id.v[0] == doctest::Approx(1.0).epsilon(1e-15));

  // X = pi T_1 -> quaternion (cos(pi/2), -sin(pi/2), 0, 0)
  const Quat q = su2_exp({std::numbers::pi, 0, 0});
  CHECK(std::abs(q.w - std::cos(std::numbers::pi / 2)) < 1e-14);
  CHECK(std::abs(q.x - (-std::sin(std::numbers::pi / 2))) < 1e-14);
  CHECK(std::abs(q.y) < 1e-14);
  CHECK(std::abs(q.z) < 1e-14);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 c = random_vec(rng, 1.5);
    const Quat u = qmul(su2_exp(c), su2_exp({-c[0], -c[1], -c[2]}));
    CHECK(std::abs(u.w - 1.0) < 1e-14);
    CHECK(std::abs(u.x) + std::abs(u.y) + std::abs(u.z) < 1e-14);
  }
}

TEST_CASE("exp map agrees with the power series") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vec3 c = random_vec(rng, 2.0);
    const Mat2 m = quat_to_matrix(su2_exp(c));
    const auto ref = oracle::expm(oracle::algebra_matrix(c));
    CHECK(oracle::frobenius_distance(ref, oracle::M2{m[0], m[1], m[2], m[3]}) < 1e-13);
  }
}

TEST_CASE("log/exp round trip within the injectivity ball") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Vec3 c = random_vec(rng, 2.0 / std::sqrt(3.0));
    const Vec3 back = su2_log(su2_exp(c));
    CHECK(norm(back - c) < 1e-12);
  }
  // u1 round trips
  const AlgebraElement a = log_map(GroupElement::u1(0.7));
  CHECK(a.c[0] == doctest::Approx(0.7).epsilon(1e-15));
  const AlgebraElement b = log_map(exp_map(AlgebraElement::u1(-2.9)));
  CHECK(b.c[0] == doctest::Approx(-2.9).epsilon(1e-12));
}

TEST_CASE("log rejects the branch cut") {
  CHECK_THROWS_AS(su2_log(Quat{-1.0, 0.0, 0.0, 0.0}), BranchCutError);
  CHECK_THROWS_AS(u1_log(std::numbers::pi), BranchCutError);
  // just outside the guard band is fine
  const Vec3 c = su2_log(su2_exp({2.0 * std::acos(-1.0 + 1e-6), 0, 0}));
  CHECK(std::isfinite(c[0]));
}

TEST_CASE("trace form: orthonormal basis and positivity") {
  // -2 tr(T_a T_b) = delta_ab, checked through explicit matrix arithmetic
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto prod = oracle::mul(oracle::basis_T(a), oracle::basis_T(b));
      const double form = (-2.0 * oracle::trace(prod)).real();
      CHECK(form == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-15));
    }
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Vec3 c = random_vec(rng, 3.0);
    const AlgebraElement x = AlgebraElement::su2(c);
    CHECK(inner(x, x) == doctest::Approx(dot(c, c)).epsilon(1e-14));
    CHECK(inner(x, x) >= 0.0);
  }
  CHECK_THROWS_AS(inner(AlgebraElement::u1(1.0), AlgebraElement::su2({1, 0, 0})),
                  std::invalid_argument);
}

TEST_CASE("conjugation preserves the trace form") {
  std::mt19937_64 rng(17);
  const GroupElement id = GroupElement::identity(GroupKind::Su2);
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement x = AlgebraElement::su2(random_vec(rng, 2.0));
    const AlgebraElement y = AlgebraElement::su2(random_vec(rng, 2.0));
    CHECK(norm(conjugate(id, x).c - x.c) < 1e-15);
    const GroupElement g = GroupElement::su2(random_group(rng));
    const double before = inner(x, y);
    const double after = inner(conjugate(g, x), conjugate(g, y));
    CHECK(std::abs(before - after) < 1e-12);
  }
  // abelian: conjugation is trivial
  const AlgebraElement u = AlgebraElement::u1(0.4);
  CHECK(conjugate(GroupElement::u1(1.1), u).c[0] == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("algebra projection") {
  // idempotent on basis matrices
  for (int a = 0; a < 3; ++a) {
    const auto t = oracle::basis_T(a);
    const AlgebraElement p = project_algebra(GroupKind::Su2, Mat2{t[0], t[1], t[2], t[3]});
    for (int b = 0; b < 3; ++b)
      CHECK(p.c[b] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
  }
  // trace removal and hermitian kill
  const AlgebraElement pid = project_algebra(GroupKind::Su2, Mat2{1.0, 0.0, 0.0, 1.0});
  CHECK(norm(pid.c) < 1e-15);
  const Mat2 herm{std::complex<double>(2.0, 0.0), std::complex<double>(0.5, -0.25),
                  std::complex<double>(0.5, 0.25), std::complex<double>(-1.0, 0.0)};
  const AlgebraElement ph = project_algebra(GroupKind::Su2, herm);
  CHECK(norm(ph.c) < 1e-15);
  // u1: projection reads the imaginary part
  const AlgebraElement pu = project_algebra(
      GroupKind::U1, Mat2{std::complex<double>(0.2, 0.3), 0.0, 0.0, 0.0});
  CHECK(pu.c[0] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("unitarity drift stays below 1e-10 through 1e6 products") {
  std::mt19937_64 rng(29);
  Quat u{1, 0, 0, 0};
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    u = qmul(u, random_group(rng));
    if (i % 100 == 99) {
      worst = std::max(worst, std::abs(u.norm2() - 1.0));
      u = qnormalize(u);
    }
  }
  worst = std::max(worst, std::abs(u.norm2() - 1.0));
  CHECK(worst < 1e-10);
}

TEST_CASE("erased ops reject kind mismatches") {
  CHECK_THROWS_AS(group_mul(GroupElement::u1(0.1), GroupElement::identity(GroupKind::Su2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(conjugate(GroupElement::u1(0.1), AlgebraElement::su2({1, 0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(exp_map(AlgebraElement::su2({std::nan(""), 0, 0})), std::invalid_argument);
}
