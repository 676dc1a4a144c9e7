#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "hjym/errors.hpp"

namespace hjym {

enum class GroupKind : std::uint8_t { U1 = 0, Su2 = 1 };

inline const char* group_name(GroupKind k) { return k == GroupKind::U1 ? "u1" : "su2"; }

using Vec3 = std::array<double, 3>;
using Mat2 = std::array<std::complex<double>, 4>;  // row-major 2x2

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// SU(2) as a quaternion q = (w, v), identified with the matrix
//   U(q) = w*I + i*(v1*s1 + v2*s2 + v3*s3),   det U = |q|^2,
// where s_a are the Pauli matrices.  The algebra basis is T_a = -i*s_a/2,
// so X = c_a T_a exponentiates to the unit quaternion
//   exp(X) = (cos(|c|/2), -sin(|c|/2) * c/|c|).
// Products of group elements stay inside the quaternion algebra, which is
// what makes clover sums and their gradients cheap.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
};

// Matches the 2x2 matrix product of U(a)*U(b): Hamilton product with the
// cross term flipped.
inline Quat qmul(const Quat& a, const Quat& b) {
  return Quat{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
              a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
              a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
              a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x)};
}

inline Quat qconj(const Quat& a) { return Quat{a.w, -a.x, -a.y, -a.z}; }

inline Quat qscale(double s, const Quat& a) { return Quat{s * a.w, s * a.x, s * a.y, s * a.z}; }

inline Quat qadd(const Quat& a, const Quat& b) {
  return Quat{a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}

inline Quat qnormalize(const Quat& a) {
  const double n = a.norm();
  return Quat{a.w / n, a.x / n, a.y / n, a.z / n};
}

inline double qdot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Mat2 quat_to_matrix(const Quat& q) {
  const std::complex<double> I(0.0, 1.0);
  return Mat2{q.w + I * q.z, I * q.x + q.y, I * q.x - q.y, q.w - I * q.z};
}

// Guard band for the principal log: reject tr(U)/2 <= -1 + kBranchGuard.
inline constexpr double kBranchGuard = 1e-9;

// exp of the su(2) element with basis coefficients c.
Quat su2_exp(const Vec3& c);

// Principal log; throws BranchCutError near trace = -2.
Vec3 su2_log(const Quat& u);

// g^{-1} X g expressed in basis coefficients (adjoint action).
Vec3 su2_conjugate(const Quat& g, const Vec3& c);

// Anti-hermitian traceless projection of a 2x2 complex matrix, in basis
// coefficients.  Idempotent on algebra elements.
Vec3 su2_project_algebra(const Mat2& m);

// U(1) links are stored as the phase of a unit-modulus complex number.
double u1_log(double theta);          // wraps to (-pi, pi], guards the cut
double wrap_angle(double theta);      // plain wrap to (-pi, pi]

// -------------------------------------------------------------------------
// Group traits used by the lattice templates.

struct U1Group {
  static constexpr GroupKind kind = GroupKind::U1;
  using Link = double;                  // phase theta of e^{i theta}
  using Alg = double;                   // coefficient c of X = i c
  using Accum = std::complex<double>;   // sum of leaf holonomies

  static Link id() { return 0.0; }
  static Link mul(Link a, Link b) { return a + b; }
  static Link adj(Link a) { return -a; }
  static Link expmap(Alg c) { return c; }
  static Alg logmap(Link a) { return u1_log(a); }
  static Link renorm(Link a) { return wrap_angle(a); }
  static double inner(Alg a, Alg b) { return a * b; }
  static Alg zero() { return 0.0; }
  static Alg add(Alg a, Alg b) { return a + b; }
  static Alg scale(double s, Alg a) { return s * a; }
  static double norm2(Alg a) { return a * a; }
  static Alg conj_by(Link, Alg a) { return a; }  // abelian

  static Accum accum_zero() { return {0.0, 0.0}; }
  static void accum_add(Accum& s, Link a) { s += std::complex<double>(std::cos(a), std::sin(a)); }
  static Alg log_accum(const Accum& s);
};

struct Su2Group {
  static constexpr GroupKind kind = GroupKind::Su2;
  using Link = Quat;
  using Alg = Vec3;
  using Accum = Quat;  // unnormalized quaternion sum

  static Link id() { return Quat{}; }
  static Link mul(const Link& a, const Link& b) { return qmul(a, b); }
  static Link adj(const Link& a) { return qconj(a); }
  static Link expmap(const Alg& c) { return su2_exp(c); }
  static Alg logmap(const Link& u) { return su2_log(u); }
  static Link renorm(const Link& a) { return qnormalize(a); }
  static double inner(const Alg& a, const Alg& b) { return dot(a, b); }
  static Alg zero() { return {0.0, 0.0, 0.0}; }
  static Alg add(const Alg& a, const Alg& b) { return a + b; }
  static Alg scale(double s, const Alg& a) { return s * a; }
  static double norm2(const Alg& a) { return dot(a, a); }
  static Alg conj_by(const Link& g, const Alg& a) { return su2_conjugate(g, a); }

  static Accum accum_zero() { return Quat{0, 0, 0, 0}; }
  static void accum_add(Accum& s, const Link& a) { s = qadd(s, a); }
  static Alg log_accum(const Accum& s);
};

// -------------------------------------------------------------------------
// Kind-erased carriers used at the API boundary (files, CLI, python).

struct AlgebraElement {
  GroupKind kind = GroupKind::Su2;
  Vec3 c{0.0, 0.0, 0.0};  // U1 uses c[0] only

  static AlgebraElement u1(double v) { return {GroupKind::U1, {v, 0.0, 0.0}}; }
  static AlgebraElement su2(const Vec3& v) { return {GroupKind::Su2, v}; }
};

struct GroupElement {
  GroupKind kind = GroupKind::Su2;
  // SU2: quaternion (w,x,y,z).  U1: v[0] holds the phase.
  std::array<double, 4> v{1.0, 0.0, 0.0, 0.0};

  static GroupElement identity(GroupKind k) {
    GroupElement g;
    g.kind = k;
    g.v = k == GroupKind::U1 ? std::array<double, 4>{0, 0, 0, 0}
                             : std::array<double, 4>{1, 0, 0, 0};
    return g;
  }
  static GroupElement u1(double theta) { return {GroupKind::U1, {theta, 0, 0, 0}}; }
  static GroupElement su2(const Quat& q) { return {GroupKind::Su2, {q.w, q.x, q.y, q.z}}; }
  Quat quat() const { return Quat{v[0], v[1], v[2], v[3]}; }
  double phase() const { return v[0]; }
};

GroupElement exp_map(const AlgebraElement& x);
AlgebraElement log_map(const GroupElement& u);
double inner(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& x);
AlgebraElement project_algebra(GroupKind kind, const Mat2& m);  // U1 reads m[0]
GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_adjoint(const GroupElement& a);
GroupElement renormalize(const GroupElement& a);
double unitarity_defect(const GroupElement& a);  // ||U^dag U - I||
Mat2 to_matrix(const GroupElement& a);
double algebra_norm(const AlgebraElement& x);

}  // namespace hjym
