#include "hjym/lie.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hjym {

namespace {

// sin(t)/t with a series branch for small t.
double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// asin(u)/u for u in [0,1), series branch for small u.
double asinc(double u) {
  if (u < 1e-4) {
    const double u2 = u * u;
    return 1.0 + u2 / 6.0 + 3.0 * u2 * u2 / 40.0;
  }
  return std::asin(u) / u;
}

void check_finite(const Vec3& c) {
  if (!std::isfinite(c[0]) || !std::isfinite(c[1]) || !std::isfinite(c[2]))
    throw std::invalid_argument("non-finite algebra element");
}

}  // namespace

Quat su2_exp(const Vec3& c) {
  check_finite(c);
  const double t = 0.5 * norm(c);
  const double s = -0.5 * sinc(t);
  return Quat{std::cos(t), s * c[0], s * c[1], s * c[2]};
}

Vec3 su2_log(const Quat& u) {
  // Principal branch: half-angle phi = atan2(|v|, w) in [0, pi), coefficient
  // vector c = -2 phi v/|v|.  Near w/|q| = -1 the direction is undefined.
  const double n = u.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("non-finite group element");
  const double wn = u.w / n;
  if (wn <= -1.0 + kBranchGuard)
    throw BranchCutError("su2 log at the principal branch cut (trace near -2)");
  const double vn = std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z);
  if (vn == 0.0) return {0.0, 0.0, 0.0};
  const double u_ratio = vn / n;
  double factor;
  if (wn >= 0.0) {
    factor = -2.0 * asinc(std::min(u_ratio, 1.0)) / n;
  } else {
    const double phi = std::atan2(vn, u.w);  // in (pi/2, pi)
    factor = -2.0 * phi / vn;
  }
  return {factor * u.x, factor * u.y, factor * u.z};
}

Vec3 su2_conjugate(const Quat& g, const Vec3& c) {
  // X = c_a T_a corresponds to the pure quaternion (0, -c/2); conjugation is
  // g^{-1} X g in the quaternion algebra.
  const Quat x{0.0, -0.5 * c[0], -0.5 * c[1], -0.5 * c[2]};
  const Quat r = qmul(qmul(qconj(g), x), g);
  return {-2.0 * r.x, -2.0 * r.y, -2.0 * r.z};
}

Vec3 su2_project_algebra(const Mat2& m) {
  const std::complex<double> I(0.0, 1.0);
  // A = (M - M^dag)/2, then remove the trace part.
  Mat2 a;
  a[0] = 0.5 * (m[0] - std::conj(m[0]));
  a[1] = 0.5 * (m[1] - std::conj(m[2]));
  a[2] = 0.5 * (m[2] - std::conj(m[1]));
  a[3] = 0.5 * (m[3] - std::conj(m[3]));
  const std::complex<double> half_tr = 0.5 * (a[0] + a[3]);
  a[0] -= half_tr;
  a[3] -= half_tr;
  // c_a = Re(i tr(A s_a)).
  const std::complex<double> tr1 = a[1] + a[2];
  const std::complex<double> tr2 = I * (a[1] - a[2]);
  const std::complex<double> tr3 = a[0] - a[3];
  return {(I * tr1).real(), (I * tr2).real(), (I * tr3).real()};
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("non-finite phase");
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::remainder(theta, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;  // remainder returns (-pi, pi]; be safe
  return t;
}

double u1_log(double theta) {
  const double t = wrap_angle(theta);
  // Same guard band as SU(2): Re(z) <= -1 + guard.
  if (std::cos(t) <= -1.0 + kBranchGuard)
    throw BranchCutError("u1 log at the principal branch cut (phase near pi)");
  return t;
}

double U1Group::log_accum(const Accum& s) {
  const double n = std::abs(s);
  if (!(n > 0.0)) throw std::invalid_argument("empty clover accumulator");
  if (s.real() / n <= -1.0 + kBranchGuard)
    throw BranchCutError("u1 clover log at the principal branch cut");
  return std::atan2(s.imag(), s.real());
}

Vec3 Su2Group::log_accum(const Accum& s) {
  return su2_log(s);  // su2_log is scale invariant in the quaternion norm
}

GroupElement exp_map(const AlgebraElement& x) {
  if (x.kind == GroupKind::U1) {
    if (!std::isfinite(x.c[0])) throw std::invalid_argument("non-finite algebra element");
    return GroupElement::u1(x.c[0]);
  }
  return GroupElement::su2(su2_exp(x.c));
}

AlgebraElement log_map(const GroupElement& u) {
  if (u.kind == GroupKind::U1) return AlgebraElement::u1(u1_log(u.phase()));
  return AlgebraElement::su2(su2_log(u.quat()));
}

double inner(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.kind != y.kind) throw std::invalid_argument("inner: group kind mismatch");
  if (x.kind == GroupKind::U1) return x.c[0] * y.c[0];
  return dot(x.c, y.c);
}

AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& x) {
  if (g.kind != x.kind) throw std::invalid_argument("conjugate: group kind mismatch");
  if (x.kind == GroupKind::U1) return x;
  return AlgebraElement::su2(su2_conjugate(g.quat(), x.c));
}

AlgebraElement project_algebra(GroupKind kind, const Mat2& m) {
  if (kind == GroupKind::U1) return AlgebraElement::u1(m[0].imag());
  return AlgebraElement::su2(su2_project_algebra(m));
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  if (a.kind != b.kind) throw std::invalid_argument("group_mul: group kind mismatch");
  if (a.kind == GroupKind::U1) return GroupElement::u1(a.phase() + b.phase());
  return GroupElement::su2(qmul(a.quat(), b.quat()));
}

GroupElement group_adjoint(const GroupElement& a) {
  if (a.kind == GroupKind::U1) return GroupElement::u1(-a.phase());
  return GroupElement::su2(qconj(a.quat()));
}

GroupElement renormalize(const GroupElement& a) {
  if (a.kind == GroupKind::U1) return GroupElement::u1(wrap_angle(a.phase()));
  return GroupElement::su2(qnormalize(a.quat()));
}

double unitarity_defect(const GroupElement& a) {
  if (a.kind == GroupKind::U1) return 0.0;  // phases are unit modulus by construction
  return std::abs(a.quat().norm2() - 1.0);
}

Mat2 to_matrix(const GroupElement& a) {
  if (a.kind == GroupKind::U1) {
    const std::complex<double> z = std::polar(1.0, a.phase());
    return Mat2{z, 0.0, 0.0, 0.0};
  }
  return quat_to_matrix(a.quat());
}

double algebra_norm(const AlgebraElement& x) {
  if (x.kind == GroupKind::U1) return std::abs(x.c[0]);
  return norm(x.c);
}

}  // namespace hjym
