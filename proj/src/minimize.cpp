#include "hjym/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hjym/detail/clover.hpp"
#include "hjym/detail/ksum.hpp"

namespace hjym {

void MinimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("minimizer: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("minimizer: grad_tol must be > 0");
  if (!(initial_step > 0.0)) throw std::invalid_argument("minimizer: initial_step must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw std::invalid_argument("minimizer: backtrack factor must be in (0,1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("minimizer: armijo constant must be in (0,1)");
  if (n_starts < 1) throw std::invalid_argument("minimizer: n_starts must be >= 1");
}

namespace {

using detail::KSum;
using detail::LinkRef;

// ---------------------------------------------------------------------------
// Exact gradient of s(Q) = 1/2 ||log(Q/|Q|)||^2 with respect to the
// unnormalized clover accumulator Q, per group.

// SU(2): s = 2 phi^2 with phi = atan2(|v|, w); returns the 4-vector ds/dQ.
Quat clover_grad_su2(const Quat& q) {
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  const double rho2 = q.w * q.w + vn * vn;
  if (!(rho2 > 0.0)) throw std::invalid_argument("empty clover accumulator");
  const double rho = std::sqrt(rho2);
  if (q.w / rho <= -1.0 + kBranchGuard)
    throw BranchCutError("clover gradient at the principal branch cut");
  const double phi = std::atan2(vn, q.w);
  const double dw = -4.0 * phi * vn / rho2;
  double dv_over_v;
  if (vn < 1e-8 * rho)
    dv_over_v = 4.0 / rho2;
  else
    dv_over_v = 4.0 * phi * q.w / (rho2 * vn);
  return Quat{dw, dv_over_v * q.x, dv_over_v * q.y, dv_over_v * q.z};
}

struct U1CloverGrad {
  double c, s, rho2, psi;
};

U1CloverGrad clover_grad_u1(const std::complex<double>& q) {
  const double rho2 = std::norm(q);
  if (!(rho2 > 0.0)) throw std::invalid_argument("empty clover accumulator");
  if (q.real() / std::sqrt(rho2) <= -1.0 + kBranchGuard)
    throw BranchCutError("clover gradient at the principal branch cut");
  return U1CloverGrad{q.real(), q.imag(), rho2, std::atan2(q.imag(), q.real())};
}

// ---------------------------------------------------------------------------
// Full clover-action gradient, left-trivialized, one Alg per link.

template <class G>
void add_leaf_gradient(const FieldT<G>& f, const LinkRef refs[4], const typename G::Link& leaf,
                       const typename G::Accum& q_accum, std::vector<typename G::Alg>& grad);

// U(1): d psi / d phi_leaf = (C cos(phi) + S sin(phi)) / rho^2;
// each position enters with its traversal sign.
template <>
void add_leaf_gradient<U1Group>(const U1Field&, const LinkRef refs[4], const double& leaf,
                                const std::complex<double>& q_accum, std::vector<double>& grad) {
  const U1CloverGrad g = clover_grad_u1(q_accum);
  const double gl =
      g.psi * (g.c * std::cos(leaf) + g.s * std::sin(leaf)) / g.rho2;
  for (int p = 0; p < 4; ++p) grad[refs[p].idx] += refs[p].adj ? -gl : gl;
}

// SU(2): transport ds/dQ through the leaf's prefix/suffix products.  For a
// factor chain leaf = F0 F1 F2 F3 and a forward link at position p the
// contribution is -1/2 vec(conj(A_p) ds conj(S_p)); adjoint positions flip
// sign and shift the transports by one factor.
template <>
void add_leaf_gradient<Su2Group>(const Su2Field& f, const LinkRef refs[4], const Quat& /*leaf*/,
                                 const Quat& q_accum, std::vector<Vec3>& grad) {
  const Quat ds = clover_grad_su2(q_accum);
  Quat fac[4];
  for (int p = 0; p < 4; ++p) fac[p] = detail::leaf_factor(f, refs[p]);
  Quat pre[5], suf[5];
  pre[0] = Quat{};
  for (int p = 0; p < 4; ++p) pre[p + 1] = qmul(pre[p], fac[p]);
  suf[4] = Quat{};
  for (int p = 3; p >= 0; --p) suf[p] = qmul(fac[p], suf[p + 1]);
  for (int p = 0; p < 4; ++p) {
    Quat eta;
    double sign;
    if (!refs[p].adj) {
      eta = qmul(qmul(qconj(pre[p]), ds), qconj(suf[p]));
      sign = -0.5;
    } else {
      eta = qmul(qmul(qconj(pre[p + 1]), ds), qconj(suf[p + 1]));
      sign = 0.5;
    }
    Vec3& g = grad[refs[p].idx];
    g[0] += sign * eta.x;
    g[1] += sign * eta.y;
    g[2] += sign * eta.z;
  }
}

template <class G>
std::vector<typename G::Alg> gradient_impl(const FieldT<G>& f) {
  const LatticeGeometry& g = f.geom;
  std::vector<typename G::Alg> grad(g.links(), G::zero());
  LinkRef refs[4];
  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z)
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
              if (!detail::walk_loop(g, n, mu, nu, detail::leaf_steps()[0], refs)) continue;
              const auto leaf = detail::leaf_product(f, refs);
              auto q = G::accum_zero();
              G::accum_add(q, leaf);
              add_leaf_gradient<G>(f, refs, leaf, q, grad);
            }
  return grad;
}

// ---------------------------------------------------------------------------
// Free-link bookkeeping and the descent loop.

template <class G>
std::vector<char> free_mask(const LatticeGeometry& g, bool weyl) {
  std::vector<char> mask(g.links(), 0);
  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z) {
          const long s = site_index(g, n);
          for (int mu = 0; mu < 4; ++mu) {
            if (mu == 0) {
              if (!weyl && n.t + 1 < g.n_t) mask[s * 4 + mu] = 1;
            } else if (n.t >= 1) {
              mask[s * 4 + mu] = 1;
            }
          }
        }
  return mask;
}

template <class G>
const std::vector<typename G::Link>& bd_links(const BoundaryData& bd) {
  if constexpr (G::kind == GroupKind::U1)
    return std::get<std::vector<double>>(bd.links);
  else
    return std::get<std::vector<Quat>>(bd.links);
}

template <class G>
FieldT<G> cold_start_impl(const BoundaryData& bd, const LatticeGeometry& g, bool damped) {
  // Datum propagated t-constant; in the damped variant the interior decays
  // toward identity with e^{-t a/tau}, tau = n_t a / 4.  For U1 the damping
  // acts on the stored phase, which keeps gauge content telescoping inside
  // plaquettes; for SU2 it acts on the link log and can push plaquettes of a
  // gauge-rough datum onto the branch cut, in which case minimize() falls
  // back to the exactly holonomy-preserving t-constant start.
  FieldT<G> f{g, std::vector<typename G::Link>(g.links(), G::id())};
  const auto& in = bd_links<G>(bd);
  Site n;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        Site s3{0, n.x, n.y, n.z};
        const long b = site_index(g, s3) * 3;  // slice index matches t=0 site order
        for (int i = 1; i <= 3; ++i) {
          const auto& u0 = in[b + (i - 1)];
          for (n.t = 0; n.t < g.n_t; ++n.t) {
            if (n.t == 0) {
              f.link(n, i) = u0;  // bit-exact Dirichlet slice
            } else if (!damped) {
              f.link(n, i) = u0;
            } else {
              const double damp = std::exp(-4.0 * n.t / g.n_t);
              if constexpr (G::kind == GroupKind::U1)
                f.link(n, i) = damp * u0;
              else
                f.link(n, i) = G::expmap(G::scale(damp, G::logmap(u0)));
            }
          }
        }
      }
  return f;
}

template <class G>
void perturb_free_links(FieldT<G>& f, const std::vector<char>& mask, std::uint64_t seed,
                        double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  for (long l = 0; l < (long)f.links.size(); ++l) {
    if (!mask[l]) continue;
    if constexpr (G::kind == GroupKind::U1) {
      f.links[l] = G::mul(G::expmap(dist(rng)), f.links[l]);
    } else {
      const Vec3 c{dist(rng), dist(rng), dist(rng)};
      f.links[l] = qnormalize(qmul(su2_exp(c), f.links[l]));
    }
  }
}

struct DescentResult {
  double S = 0.0;
  double grad_inf = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> trace;
};

template <class G>
DescentResult descend(FieldT<G>& f, const std::vector<char>& mask, const MinimizerConfig& cfg) {
  DescentResult r;
  double S = detail::plaquette_action(f);
  r.trace.emplace_back(0, S);
  double step = cfg.initial_step;
  const double grow = 1.3;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    r.iterations = iter - 1;
    const auto grad = gradient_impl(f);
    double ginf = 0.0;
    KSum g2sum;
    for (long l = 0; l < (long)grad.size(); ++l) {
      if (!mask[l]) continue;
      const double n2 = G::norm2(grad[l]);
      g2sum.add(n2);
      ginf = std::max(ginf, std::sqrt(n2));
    }
    const double g2 = g2sum.value();
    r.grad_inf = ginf;
    if (ginf <= cfg.grad_tol) {
      r.converged = true;
      break;
    }

    step = std::min(step * grow, 64.0 * cfg.initial_step);
    bool accepted = false;
    while (step >= 1e-16) {
      FieldT<G> trial = f;
      for (long l = 0; l < (long)grad.size(); ++l) {
        if (!mask[l]) continue;
        trial.links[l] = G::renorm(G::mul(G::expmap(G::scale(-step, grad[l])), trial.links[l]));
      }
      double S_trial;
      try {
        S_trial = detail::plaquette_action(trial);
      } catch (const BranchCutError&) {
        S_trial = std::numeric_limits<double>::infinity();  // reject, step too large
      }
      if (S_trial <= S - cfg.armijo_c * step * g2) {
        f = std::move(trial);
        S = S_trial;
        accepted = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!accepted) break;  // line search exhausted at machine precision
    r.trace.emplace_back(iter, S);
    r.iterations = iter;
  }
  r.S = S;
  if (!r.converged && r.grad_inf <= cfg.grad_tol) r.converged = true;
  return r;
}

template <class G>
void check_warm_start(const FieldT<G>& w, const BoundaryData& bd, const MinimizerConfig& cfg) {
  const auto& in = bd_links<G>(bd);
  const LatticeGeometry& g = w.geom;
  Site n;
  n.t = 0;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        const long b = site_index(g, n) * 3;
        for (int i = 1; i <= 3; ++i) {
          const auto& a = w.link(n, i);
          const auto& bdl = in[b + (i - 1)];
          bool same;
          if constexpr (G::kind == GroupKind::U1)
            same = a == bdl;
          else
            same = a.w == bdl.w && a.x == bdl.x && a.y == bdl.y && a.z == bdl.z;
          if (!same)
            throw std::invalid_argument("warm start t=0 tangential links differ from the datum");
        }
      }
  if (cfg.weyl_gauge) {
    for (n.t = 0; n.t + 1 < g.n_t; ++n.t)
      for (n.x = 0; n.x < g.n_x; ++n.x)
        for (n.y = 0; n.y < g.n_y; ++n.y)
          for (n.z = 0; n.z < g.n_z; ++n.z) {
            const auto& u0 = w.link(n, 0);
            bool id;
            if constexpr (G::kind == GroupKind::U1)
              id = u0 == 0.0;
            else
              id = u0.w == 1.0 && u0.x == 0.0 && u0.y == 0.0 && u0.z == 0.0;
            if (!id) throw std::invalid_argument("warm start violates the Weyl gauge");
          }
  }
}

template <class G>
MinimizeReport minimize_impl(const BoundaryData& bd, const LatticeGeometry& geom,
                             const MinimizerConfig& cfg, const GaugeField* warm) {
  const auto mask = free_mask<G>(geom, cfg.weyl_gauge);

  double best_S = std::numeric_limits<double>::infinity();
  double worst_S = -std::numeric_limits<double>::infinity();
  FieldT<G> best_field;
  DescentResult best_run;

  for (int s = 0; s < cfg.n_starts; ++s) {
    FieldT<G> f;
    if (warm && s == 0) {
      f = std::get<FieldT<G>>(warm->impl);
      if (!(f.geom.n_t == geom.n_t && f.geom.n_x == geom.n_x && f.geom.n_y == geom.n_y &&
            f.geom.n_z == geom.n_z && f.geom.spacing == geom.spacing))
        throw std::invalid_argument("warm start geometry mismatch");
      check_warm_start(f, bd, cfg);
    } else {
      // Damped start helps smooth data; for gauge-rough data the wrap jumps
      // in the damped logs plant flux defects, so keep whichever of the two
      // admissible starts sits lower.
      f = cold_start_impl<G>(bd, geom, true);
      double s_damped = std::numeric_limits<double>::infinity();
      try {
        s_damped = detail::plaquette_action(f);
      } catch (const BranchCutError&) {
      }
      FieldT<G> tconst = cold_start_impl<G>(bd, geom, false);
      if (detail::plaquette_action(tconst) < s_damped) f = std::move(tconst);
      if (s > 0) perturb_free_links<G>(f, mask, cfg.seed * 1000003ULL + s, 0.02);
    }
    DescentResult run = descend(f, mask, cfg);
    if (run.S < best_S) {
      best_S = run.S;
      best_field = std::move(f);
      best_run = std::move(run);
    }
    worst_S = std::max(worst_S, run.S);
  }

  MinimizeReport rep;
  rep.final_field.impl = std::move(best_field);
  rep.S = best_run.S;
  rep.grad_norm = best_run.grad_inf;
  rep.iterations = best_run.iterations;
  rep.action_trace = std::move(best_run.trace);
  rep.converged = best_run.converged;
  rep.n_starts = cfg.n_starts;
  rep.s_min = best_S;
  rep.s_spread = cfg.n_starts > 1 ? worst_S - best_S : 0.0;
  if (cfg.weyl_gauge) rep.E = electric_field(rep.final_field);
  return rep;
}

}  // namespace

GaugeField cold_start(const BoundaryData& bd, const LatticeGeometry& geom) {
  geom.validate();
  if (!bd.compatible(geom)) throw std::invalid_argument("cold_start: datum incompatible");
  GaugeField f;
  if (bd.kind == GroupKind::U1)
    f.impl = cold_start_impl<U1Group>(bd, geom, true);
  else
    f.impl = cold_start_impl<Su2Group>(bd, geom, true);
  return f;
}

MinimizeReport minimize(const BoundaryData& bd, const LatticeGeometry& geom,
                        const MinimizerConfig& cfg, const GaugeField* warm_start) {
  geom.validate();
  cfg.validate();
  if (!bd.compatible(geom))
    throw std::invalid_argument("minimize: datum incompatible with the geometry");
  if (warm_start && warm_start->kind() != bd.kind)
    throw std::invalid_argument("minimize: warm start group kind mismatch");
  if (bd.kind == GroupKind::U1) return minimize_impl<U1Group>(bd, geom, cfg, warm_start);
  return minimize_impl<Su2Group>(bd, geom, cfg, warm_start);
}

double principal_functional(const BoundaryData& bd, const LatticeGeometry& geom,
                            const MinimizerConfig& cfg) {
  return minimize(bd, geom, cfg).S;
}

std::vector<AlgebraElement> action_gradient(const GaugeField& f) {
  std::vector<AlgebraElement> out;
  std::visit(
      [&](const auto& ff) {
        using FT = std::decay_t<decltype(ff)>;
        using G = std::conditional_t<std::is_same_v<FT, U1Field>, U1Group, Su2Group>;
        const auto grad = gradient_impl(ff);
        out.reserve(grad.size());
        for (const auto& c : grad) {
          if constexpr (G::kind == GroupKind::U1)
            out.push_back(AlgebraElement::u1(c));
          else
            out.push_back(AlgebraElement::su2(c));
        }
      },
      f.impl);
  return out;
}

HjeResult hje_residual(const MinimizeReport& report) {
  HjeResult r;
  const SliceField b = magnetic_field(report.final_field, 0);
  r.lhs = slice_l2_product(report.E, report.E);
  r.rhs = slice_l2_product(b, b);
  r.rel_gap = std::abs(r.lhs - r.rhs) / std::max(r.rhs, kRelGapFloor);
  return r;
}

double slice_l2_product(const SliceField& a, const SliceField& b) {
  if (a.data.size() != b.data.size()) throw std::invalid_argument("slice size mismatch");
  const double a3 = a.spacing * a.spacing * a.spacing;
  KSum sum;
  for (size_t i = 0; i < a.data.size(); ++i) sum.add(inner(a.data[i], b.data[i]));
  return a3 * sum.value();
}

double slice_inf_norm(const SliceField& s) {
  double m = 0.0;
  for (const auto& x : s.data) m = std::max(m, algebra_norm(x));
  return m;
}

double algebra_inf_norm(const std::vector<AlgebraElement>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, algebra_norm(x));
  return m;
}

DerivativeCheck functional_derivative_check(const BoundaryData& bd, const LatticeGeometry& geom,
                                            const MinimizerConfig& cfg, const SliceField& h,
                                            double eps) {
  if (!(eps >= 1e-4 && eps <= 1e-2))
    throw std::invalid_argument("functional_derivative_check: eps must be in [1e-4, 1e-2]");
  if (slice_inf_norm(h) > 0.1 + 1e-12)
    throw std::invalid_argument("functional_derivative_check: ||h||_inf must be <= 0.1");
  if (h.slice_sites() != 1L * geom.n_x * geom.n_y * geom.n_z || h.kind != bd.kind)
    throw std::invalid_argument("functional_derivative_check: h incompatible with the datum");

  auto perturbed = [&](double sign) {
    BoundaryData out = bd;
    if (bd.kind == GroupKind::U1) {
      auto& links = std::get<std::vector<double>>(out.links);
      for (long s = 0; s < out.slice_sites(); ++s)
        for (int i = 0; i < 3; ++i) links[s * 3 + i] += sign * eps * h.at(s, i).c[0];
    } else {
      auto& links = std::get<std::vector<Quat>>(out.links);
      for (long s = 0; s < out.slice_sites(); ++s)
        for (int i = 0; i < 3; ++i) {
          const Vec3 c = sign * eps * h.at(s, i).c;
          links[s * 3 + i] = qnormalize(qmul(links[s * 3 + i], su2_exp(c)));
        }
    }
    return out;
  };

  MinimizeReport plus = minimize(perturbed(+1.0), geom, cfg);
  MinimizeReport minus = minimize(perturbed(-1.0), geom, cfg);
  if (!plus.converged || !minus.converged)
    throw ConvergenceError("functional_derivative_check: a perturbed minimization failed");

  MinimizeReport base = minimize(bd, geom, cfg);
  if (!base.converged)
    throw ConvergenceError("functional_derivative_check: base minimization failed");
  const auto grad = action_gradient(base.final_field);

  const LatticeGeometry& g = geom;
  KSum pair;
  Site n;
  n.t = 0;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        const long s4 = site_index(g, n);
        const long s3 = s4;  // t=0 site order matches slice order
        for (int i = 1; i <= 3; ++i) {
          // right-trivialized gradient: <X, U^{-1} g U> pairs with U exp(eps X)
          const GroupElement u = base.final_field.link(n, i);
          const AlgebraElement gr = conjugate(u, grad[s4 * 4 + i]);
          pair.add(inner(gr, h.at(s3, i - 1)));
        }
      }

  DerivativeCheck out;
  out.numeric = (plus.S - minus.S) / (2.0 * eps);
  out.analytic = pair.value();
  out.rel_gap = std::abs(out.numeric - out.analytic) / std::max(std::abs(out.numeric), kRelGapFloor);
  return out;
}

namespace {

// Circular centroid of the datum's support, one coordinate per spatial axis.
std::array<double, 3> datum_centroid(const BoundaryData& bd, bool* flat) {
  const int ext[3] = {bd.n_x, bd.n_y, bd.n_z};
  std::array<std::complex<double>, 3> phasor{};
  double total = 0.0;
  for (int x = 0; x < bd.n_x; ++x)
    for (int y = 0; y < bd.n_y; ++y)
      for (int z = 0; z < bd.n_z; ++z) {
        const long s = (1L * x * bd.n_y + y) * bd.n_z + z;
        double w = 0.0;
        if (bd.kind == GroupKind::U1) {
          const auto& links = std::get<std::vector<double>>(bd.links);
          for (int i = 0; i < 3; ++i) {
            const double c = u1_log(links[s * 3 + i]);
            w += c * c;
          }
        } else {
          const auto& links = std::get<std::vector<Quat>>(bd.links);
          for (int i = 0; i < 3; ++i) w += dot(su2_log(links[s * 3 + i]), su2_log(links[s * 3 + i]));
        }
        if (w == 0.0) continue;
        total += w;
        const int c[3] = {x, y, z};
        for (int a = 0; a < 3; ++a)
          phasor[a] += w * std::polar(1.0, 2.0 * std::numbers::pi * c[a] / ext[a]);
      }
  *flat = total == 0.0;
  std::array<double, 3> out{};
  for (int a = 0; a < 3; ++a) {
    const double ang = std::arg(phasor[a]);
    double pos = ang / (2.0 * std::numbers::pi) * ext[a];
    if (pos < 0) pos += ext[a];
    out[a] = pos;
  }
  return out;
}

double min_image(double d, int n) {
  d = std::fmod(d, (double)n);
  if (d < -n / 2.0) d += n;
  if (d > n / 2.0) d -= n;
  return d;
}

struct Fit {
  double slope = 0.0;
};

Fit loglog_fit(const std::vector<std::pair<double, double>>& pts) {
  KSum sx, sy, sxx, sxy;
  for (const auto& [r, v] : pts) {
    const double lx = std::log(r), ly = std::log(v);
    sx.add(lx);
    sy.add(ly);
    sxx.add(lx * lx);
    sxy.add(lx * ly);
  }
  const double n = (double)pts.size();
  const double denom = n * sxx.value() - sx.value() * sx.value();
  return Fit{(n * sxy.value() - sx.value() * sy.value()) / denom};
}

}  // namespace

DecayExponents decay_diagnostic(const MinimizeReport& report, const BoundaryData& bd) {
  const GaugeField& f = report.final_field;
  const LatticeGeometry& g = f.geometry();
  bool flat = false;
  const auto c0 = datum_centroid(bd, &flat);
  if (flat) throw DiagnosticUnavailable("decay diagnostic: flat datum, all shells zero");

  // The open time direction carries the far field (space wraps at half the
  // extent); shells reach out to the full time extent.
  const double R = g.spacing * (g.n_t - 1);
  const int n_shells = (int)std::floor(R / g.spacing) + 1;
  std::vector<double> maxF(n_shells, 0.0), maxA(n_shells, 0.0);

  Site n;
  for (n.t = 0; n.t < g.n_t; ++n.t)
    for (n.x = 0; n.x < g.n_x; ++n.x)
      for (n.y = 0; n.y < g.n_y; ++n.y)
        for (n.z = 0; n.z < g.n_z; ++n.z) {
          const double dx = min_image(n.x - c0[0], g.n_x);
          const double dy = min_image(n.y - c0[1], g.n_y);
          const double dz = min_image(n.z - c0[2], g.n_z);
          const double r = g.spacing * std::sqrt(1.0 * n.t * n.t + dx * dx + dy * dy + dz * dz);
          const int shell = (int)std::floor(r / g.spacing);
          if (shell >= n_shells) continue;

          double f2 = 0.0;
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) {
              try {
                const AlgebraElement fs = field_strength(f, n, mu, nu);
                f2 += inner(fs, fs);
              } catch (const BoundaryError&) {
              }
            }
          maxF[shell] = std::max(maxF[shell], std::sqrt(f2));
          for (int i = 1; i <= 3; ++i) {
            const AlgebraElement a = log_map(f.link(n, i));
            maxA[shell] = std::max(maxA[shell], algebra_norm(a) / g.spacing);
          }
        }

  std::vector<std::pair<double, double>> ptsF, ptsA;
  for (int s = 0; s < n_shells; ++s) {
    const double r = (s + 0.5) * g.spacing;
    if (r < 0.25 * R || r > 0.75 * R) continue;
    if (maxF[s] > 0.0) ptsF.emplace_back(r, maxF[s]);
    if (maxA[s] > 0.0) ptsA.emplace_back(r, maxA[s]);
  }
  if (ptsF.size() < 4 || ptsA.size() < 4)
    throw DiagnosticUnavailable("decay diagnostic: fewer than 4 usable shells");

  DecayExponents out;
  out.p_F = loglog_fit(ptsF).slope;
  out.p_A = loglog_fit(ptsA).slope;
  out.shells = (int)ptsF.size();
  return out;
}

namespace {

template <class G>
std::vector<AlgebraElement> gauss_residual_impl(const MinimizeReport& report) {
  const GaugeField& f = report.final_field;
  const LatticeGeometry& g = f.geometry();
  const SliceField& e = report.E;
  if (e.data.empty()) throw std::invalid_argument("gauss residual needs a Weyl-gauge report");
  std::vector<AlgebraElement> out(g.slice_sites());
  const double inv_a = 1.0 / g.spacing;
  Site n;
  n.t = 0;
  for (n.x = 0; n.x < g.n_x; ++n.x)
    for (n.y = 0; n.y < g.n_y; ++n.y)
      for (n.z = 0; n.z < g.n_z; ++n.z) {
        const long s3 = site_index(g, n);
        AlgebraElement div;
        div.kind = e.kind;
        div.c = {0, 0, 0};
        for (int i = 1; i <= 3; ++i) {
          Site m = n;
          step_site(g, m, i, -1);
          const long m3 = site_index(g, m);
          const GroupElement u_back = f.link(m, i);
          const AlgebraElement transported = conjugate(u_back, e.at(m3, i - 1));
          const AlgebraElement& here = e.at(s3, i - 1);
          for (int a = 0; a < 3; ++a) div.c[a] += (here.c[a] - transported.c[a]) * inv_a;
        }
        out[s3] = div;
      }
  return out;
}

}  // namespace

std::vector<AlgebraElement> gauss_residual(const MinimizeReport& report) {
  if (report.final_field.kind() == GroupKind::U1) return gauss_residual_impl<U1Group>(report);
  return gauss_residual_impl<Su2Group>(report);
}

// ---------------------------------------------------------------------------
// Slice Hodge gauge: iterative divergence minimization.

namespace {

// Gauss-Seidel relaxation directly on the log divergence: the local move
// g(x) = exp(beta D(x)) with beta = a/6 cancels the divergence at x to
// leading order (six links touch the site), which is a sequential sweep for
// the lattice Poisson problem of the Hodge condition.
template <class G>
GaugeFixResult fix_gauge_impl(const BoundaryData& bd, int max_sweeps, double tol) {
  const int nx = bd.n_x, ny = bd.n_y, nz = bd.n_z;
  const long n_sites = bd.slice_sites();
  auto links = bd_links<G>(bd);  // copy, updated in place
  std::vector<typename G::Link> gtot(n_sites, G::id());

  auto idx = [&](int x, int y, int z) { return (1L * x * ny + y) * nz + z; };
  auto wrap = [](int c, int n) { return (c % n + n) % n; };
  auto backs = [&](int x, int y, int z) {
    return std::array<long, 3>{idx(wrap(x - 1, nx), y, z), idx(x, wrap(y - 1, ny), z),
                               idx(x, y, wrap(z - 1, nz))};
  };
  auto site_div = [&](int x, int y, int z) {
    const long s = idx(x, y, z);
    const auto back = backs(x, y, z);
    auto div = G::zero();
    for (int i = 0; i < 3; ++i) {
      div = G::add(div, G::logmap(links[s * 3 + i]));
      div = G::add(div, G::scale(-1.0, G::logmap(links[back[i] * 3 + i])));
    }
    return G::scale(1.0 / bd.spacing, div);
  };
  auto divergence_inf = [&]() {
    double m = 0.0;
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) m = std::max(m, std::sqrt(G::norm2(site_div(x, y, z))));
    return m;
  };

  const double beta = bd.spacing / 6.0;
  int sweep = 0;
  double div = divergence_inf();
  while (div > tol) {
    if (sweep >= max_sweeps)
      throw ConvergenceError("fix_spatial_gauge: divergence did not converge");
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int z = 0; z < nz; ++z) {
          const long s = idx(x, y, z);
          const auto back = backs(x, y, z);
          const auto d = site_div(x, y, z);
          const auto r = G::expmap(G::scale(beta, d));
          for (int i = 0; i < 3; ++i) {
            links[s * 3 + i] = G::renorm(G::mul(G::adj(r), links[s * 3 + i]));
            links[back[i] * 3 + i] = G::renorm(G::mul(links[back[i] * 3 + i], r));
          }
          gtot[s] = G::renorm(G::mul(gtot[s], r));
        }
    ++sweep;
    div = divergence_inf();
  }

  GaugeFixResult out;
  out.fixed = bd;
  out.fixed.links = std::move(links);
  out.transform.kind = G::kind;
  out.transform.slice = true;
  out.transform.g = std::move(gtot);
  out.sweeps = sweep;
  out.divergence = div;
  return out;
}

}  // namespace

GaugeFixResult fix_spatial_gauge(const BoundaryData& bd, int max_sweeps, double tol) {
  if (bd.kind == GroupKind::U1) return fix_gauge_impl<U1Group>(bd, max_sweeps, tol);
  return fix_gauge_impl<Su2Group>(bd, max_sweeps, tol);
}

}  // namespace hjym
