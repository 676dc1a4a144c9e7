#include "hjym/invariance.hpp"

#include <cmath>
#include <sstream>

#include "hjym/generators.hpp"

namespace hjym {

namespace {

std::string geometry_string(const LatticeGeometry& g) {
  std::ostringstream os;
  os << g.n_x << "x" << g.n_y << "x" << g.n_z << "x" << g.n_t << " a=" << g.spacing;
  return os.str();
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::max(std::abs(a), std::abs(b)), kRelGapFloor);
}

// Negative control: rotate one interior spatial link by 0.5 rad and recompute
// the derived fields, so downstream checks must be able to fail.
void corrupt_report(MinimizeReport& rep) {
  Site s{1, 0, 0, 0};
  GroupElement u = rep.final_field.link(s, 1);
  AlgebraElement kick;
  kick.kind = u.kind;
  kick.c = {0.5, 0.0, 0.0};
  rep.final_field.set_link(s, 1, group_mul(exp_map(kick), u));
  rep.E = electric_field(rep.final_field);
  rep.S = euclidean_action(rep.final_field);
}

}  // namespace

InvarianceReport check_gauge_invariance(const BoundaryData& bd, const LatticeGeometry& geom,
                                        const MinimizerConfig& cfg, std::uint64_t seed,
                                        double tolerance) {
  InvarianceReport r;
  r.check = "gauge";
  r.seed = seed;
  r.geometry = geometry_string(geom);
  r.datum_digest = boundary_digest(bd);
  r.tolerance = tolerance;
  const GaugeTransform g = random_slice_transform(bd.kind, bd.n_x, bd.n_y, bd.n_z, seed);
  MinimizeReport a = minimize(bd, geom, cfg);
  MinimizeReport b = minimize(gauge_transform(bd, g), geom, cfg);
  if (!a.converged || !b.converged) throw ConvergenceError("gauge check: minimization failed");
  r.lhs = a.S;
  r.rhs = b.S;
  r.rel_gap = rel(a.S, b.S);
  r.pass = r.rel_gap <= tolerance;
  return r;
}

InvarianceReport check_euclidean_symmetry(const BoundaryData& bd, const LatticeGeometry& geom,
                                          const MinimizerConfig& cfg, const SymmetryOp& op,
                                          double tolerance) {
  InvarianceReport r;
  r.check = op.kind == SymmetryOp::Kind::Rot90 ? "symmetry:rot90" : "symmetry:shift";
  r.geometry = geometry_string(geom);
  r.datum_digest = boundary_digest(bd);
  r.tolerance = tolerance;
  BoundaryData moved = op.kind == SymmetryOp::Kind::Rot90
                           ? rotate90_boundary(bd, op.axis_a, op.axis_b)
                           : shift_boundary(bd, op.shift);
  MinimizeReport a = minimize(bd, geom, cfg);
  MinimizeReport b = minimize(moved, geom, cfg);
  if (!a.converged || !b.converged) throw ConvergenceError("symmetry check: minimization failed");
  r.lhs = a.S;
  r.rhs = b.S;
  r.rel_gap = rel(a.S, b.S);
  r.pass = r.rel_gap <= tolerance;
  return r;
}

InvarianceReport check_gauss_residual(const MinimizeReport& report, double grad_tol) {
  InvarianceReport r;
  r.check = "gauss";
  r.geometry = geometry_string(report.final_field.geometry());
  r.tolerance = 10.0 * grad_tol;
  const auto div = gauss_residual(report);
  r.lhs = algebra_inf_norm(div);
  r.rhs = 0.0;
  r.rel_gap = r.lhs;
  r.pass = r.rel_gap <= r.tolerance;
  return r;
}

std::vector<InvarianceReport> run_suite(const SuiteConfig& cfg) {
  std::vector<InvarianceReport> out;
  auto guarded = [&out](auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      InvarianceReport r;
      r.check = "error";
      r.pass = false;
      r.error = e.what();
      out.push_back(r);
    }
  };

  for (const std::string& name : cfg.battery) {
    if (name == "gauge") {
      for (int i = 0; i < cfg.gauge_samples; ++i)
        guarded([&, i] {
          return check_gauge_invariance(cfg.datum, cfg.geom, cfg.minimizer, cfg.seed + i,
                                        cfg.gauge_tolerance);
        });
    } else if (name == "symmetry") {
      guarded([&] {
        SymmetryOp op;
        op.kind = SymmetryOp::Kind::Rot90;
        op.axis_a = 0;
        op.axis_b = 1;
        return check_euclidean_symmetry(cfg.datum, cfg.geom, cfg.minimizer, op,
                                        cfg.symmetry_tolerance);
      });
      guarded([&] {
        SymmetryOp op;
        op.kind = SymmetryOp::Kind::Shift;
        op.shift = {1, 0, 0};
        return check_euclidean_symmetry(cfg.datum, cfg.geom, cfg.minimizer, op,
                                        cfg.symmetry_tolerance);
      });
    } else if (name == "gauss") {
      guarded([&] {
        MinimizeReport rep = minimize(cfg.datum, cfg.geom, cfg.minimizer);
        if (!rep.converged) throw ConvergenceError("gauss check: minimization failed");
        if (cfg.corrupt_one_link) corrupt_report(rep);
        InvarianceReport r = check_gauss_residual(rep, cfg.minimizer.grad_tol);
        r.seed = cfg.seed;
        r.datum_digest = boundary_digest(cfg.datum);
        return r;
      });
    } else if (name == "hje") {
      guarded([&] {
        MinimizeReport rep = minimize(cfg.datum, cfg.geom, cfg.minimizer);
        if (!rep.converged) throw ConvergenceError("hje check: minimization failed");
        if (cfg.corrupt_one_link) corrupt_report(rep);
        const HjeResult h = hje_residual(rep);
        InvarianceReport r;
        r.check = "hje";
        r.seed = cfg.seed;
        r.geometry = geometry_string(cfg.geom);
        r.datum_digest = boundary_digest(cfg.datum);
        r.lhs = h.lhs;
        r.rhs = h.rhs;
        r.rel_gap = h.rel_gap;
        r.tolerance = cfg.hje_tolerance;
        r.pass = r.rel_gap <= r.tolerance;
        return r;
      });
    } else if (name == "deriv") {
      guarded([&] {
        const SliceField h = random_slice_perturbation(cfg.datum.kind, cfg.geom.n_x, cfg.geom.n_y,
                                                       cfg.geom.n_z, cfg.seed + 77, 0.01);
        const DerivativeCheck d =
            functional_derivative_check(cfg.datum, cfg.geom, cfg.minimizer, h, 1e-3);
        InvarianceReport r;
        r.check = "deriv";
        r.seed = cfg.seed + 77;
        r.geometry = geometry_string(cfg.geom);
        r.datum_digest = boundary_digest(cfg.datum);
        r.lhs = d.numeric;
        r.rhs = d.analytic;
        r.rel_gap = d.rel_gap;
        r.tolerance = cfg.deriv_tolerance;
        r.pass = r.rel_gap <= r.tolerance;
        return r;
      });
    } else {
      throw std::invalid_argument("unknown battery check: " + name);
    }
  }
  return out;
}

bool all_gating_pass(const std::vector<InvarianceReport>& reports) {
  for (const auto& r : reports)
    if (r.gating && !r.pass) return false;
  return true;
}

}  // namespace hjym
