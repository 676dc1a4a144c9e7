#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hjym/generators.hpp"
#include "hjym/invariance.hpp"
#include "hjym/lattice.hpp"
#include "hjym/maxwell.hpp"
#include "hjym/minimize.hpp"
#include "hjym/qm.hpp"

namespace py = pybind11;
using namespace hjym;

namespace {

using Arr = py::array_t<double, py::array::c_style | py::array::forcecast>;

VectorFieldGrid grid_from_numpy(const Arr& a, double spacing) {
  const auto buf = a.request();
  if (buf.ndim != 4 || buf.shape[0] != 3 || buf.shape[1] != buf.shape[2] ||
      buf.shape[2] != buf.shape[3])
    throw std::invalid_argument("expected an array of shape (3, N, N, N)");
  const int n = (int)buf.shape[1];
  VectorFieldGrid g = VectorFieldGrid::zero(n, spacing);
  const double* p = static_cast<const double*>(buf.ptr);
  const long s = g.sites();
  for (int c = 0; c < 3; ++c)
    for (long i = 0; i < s; ++i) g.comp[c][i] = p[c * s + i];
  return g;
}

py::array grid_to_numpy(const VectorFieldGrid& g) {
  const long s = g.sites();
  py::array_t<double> out({(long)3, (long)g.n, (long)g.n, (long)g.n});
  double* p = static_cast<double*>(out.request().ptr);
  for (int c = 0; c < 3; ++c)
    for (long i = 0; i < s; ++i) p[c * s + i] = g.comp[c][i];
  return out;
}

GroupKind kind_of(const std::string& group) {
  if (group == "u1") return GroupKind::U1;
  if (group == "su2") return GroupKind::Su2;
  throw std::invalid_argument("group must be 'u1' or 'su2'");
}

py::dict report_to_dict(const MinimizeReport& rep) {
  py::dict d;
  d["S"] = rep.S;
  d["grad_norm"] = rep.grad_norm;
  d["iterations"] = rep.iterations;
  d["converged"] = rep.converged;
  d["n_starts"] = rep.n_starts;
  d["s_spread"] = rep.s_spread;
  py::list trace;
  for (const auto& [it, s] : rep.action_trace) trace.append(py::make_tuple(it, s));
  d["action_trace"] = trace;
  const HjeResult h = hje_residual(rep);
  d["hje"] = py::make_tuple(h.lhs, h.rhs, h.rel_gap);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "lattice Hamilton-Jacobi ground state construction";

  // ---- one-dimensional quantum mechanics ----
  m.def(
      "anharmonic_S", [](double x, double lam) { return anharmonic_S(x, lam); }, py::arg("x"),
      py::arg("lam"));
  m.def(
      "solve_qm",
      [](double lam, double h, double xmax) {
        const PotentialGrid g = make_anharmonic_grid(lam, -xmax, xmax, h);
        const PrincipalFunction1D s = solve_hje_1d(g);
        const std::vector<double> psi = ground_state(s);
        py::dict d;
        d["x_min"] = g.x_min;
        d["h"] = g.h;
        d["V"] = py::cast(g.V);
        d["S"] = py::cast(s.S);
        d["psi"] = py::cast(psi);
        d["nno_residual"] = nno_residual(g, s, psi);
        d["hje_max_residual"] = hje_max_residual(g, s);
        d["conventional_energy"] = conventional_ordering_energy(g, psi);
        return d;
      },
      py::arg("lam"), py::arg("h") = 1e-3, py::arg("xmax") = 5.0,
      "solve the zero-energy Hamilton-Jacobi problem for the anharmonic oscillator");

  // ---- abelian sector ----
  m.def(
      "wheeler_S_spectral",
      [](const Arr& a, double spacing) { return wheeler_S_spectral(grid_from_numpy(a, spacing)); },
      py::arg("A"), py::arg("spacing") = 1.0);
  m.def(
      "wheeler_S_kernel",
      [](const Arr& a, double spacing) {
        const KernelResult r = wheeler_S_kernel(grid_from_numpy(a, spacing));
        return py::make_tuple(r.value, r.localized_warning);
      },
      py::arg("A"), py::arg("spacing") = 1.0);
  m.def(
      "transverse_project",
      [](const Arr& a, double spacing) {
        return grid_to_numpy(transverse_project(grid_from_numpy(a, spacing)).to_position());
      },
      py::arg("A"), py::arg("spacing") = 1.0);
  m.def(
      "abelian_mode_oracle",
      [](const Arr& a, int n_t, double spacing, bool finite_grid) {
        return abelian_mode_oracle(grid_from_numpy(a, spacing), n_t, finite_grid);
      },
      py::arg("A"), py::arg("n_t"), py::arg("spacing") = 1.0,
      py::arg("finite_grid_correction") = true);
  m.def(
      "boost_identity_check",
      [](const Arr& a, int axis, double spacing) {
        const BoostCheck c = boost_identity_check(grid_from_numpy(a, spacing), axis);
        return py::make_tuple(c.lhs, c.rhs, c.rel_gap, c.localized_warning);
      },
      py::arg("A"), py::arg("axis"), py::arg("spacing") = 1.0);
  m.def(
      "bump_field",
      [](int n, double spacing, double width, double amplitude) {
        const std::array<double, 3> c{(n - 1) / 2.0, (n - 1) / 2.0, (n - 1) / 2.0};
        return grid_to_numpy(vf_bump(n, spacing, c, width, amplitude));
      },
      py::arg("n"), py::arg("spacing") = 1.0, py::arg("width") = 3.0,
      py::arg("amplitude") = 0.3);

  // ---- lattice Dirichlet problem ----
  m.def(
      "minimize_mode_datum",
      [](const std::string& group, int nt, int ns, double spacing, std::array<int, 3> mvec,
         double amplitude, int pol_axis, double grad_tol, int max_iters) {
        LatticeGeometry g;
        g.n_t = nt;
        g.n_x = g.n_y = g.n_z = ns;
        g.spacing = spacing;
        const BoundaryData bd = single_mode_boundary(ns, ns, ns, spacing, kind_of(group), mvec,
                                                     amplitude, pol_axis);
        MinimizerConfig cfg;
        cfg.grad_tol = grad_tol;
        cfg.max_iters = max_iters;
        return report_to_dict(minimize(bd, g, cfg));
      },
      py::arg("group"), py::arg("nt"), py::arg("ns"), py::arg("spacing") = 1.0,
      py::arg("m") = std::array<int, 3>{1, 0, 0}, py::arg("amplitude") = 0.02,
      py::arg("pol_axis") = 1, py::arg("grad_tol") = 1e-8, py::arg("max_iters") = 20000,
      "minimize the Euclidean action for a single-mode Dirichlet datum");
  m.def(
      "minimize_u1_field",
      [](const Arr& a, int nt, double spacing, double grad_tol, int max_iters,
         const std::string& save_to) {
        const VectorFieldGrid vf = grid_from_numpy(a, spacing);
        LatticeGeometry g;
        g.n_t = nt;
        g.n_x = g.n_y = g.n_z = vf.n;
        g.spacing = spacing;
        MinimizerConfig cfg;
        cfg.grad_tol = grad_tol;
        cfg.max_iters = max_iters;
        const MinimizeReport rep = minimize(to_u1_boundary(vf), g, cfg);
        if (!save_to.empty()) save_field(rep.final_field, save_to);
        return report_to_dict(rep);
      },
      py::arg("A"), py::arg("nt"), py::arg("spacing") = 1.0, py::arg("grad_tol") = 1e-8,
      py::arg("max_iters") = 20000, py::arg("save_to") = std::string(),
      "minimize with a u1 datum given as a vector potential on the t=0 slice");
  m.def(
      "action_of_field_file",
      [](const std::string& path) { return euclidean_action(load_field(path)); },
      py::arg("path"));

  m.attr("__all__") = py::make_tuple(
      "anharmonic_S", "solve_qm", "wheeler_S_spectral", "wheeler_S_kernel", "transverse_project",
      "abelian_mode_oracle", "boost_identity_check", "bump_field", "minimize_mode_datum",
      "minimize_u1_field", "action_of_field_file");
}
