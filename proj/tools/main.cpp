// hjym: construct and probe the zero-energy candidate ground state
// exp(-S(A)) for lattice gauge theory on the Euclidean half-space.
//
// Subcommands: qm, maxwell, minimize, verify, report.
// Exit codes: 0 ok, 1 check failed, 2 usage/config error, 3 non-convergence.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "config.hpp"
#include "hjym/generators.hpp"
#include "hjym/invariance.hpp"
#include "hjym/lattice.hpp"
#include "hjym/maxwell.hpp"
#include "hjym/minimize.hpp"
#include "hjym/qm.hpp"

using json = nlohmann::ordered_json;
using namespace hjym;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;  // accepted for interface compatibility; runs are serial
  bool no_timestamp = false;
  bool strict = false;
  cli::ConfigMap config;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

void maybe_stamp(json& j, const GlobalOpts& g) {
  if (!g.no_timestamp) j["timestamp"] = timestamp();
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::printf("%s\n", j.dump(2).c_str());
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Shared lattice/datum option block.

struct DatumOpts {
  std::string group = "u1";
  int nt = 16, nx = 8, ny = 8, nz = 8;
  double spacing = 1.0;
  std::string generator = "mode";
  int mx = 1, my = 0, mz = 0;
  double amplitude = 0.02;
  std::string polarization = "y";
  int color = 0;
  double width = 1.5;
  std::vector<double> center;  // empty: grid center
  std::string datum_file;

  GroupKind kind() const {
    if (group == "u1") return GroupKind::U1;
    if (group == "su2") return GroupKind::Su2;
    throw cli::ConfigError("group must be u1 or su2");
  }
  int pol_axis() const {
    if (polarization == "x") return 0;
    if (polarization == "y") return 1;
    if (polarization == "z") return 2;
    throw cli::ConfigError("polarization must be x, y or z");
  }
  LatticeGeometry geometry() const {
    LatticeGeometry g;
    g.n_t = nt;
    g.n_x = nx;
    g.n_y = ny;
    g.n_z = nz;
    g.spacing = spacing;
    g.validate();
    return g;
  }
  BoundaryData build() const {
    if (generator == "flat") return BoundaryData::flat(nx, ny, nz, spacing, kind());
    if (generator == "mode" || generator == "single-mode")
      return single_mode_boundary(nx, ny, nz, spacing, kind(), {mx, my, mz}, amplitude,
                                  pol_axis(), color);
    if (generator == "bump" || generator == "localized-bump") {
      std::array<double, 3> c{(nx - 1) / 2.0, (ny - 1) / 2.0, (nz - 1) / 2.0};
      if (!center.empty()) {
        if (center.size() != 3) throw cli::ConfigError("center needs three components");
        c = {center[0], center[1], center[2]};
      }
      return localized_bump_boundary(nx, ny, nz, spacing, kind(), c, width, amplitude, color);
    }
    if (generator == "file") {
      if (datum_file.empty()) throw cli::ConfigError("generator=file needs --datum-field");
      const GaugeField f = load_field(datum_file);
      if (f.kind() != kind()) throw cli::ConfigError("datum file group differs from --group");
      return extract_boundary(f);
    }
    throw cli::ConfigError("unknown datum generator: " + generator);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--group", group, "gauge group: u1 or su2");
    cmd->add_option("--nt", nt, "time slices");
    cmd->add_option("--nx", nx, "x extent");
    cmd->add_option("--ny", ny, "y extent");
    cmd->add_option("--nz", nz, "z extent");
    cmd->add_option("--spacing", spacing, "lattice spacing a");
    cmd->add_option("--gen", generator, "datum generator: flat|mode|bump|file");
    cmd->add_option("--mx", mx, "mode integer, x");
    cmd->add_option("--my", my, "mode integer, y");
    cmd->add_option("--mz", mz, "mode integer, z");
    cmd->add_option("--amplitude", amplitude, "datum amplitude");
    cmd->add_option("--polarization", polarization, "mode polarization axis: x|y|z");
    cmd->add_option("--color", color, "su2 algebra direction (0..2)");
    cmd->add_option("--width", width, "bump width (lattice units)");
    cmd->add_option("--center", center, "bump center (three site coordinates)")->expected(3);
    cmd->add_option("--datum-field", datum_file, "field file; its t=0 slice is the datum");
  }
  void from_config(const cli::ConfigMap& c) {
    cli::get(c, "geometry", "nt", nt);
    cli::get(c, "geometry", "nx", nx);
    cli::get(c, "geometry", "ny", ny);
    cli::get(c, "geometry", "nz", nz);
    cli::get(c, "geometry", "spacing", spacing);
    cli::get(c, "datum", "group", group);
    cli::get(c, "datum", "generator", generator);
    cli::get(c, "datum", "mx", mx);
    cli::get(c, "datum", "my", my);
    cli::get(c, "datum", "mz", mz);
    cli::get(c, "datum", "amplitude", amplitude);
    cli::get(c, "datum", "polarization", polarization);
    cli::get(c, "datum", "color", color);
    cli::get(c, "datum", "width", width);
    cli::get(c, "datum", "file", datum_file);
  }
};

struct MinimizerOpts {
  MinimizerConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iters", cfg.max_iters, "iteration cap");
    cmd->add_option("--grad-tol", cfg.grad_tol, "stopping inf-norm of the projected gradient");
    cmd->add_option("--initial-step", cfg.initial_step, "initial retraction step");
    cmd->add_option("--backtrack", cfg.backtrack_factor, "Armijo backtracking factor");
    cmd->add_option("--armijo", cfg.armijo_c, "Armijo sufficient-decrease constant");
    cmd->add_flag("--no-weyl,!--weyl", cfg.weyl_gauge, "pin time links to the identity");
    cmd->add_option("--multi-start", cfg.n_starts, "number of descent starts");
  }
  void from_config(const cli::ConfigMap& c) {
    cli::get(c, "minimizer", "max_iters", cfg.max_iters);
    cli::get(c, "minimizer", "grad_tol", cfg.grad_tol);
    cli::get(c, "minimizer", "initial_step", cfg.initial_step);
    cli::get(c, "minimizer", "backtrack", cfg.backtrack_factor);
    cli::get(c, "minimizer", "armijo", cfg.armijo_c);
    cli::get(c, "minimizer", "weyl_gauge", cfg.weyl_gauge);
    cli::get(c, "minimizer", "multi_start", cfg.n_starts);
    int seed = -1;
    cli::get(c, "minimizer", "seed", seed);
    if (seed >= 0) cfg.seed = (std::uint64_t)seed;
  }
};

const std::map<std::string, std::set<std::string>> kConfigSchema = {
    {"geometry", {"nt", "nx", "ny", "nz", "spacing"}},
    {"datum",
     {"group", "generator", "mx", "my", "mz", "amplitude", "polarization", "color", "width",
      "file"}},
    {"minimizer",
     {"max_iters", "grad_tol", "initial_step", "backtrack", "armijo", "weyl_gauge",
      "multi_start", "seed"}},
    {"qm", {"lambda", "h", "xmax"}},
    {"maxwell",
     {"n", "spacing", "generator", "width", "amplitude", "mx", "my", "mz", "polarization",
      "kernel", "boost_axis", "tol_kernel", "tol_boost"}},
    {"verify", {"battery", "gauge_samples", "hje_tolerance", "deriv_tolerance"}},
    {"output", {"field", "report", "csv", "json"}},
};

json report_to_json(const MinimizeReport& rep, const GlobalOpts& g) {
  json j;
  const LatticeGeometry& geom = rep.final_field.geometry();
  j["group"] = group_name(rep.final_field.kind());
  j["geometry"] = {{"nt", geom.n_t},
                   {"nx", geom.n_x},
                   {"ny", geom.n_y},
                   {"nz", geom.n_z},
                   {"spacing", geom.spacing}};
  j["S"] = rep.S;
  j["grad_norm"] = rep.grad_norm;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  if (rep.n_starts > 1) {
    j["n_starts"] = rep.n_starts;
    j["s_min"] = rep.s_min;
    j["s_spread"] = rep.s_spread;
  }
  json trace = json::array();
  for (const auto& [it, s] : rep.action_trace) trace.push_back({it, s});
  j["action_trace"] = trace;
  if (!rep.E.data.empty()) {
    const int ncomp = rep.E.kind == GroupKind::U1 ? 1 : 3;
    j["E"] = {{"shape", {rep.E.n_x, rep.E.n_y, rep.E.n_z, 3, ncomp}}, {"data", json::array()}};
    auto& data = j["E"]["data"];
    for (const auto& a : rep.E.data)
      for (int c = 0; c < ncomp; ++c) data.push_back(a.c[c]);
  }
  maybe_stamp(j, g);
  return j;
}

json invariance_to_json(const std::vector<InvarianceReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["check"] = r.check;
    j["seed"] = r.seed;
    j["geometry"] = r.geometry;
    j["datum_digest"] = r.datum_digest;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["rel_gap"] = r.rel_gap;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["gating"] = r.gating;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(j);
  }
  return arr;
}

// ---------------------------------------------------------------------------

int cmd_qm(const GlobalOpts& g, double lambda, std::vector<double> hs, double xmax,
           const std::string& csv_path, const std::string& json_path) {
  if (!(lambda > 0.0)) {
    std::fprintf(stderr, "qm: lambda must be > 0\n");
    return kExitUsage;
  }
  if (hs.empty()) hs = {1e-3};
  for (double h : hs)
    if (!(h > 0.0,  h < xmax)) {
      std::fprintf(stderr, "qm: grid step must be in (0, xmax)\n");
      return kExitUsage;
    }

  json summary;
  summary["lambda"] = lambda;
  json runs = json::array();
  std::vector<double> residuals;

  for (double h : hs) {
    const PotentialGrid grid = make_anharmonic_grid(lambda, -xmax, xmax, h);
    const PrincipalFunction1D s = solve_hje_1d(grid);
    const std::vector<double> psi = ground_state(s);
    const double r = nno_residual(grid, s, psi);
    residuals.push_back(r);
    runs.push_back({{"h", h},
                    {"nno_residual", r},
                    {"hje_max_residual", hje_max_residual(grid, s)},
                    {"conventional_energy", conventional_ordering_energy(grid, psi)}});
    if (h == hs.back() && !csv_path.empty()) {
      std::ofstream csv(csv_path);
      if (!csv) throw std::runtime_error("cannot write " + csv_path);
      csv << "x,V,S,psi,residual\n";
      // pointwise annihilation residual with the same stencils as the norm
      const int n = grid.n();
      for (int i = 2; i + 2 < n; ++i) {
        const double hh = grid.h;
        auto sp = [&](int k) { return (s.S[k + 1] - s.S[k - 1]) / (2 * hh); };
        auto u = [&](int k) { return sp(k) * psi[k] + (psi[k + 1] - psi[k - 1]) / (2 * hh); };
        const double r_i = 0.5 * (sp(i) * u(i) - (u(i + 1) - u(i - 1)) / (2 * hh));
        csv << grid.x(i) << "," << grid.V[i] << "," << s.S[i] << "," << psi[i] << "," << r_i
            << "\n";
      }
    }
  }
  summary["runs"] = runs;
  if (hs.size() >= 2) {
    const double slope = std::log(residuals.front() / residuals.back()) /
                         std::log(hs.front() / hs.back());
    summary["convergence_slope"] = slope;
  }
  maybe_stamp(summary, g);
  write_json(summary, json_path);
  return kExitOk;
}

int cmd_maxwell(const GlobalOpts& g, int n, double spacing, const std::string& gen, double width,
                double amplitude, std::array<int, 3> m, const std::string& pol, bool kernel,
                const std::string& boost_axis, double tol_kernel, double tol_boost,
                const std::string& json_path) {
  VectorFieldGrid A = VectorFieldGrid::zero(n, spacing);
  const std::array<double, 3> center{(n - 1) / 2.0, (n - 1) / 2.0, (n - 1) / 2.0};
  int pol_axis = pol == "x" ? 0 : (pol == "y" ? 1 : 2);
  if (gen == "bump")
    A = vf_bump(n, spacing, center, width, amplitude);
  else if (gen == "mode")
    A = vf_single_mode(n, spacing, m, amplitude, pol_axis);
  else if (gen == "gradient")
    A = vf_gradient(n, spacing, width, amplitude);
  else if (gen == "random")
    A = vf_random_localized_transverse(n, spacing, g.seed, width, amplitude);
  else {
    std::fprintf(stderr, "maxwell: unknown generator %s\n", gen.c_str());
    return kExitUsage;
  }

  json j;
  j["n"] = n;
  j["spacing"] = spacing;
  j["generator"] = gen;
  const double s_spec = wheeler_S_spectral(A);
  j["S_spectral"] = s_spec;
  bool pass = true;
  bool warned = false;

  if (kernel) {
    if (n < 16) {
      std::fprintf(stderr, "maxwell: kernel comparison requires N >= 16\n");
      return kExitUsage;
    }
    const KernelResult kr = wheeler_S_kernel(A);
    const double gap = std::abs(kr.value - s_spec) / std::max(s_spec, kRelGapFloor);
    j["S_kernel"] = kr.value;
    j["kernel_rel_gap"] = gap;
    j["localized_warning"] = kr.localized_warning;
    warned = warned || kr.localized_warning;
    if (s_spec > 1e-12 && gap > tol_kernel) pass = false;
  }
  if (!boost_axis.empty() && boost_axis != "none") {
    const int axis = boost_axis == "x" ? 0 : (boost_axis == "y" ? 1 : 2);
    const BoostCheck bc = boost_identity_check(A, axis);
    j["boost"] = {{"axis", boost_axis},
                  {"lhs", bc.lhs},
                  {"rhs", bc.rhs},
                  {"rel_gap", bc.rel_gap},
                  {"localized_warning", bc.localized_warning}};
    warned = warned || bc.localized_warning;
    if (bc.rel_gap > tol_boost) pass = false;
  }
  j["pass"] = pass;
  maybe_stamp(j, g);
  write_json(j, json_path);
  if (g.strict && warned) return kExitCheckFailed;
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_minimize(const GlobalOpts& g, const DatumOpts& datum, MinimizerOpts mopts,
                 const std::string& warm_path, const std::string& field_path,
                 const std::string& report_path) {
  mopts.cfg.seed = g.seed;
  const LatticeGeometry geom = datum.geometry();
  const BoundaryData bd = datum.build();
  GaugeField warm;
  const GaugeField* warm_ptr = nullptr;
  if (!warm_path.empty()) {
    warm = load_field(warm_path);
    warm_ptr = &warm;
  }
  const MinimizeReport rep = minimize(bd, geom, mopts.cfg, warm_ptr);
  if (!field_path.empty()) save_field(rep.final_field, field_path);
  write_json(report_to_json(rep, g), report_path);
  return rep.converged ? kExitOk : kExitNoConvergence;
}

int cmd_verify(const GlobalOpts& g, const DatumOpts& datum, MinimizerOpts mopts,
               std::string battery, int gauge_samples, double hje_tol, double deriv_tol,
               bool corrupt, const std::string& json_path) {
  SuiteConfig cfg;
  cfg.geom = datum.geometry();
  cfg.datum = datum.build();
  cfg.minimizer = mopts.cfg;
  cfg.seed = g.seed;
  cfg.gauge_samples = gauge_samples;
  if (hje_tol > 0) cfg.hje_tolerance = hje_tol;
  if (deriv_tol > 0) cfg.deriv_tolerance = deriv_tol;
  cfg.corrupt_one_link = corrupt;

  static const std::set<std::string> known{"gauge", "symmetry", "gauss", "hje", "deriv"};
  if (battery == "default" || battery == "all") {
    cfg.battery = {"gauge", "symmetry", "gauss", "hje", "deriv"};
  } else if (battery == "negative") {
    cfg.battery = {"gauss", "hje"};
    cfg.corrupt_one_link = true;
  } else {
    std::stringstream ss(battery);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!known.count(name)) {
        std::fprintf(stderr, "verify: unknown battery name '%s'\n", name.c_str());
        return kExitUsage;
      }
      cfg.battery.push_back(name);
    }
    if (cfg.battery.empty()) {
      std::fprintf(stderr, "verify: empty battery\n");
      return kExitUsage;
    }
  }

  const auto reports = run_suite(cfg);
  json j;
  j["battery"] = battery;
  j["seed"] = g.seed;
  j["checks"] = invariance_to_json(reports);
  j["all_pass"] = all_gating_pass(reports);
  maybe_stamp(j, g);
  write_json(j, json_path);
  for (const auto& r : reports)
    std::fprintf(stderr, "[%s] %-14s rel_gap=%.3e tol=%.3e%s\n", r.pass ? "PASS" : "FAIL",
                 r.check.c_str(), r.rel_gap, r.tolerance,
                 r.error.empty() ? "" : (" error: " + r.error).c_str());
  return all_gating_pass(reports) ? kExitOk : kExitCheckFailed;
}

int cmd_report(const GlobalOpts& g, const std::string& field_path, const std::string& json_path) {
  const GaugeField f = load_field(field_path);
  const LatticeGeometry& geom = f.geometry();
  json j;
  j["file"] = field_path;
  j["group"] = group_name(f.kind());
  j["geometry"] = {{"nt", geom.n_t},
                   {"nx", geom.n_x},
                   {"ny", geom.n_y},
                   {"nz", geom.n_z},
                   {"spacing", geom.spacing}};
  j["S"] = euclidean_action(f);
  j["boundary_digest"] = boundary_digest(extract_boundary(f));
  maybe_stamp(j, g);
  write_json(j, json_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hjym: Hamilton-Jacobi ground state construction for lattice gauge theory"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h; qm uses --h for the grid step

  GlobalOpts g;
  app.add_option("--config", g.config_path, "configuration file ([section] key=value)");
  app.add_option("--seed", g.seed, "seed for all randomized choices");
  app.add_option("--threads", g.threads,
                 "accepted for compatibility; computations are serial and deterministic");
  app.add_flag("--no-timestamp", g.no_timestamp, "omit timestamps from outputs");
  app.add_flag("--strict", g.strict, "treat accuracy warnings as failures");

  // qm ----------------------------------------------------------------
  auto* qm = app.add_subcommand("qm", "anharmonic oscillator ground state and residuals");
  qm->set_help_flag("--help", "print help");
  double lambda = 1.0, xmax = 5.0;
  std::vector<double> hs;
  std::string qm_csv, qm_json;
  qm->add_option("--lambda", lambda, "quartic coupling (> 0)");
  qm->add_option("--h", hs, "grid step(s); repeat for a convergence sweep");
  qm->add_option("--xmax", xmax, "domain half width");
  qm->add_option("--out-csv", qm_csv, "write (x,V,S,psi,residual) table");
  qm->add_option("--out-json", qm_json, "summary path (default: stdout)");

  // maxwell -------------------------------------------------------------
  auto* mx = app.add_subcommand("maxwell", "abelian ground-state functional checks");
  int mw_n = 24;
  double mw_spacing = 1.0, mw_width = 4.0, mw_amp = 0.3;
  std::string mw_gen = "bump", mw_pol = "y", mw_boost = "none", mw_json;
  std::array<int, 3> mw_m{1, 0, 0};
  bool mw_kernel = false;
  double tol_kernel = 0.05, tol_boost = 0.02;
  mx->add_option("--n", mw_n, "grid sites per dimension");
  mx->add_option("--spacing", mw_spacing, "grid spacing");
  mx->add_option("--gen", mw_gen, "field generator: bump|mode|gradient|random");
  mx->add_option("--width", mw_width, "generator width");
  mx->add_option("--amplitude", mw_amp, "generator amplitude");
  mx->add_option("--mx", mw_m[0], "mode integer, x");
  mx->add_option("--my", mw_m[1], "mode integer, y");
  mx->add_option("--mz", mw_m[2], "mode integer, z");
  mx->add_option("--polarization", mw_pol, "mode polarization: x|y|z");
  mx->add_flag("--kernel", mw_kernel, "also evaluate the position-kernel form (N >= 16)");
  mx->add_option("--boost", mw_boost, "boost moment check along x|y|z");
  mx->add_option("--tol-kernel", tol_kernel, "kernel/spectral agreement tolerance");
  mx->add_option("--tol-boost", tol_boost, "boost identity tolerance");
  mx->add_option("--out-json", mw_json, "summary path (default: stdout)");

  // minimize ------------------------------------------------------------
  auto* mn = app.add_subcommand("minimize", "solve the Dirichlet problem for a datum");
  DatumOpts datum;
  MinimizerOpts mopts;
  datum.attach(mn);
  mopts.attach(mn);
  std::string warm_path, field_out, report_out;
  mn->add_option("--warm-start", warm_path, "field file to start from");
  mn->add_option("--out-field", field_out, "write the minimizing field");
  mn->add_option("--out-report", report_out, "report path (default: stdout)");

  // verify --------------------------------------------------------------
  auto* vf = app.add_subcommand("verify", "run an invariance battery");
  DatumOpts vdatum;
  MinimizerOpts vmopts;
  vmopts.cfg.grad_tol = 1e-9;
  vdatum.attach(vf);
  vmopts.attach(vf);
  std::string battery = "default", verify_json;
  int gauge_samples = 3;
  double hje_tol = -1.0, deriv_tol = -1.0;
  bool corrupt = false;
  vf->add_option("--battery", battery, "default|negative|comma list of checks");
  vf->add_option("--gauge-samples", gauge_samples, "random gauge transformations to try");
  vf->add_option("--hje-tolerance", hje_tol, "override the hje gap tolerance");
  vf->add_option("--deriv-tolerance", deriv_tol, "override the derivative gap tolerance");
  vf->add_flag("--corrupt-one-link", corrupt, "negative control: damage the minimizer output");
  vf->add_option("--out-json", verify_json, "report path (default: stdout)");

  // report --------------------------------------------------------------
  auto* rp = app.add_subcommand("report", "summarize a stored field file");
  std::string rp_field, rp_json;
  rp->add_option("--field", rp_field, "field file")->required();
  rp->add_option("--out-json", rp_json, "summary path (default: stdout)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!g.config_path.empty()) {
      g.config = cli::parse_config(g.config_path);
      cli::validate_config(g.config, kConfigSchema, g.config_path);
      datum.from_config(g.config);
      vdatum.from_config(g.config);
      mopts.from_config(g.config);
      vmopts.from_config(g.config);
      cli::get(g.config, "qm", "lambda", lambda);
      cli::get(g.config, "qm", "xmax", xmax);
      std::string hlist;
      cli::get(g.config, "qm", "h", hlist);
      if (!hlist.empty() && hs.empty()) {
        std::stringstream ss(hlist);
        std::string tok;
        while (std::getline(ss, tok, ',')) hs.push_back(std::stod(tok));
      }
      cli::get(g.config, "maxwell", "n", mw_n);
      cli::get(g.config, "maxwell", "spacing", mw_spacing);
      cli::get(g.config, "maxwell", "generator", mw_gen);
      cli::get(g.config, "maxwell", "width", mw_width);
      cli::get(g.config, "maxwell", "amplitude", mw_amp);
      cli::get(g.config, "maxwell", "kernel", mw_kernel);
      cli::get(g.config, "maxwell", "boost_axis", mw_boost);
      cli::get(g.config, "maxwell", "tol_kernel", tol_kernel);
      cli::get(g.config, "maxwell", "tol_boost", tol_boost);
      cli::get(g.config, "verify", "battery", battery);
      cli::get(g.config, "verify", "gauge_samples", gauge_samples);
      cli::get(g.config, "verify", "hje_tolerance", hje_tol);
      cli::get(g.config, "verify", "deriv_tolerance", deriv_tol);
      cli::get(g.config, "output", "field", field_out);
      cli::get(g.config, "output", "report", report_out);
      cli::get(g.config, "output", "csv", qm_csv);
      cli::get(g.config, "output", "json", qm_json);
    }

    if (qm->parsed()) return cmd_qm(g, lambda, hs, xmax, qm_csv, qm_json);
    if (mx->parsed())
      return cmd_maxwell(g, mw_n, mw_spacing, mw_gen, mw_width, mw_amp, mw_m, mw_pol, mw_kernel,
                         mw_boost, tol_kernel, tol_boost, mw_json);
    if (mn->parsed()) return cmd_minimize(g, datum, mopts, warm_path, field_out, report_out);
    if (vf->parsed())
      return cmd_verify(g, vdatum, vmopts, battery, gauge_samples, hje_tol, deriv_tol, corrupt,
                        verify_json);
    if (rp->parsed()) return cmd_report(g, rp_field, rp_json);
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "did not converge: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitUsage;
}
