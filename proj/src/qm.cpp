#include "hjym/qm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjym/detail/ksum.hpp"

namespace hjym {

using detail::KSum;

void PotentialGrid::validate() const {
  if (n() < 9) throw std::invalid_argument("potential grid too small");
  if (!(h > 0.0)) throw std::invalid_argument("potential grid spacing must be > 0");
  if (i_star < 0 || i_star >= n()) throw std::invalid_argument("x_star off the grid");
  for (double v : V)
    if (!(v >= 0.0)) throw std::invalid_argument("invalid-potential: V must be >= 0 everywhere");
  if (V[i_star] > 1e-14)
    throw std::invalid_argument("invalid-potential: no zero minimum at x_star");
}

PotentialGrid make_anharmonic_grid(double lambda, double x_min, double x_max, double h) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  PotentialGrid g;
  g.x_min = x_min;
  g.h = h;
  const int n = (int)std::llround((x_max - x_min) / h) + 1;
  g.V.resize(n);
  g.i_star = (int)std::llround((0.0 - x_min) / h);
  for (int i = 0; i < n; ++i) {
    const double x = g.x(i) - g.x(g.i_star);  // center exactly on the grid zero
    g.V[i] = 0.5 * x * x + 0.25 * lambda * x * x * x * x;
  }
  g.V[g.i_star] = 0.0;
  return g;
}

PrincipalFunction1D solve_hje_1d(const PotentialGrid& pot) {
  pot.validate();
  const int n = pot.n();
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::sqrt(2.0 * pot.V[i]);

  PrincipalFunction1D out;
  out.x_min = pot.x_min;
  out.h = pot.h;
  out.i_star = pot.i_star;
  out.S.assign(n, 0.0);
  const double h = pot.h;

  // March outward from i_star.  Even offsets get full Simpson panels; the
  // odd point next to the frontier uses the 3-point end rule
  //   int_{x0}^{x1} f = h/12 (5 f0 + 8 f1 - f2) + O(h^4),
  // falling back to a trapezoid when curvature would drive it negative.
  auto odd_step = [&](double f0, double f1, double f2) {
    const double v = h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
    return v >= 0.0 ? v : 0.5 * h * (f0 + f1);
  };
  for (int i = pot.i_star + 2; i < n; i += 2)
    out.S[i] = out.S[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  for (int i = pot.i_star + 1; i < n; i += 2)
    out.S[i] = out.S[i - 1] + (i + 1 < n ? odd_step(f[i - 1], f[i], f[i + 1])
                                         : 0.5 * h * (f[i - 1] + f[i]));
  for (int i = pot.i_star - 2; i >= 0; i -= 2)
    out.S[i] = out.S[i + 2] + h / 3.0 * (f[i + 2] + 4.0 * f[i + 1] + f[i]);
  for (int i = pot.i_star - 1; i >= 0; i -= 2)
    out.S[i] = out.S[i + 1] + (i - 1 >= 0 ? odd_step(f[i + 1], f[i], f[i - 1])
                                          : 0.5 * h * (f[i + 1] + f[i]));
  return out;
}

double anharmonic_S(double x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("anharmonic_S: lambda must be > 0");
  const double u = 0.5 * lambda * x * x;
  if (lambda < 1e-6) {
    // series in lambda: x^2/2 + lambda x^4/16 - lambda^2 x^6/192
    const double x2 = x * x;
    return 0.5 * x2 + lambda * x2 * x2 / 16.0 - lambda * lambda * x2 * x2 * x2 / 192.0;
  }
  return 2.0 / (3.0 * lambda) * (std::pow(1.0 + u, 1.5) - 1.0);
}

std::vector<double> ground_state(const PrincipalFunction1D& s) {
  const int n = (int)s.S.size();
  if (n == 0) throw std::invalid_argument("empty principal function");
  const double s_min = *std::min_element(s.S.begin(), s.S.end());
  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) psi[i] = std::exp(-(s.S[i] - s_min));
  KSum norm2;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    norm2.add(w * psi[i] * psi[i] * s.h);
  }
  const double inv = 1.0 / std::sqrt(norm2.value());
  for (auto& v : psi) v *= inv;
  return psi;
}

double nno_residual(const PotentialGrid& pot, const PrincipalFunction1D& s,
                    const std::vector<double>& psi) {
  const int n = pot.n();
  if ((int)s.S.size() != n || (int)psi.size() != n || s.h != pot.h)
    throw std::invalid_argument("nno_residual: grid mismatch");
  const double h = pot.h;
  const double peak = *std::max_element(psi.begin(), psi.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double cut = 1e-16 * std::abs(peak);

  // u = S' psi + psi', then r = 1/2 (S' u - u'), centered stencils.
  std::vector<double> u(n, 0.0);
  std::vector<char> valid(n, 0);
  for (int i = 1; i + 1 < n; ++i) {
    if (std::abs(psi[i]) < cut) continue;
    const double sp = (s.S[i + 1] - s.S[i - 1]) / (2.0 * h);
    const double pp = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
    u[i] = sp * psi[i] + pp;
    valid[i] = 1;
  }
  KSum r2, p2;
  for (int i = 2; i + 2 < n; ++i) {
    if (!valid[i - 1] || !valid[i] || !valid[i + 1]) continue;
    const double sp = (s.S[i + 1] - s.S[i - 1]) / (2.0 * h);
    const double up = (u[i + 1] - u[i - 1]) / (2.0 * h);
    const double r = 0.5 * (sp * u[i] - up);
    r2.add(r * r);
    p2.add(psi[i] * psi[i]);
  }
  if (!(p2.value() > 0.0)) throw std::invalid_argument("nno_residual: wavefunction vanishes");
  return std::sqrt(r2.value() / p2.value());
}

double hje_max_residual(const PotentialGrid& pot, const PrincipalFunction1D& s) {
  const int n = pot.n();
  if ((int)s.S.size() != n) throw std::invalid_argument("hje_max_residual: grid mismatch");
  double m = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double sp = (s.S[i + 1] - s.S[i - 1]) / (2.0 * pot.h);
    m = std::max(m, std::abs(0.5 * sp * sp - pot.V[i]));
  }
  return m;
}

double conventional_ordering_energy(const PotentialGrid& pot, const std::vector<double>& psi) {
  const int n = pot.n();
  if ((int)psi.size() != n) throw std::invalid_argument("grid mismatch");
  KSum num, den;
  for (int i = 1; i + 1 < n; ++i) {
    const double pp = (psi[i + 1] - psi[i - 1]) / (2.0 * pot.h);
    num.add((0.5 * pp * pp + pot.V[i] * psi[i] * psi[i]) * pot.h);
    den.add(psi[i] * psi[i] * pot.h);
  }
  return num.value() / den.value();
}

}  // namespace hjym
