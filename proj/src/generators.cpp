#include "hjym/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hjym {

namespace {

constexpr double kPi = std::numbers::pi;

long slice_index(int n_y, int n_z, int x, int y, int z) {
  return (1L * x * n_y + y) * n_z + z;
}

Quat su2_color_link(double theta, int color) {
  Vec3 c{0, 0, 0};
  c[color] = theta;
  return su2_exp(c);
}

double min_image_d(double d, int n) {
  d = std::fmod(d, (double)n);
  if (d < -n / 2.0) d += n;
  if (d > n / 2.0) d -= n;
  return d;
}

template <class F>
BoundaryData fill_boundary(int n_x, int n_y, int n_z, double spacing, GroupKind kind, int color,
                           F&& theta_of) {
  BoundaryData bd = BoundaryData::flat(n_x, n_y, n_z, spacing, kind);
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int z = 0; z < n_z; ++z) {
        const long s = slice_index(n_y, n_z, x, y, z);
        for (int i = 0; i < 3; ++i) {
          const double th = theta_of(x, y, z, i);
          if (kind == GroupKind::U1)
            std::get<std::vector<double>>(bd.links)[s * 3 + i] = th;
          else
            std::get<std::vector<Quat>>(bd.links)[s * 3 + i] = su2_color_link(th, color);
        }
      }
  return bd;
}

}  // namespace

BoundaryData single_mode_boundary(int n_x, int n_y, int n_z, double spacing, GroupKind kind,
                                  const std::array<int, 3>& m, double amplitude, int pol_axis,
                                  int color) {
  if (pol_axis < 0 || pol_axis > 2) throw std::invalid_argument("polarization axis must be 0..2");
  if (m[pol_axis] != 0)
    throw std::invalid_argument("single mode: polarization must be transverse (m_pol = 0)");
  if (m[0] == 0 && m[1] == 0 && m[2] == 0)
    throw std::invalid_argument("single mode: zero wavevector");
  const int ext[3] = {n_x, n_y, n_z};
  return fill_boundary(n_x, n_y, n_z, spacing, kind, color, [&](int x, int y, int z, int i) {
    if (i != pol_axis) return 0.0;
    const int c[3] = {x, y, z};
    double phase = 0.0;
    for (int a = 0; a < 3; ++a) phase += 2.0 * kPi * m[a] * c[a] / ext[a];
    return spacing * amplitude * std::cos(phase);
  });
}

BoundaryData localized_bump_boundary(int n_x, int n_y, int n_z, double spacing, GroupKind kind,
                                     const std::array<double, 3>& center, double width,
                                     double amplitude, int color) {
  if (!(width > 0.0)) throw std::invalid_argument("bump width must be > 0");
  const int ext[3] = {n_x, n_y, n_z};
  return fill_boundary(n_x, n_y, n_z, spacing, kind, color, [&](int x, int y, int z, int i) {
    if (i == 2) return 0.0;  // ring in the (x,y) plane
    const int c[3] = {x, y, z};
    double d[3];
    for (int a = 0; a < 3; ++a) d[a] = min_image_d(c[a] - center[a], ext[a]);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const double env = amplitude * std::exp(-0.5 * r2 / (width * width)) / width;
    return spacing * (i == 0 ? -env * d[1] : env * d[0]);
  });
}

VectorFieldGrid vf_single_mode(int n, double spacing, const std::array<int, 3>& m,
                               double amplitude, int pol_axis) {
  if (m[pol_axis] != 0) throw std::invalid_argument("single mode: m_pol must be 0");
  VectorFieldGrid A = VectorFieldGrid::zero(n, spacing);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int c[3] = {x, y, z};
        double phase = 0.0;
        for (int a = 0; a < 3; ++a) phase += 2.0 * kPi * m[a] * c[a] / n;
        A.comp[pol_axis][A.idx(x, y, z)] = amplitude * std::cos(phase);
      }
  return A;
}

VectorFieldGrid vf_bump(int n, double spacing, const std::array<double, 3>& center, double width,
                        double amplitude) {
  VectorFieldGrid A = VectorFieldGrid::zero(n, spacing);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const int c[3] = {x, y, z};
        double d[3];
        for (int a = 0; a < 3; ++a) d[a] = min_image_d(c[a] - center[a], n);
        const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        const double env = amplitude * std::exp(-0.5 * r2 / (width * width)) / width;
        const long i = A.idx(x, y, z);
        A.comp[0][i] = -env * d[1];
        A.comp[1][i] = env * d[0];
      }
  return A;
}

VectorFieldGrid vf_gradient(int n, double spacing, double width, double amplitude) {
  // A = spectral gradient of a gaussian scalar at the grid center
  std::vector<double> phi(1L * n * n * n, 0.0);
  const double mid = (n - 1) / 2.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const double dx = x - mid, dy = y - mid, dz = z - mid;
        phi[(1L * x * n + y) * n + z] =
            amplitude * std::exp(-0.5 * (dx * dx + dy * dy + dz * dz) / (width * width));
      }
  return spectral_gradient(phi, n, spacing);
}

VectorFieldGrid reflect_field(const VectorFieldGrid& A, int axis) {
  VectorFieldGrid out = VectorFieldGrid::zero(A.n, A.spacing);
  for (int x = 0; x < A.n; ++x)
    for (int y = 0; y < A.n; ++y)
      for (int z = 0; z < A.n; ++z) {
        int c[3] = {x, y, z};
        c[axis] = A.n - 1 - c[axis];
        const long src = A.idx(x, y, z);
        const long dst = A.idx(c[0], c[1], c[2]);
        for (int j = 0; j < 3; ++j) out.comp[j][dst] = (j == axis ? -1.0 : 1.0) * A.comp[j][src];
      }
  return out;
}

VectorFieldGrid vf_random_localized_transverse(int n, double spacing, std::uint64_t seed,
                                               double width, double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double mid = (n - 1) / 2.0;

  // potential W: three components, each a few gaussian bumps near the center
  VectorFieldGrid W = VectorFieldGrid::zero(n, spacing);
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < 3; ++b) {
      const double amp = gauss(rng);
      const double cx = mid + width * uni(rng), cy = mid + width * uni(rng),
                   cz = mid + width * uni(rng);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            const double dx = x - cx, dy = y - cy, dz = z - cz;
            W.comp[c][W.idx(x, y, z)] +=
                amp * std::exp(-0.5 * (dx * dx + dy * dy + dz * dz) / (width * width));
          }
    }
  }
  VectorFieldGrid A = spectral_curl(W);
  double peak = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double v : A.comp[c]) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (int c = 0; c < 3; ++c)
      for (double& v : A.comp[c]) v *= amplitude / peak;
  return A;
}

SliceField random_slice_perturbation(GroupKind kind, int n_x, int n_y, int n_z,
                                     std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SliceField h;
  h.kind = kind;
  h.n_x = n_x;
  h.n_y = n_y;
  h.n_z = n_z;
  h.data.resize(h.slice_sites() * 3);
  for (auto& a : h.data) {
    a.kind = kind;
    if (kind == GroupKind::U1) {
      a.c = {amplitude * uni(rng), 0.0, 0.0};
    } else {
      a.c = {amplitude * uni(rng), amplitude * uni(rng), amplitude * uni(rng)};
    }
  }
  return h;
}

SliceField mode_slice_perturbation(GroupKind kind, int n_x, int n_y, int n_z,
                                   const std::array<int, 3>& m, double amplitude, int pol_axis,
                                   int color) {
  if (m[pol_axis] != 0) throw std::invalid_argument("mode perturbation: m_pol must be 0");
  SliceField h;
  h.kind = kind;
  h.n_x = n_x;
  h.n_y = n_y;
  h.n_z = n_z;
  h.data.resize(h.slice_sites() * 3);
  const int ext[3] = {n_x, n_y, n_z};
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int z = 0; z < n_z; ++z) {
        const long s = slice_index(n_y, n_z, x, y, z);
        const int c[3] = {x, y, z};
        double phase = 0.0;
        for (int a = 0; a < 3; ++a) phase += 2.0 * kPi * m[a] * c[a] / ext[a];
        for (int i = 0; i < 3; ++i) {
          AlgebraElement& a = h.data[s * 3 + i];
          a.kind = kind;
          a.c = {0, 0, 0};
          if (i == pol_axis) {
            const double v = amplitude * std::cos(phase);
            if (kind == GroupKind::U1)
              a.c[0] = v;
            else
              a.c[color] = v;
          }
        }
      }
  return h;
}

}  // namespace hjym
