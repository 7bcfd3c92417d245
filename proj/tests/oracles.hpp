#pragma once

// Independent reference computations for the tests: direct DFT sums, brute
// force ball loops over every lattice image, closed-form time integrals.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tlab/grid.hpp"

namespace oracle {

using tlab::Complex;
using tlab::Field;
using tlab::TorusGrid;

inline constexpr double pi = std::numbers::pi;

inline std::array<int, 3> index_of(const TorusGrid& g, std::size_t flat) {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = g.dims - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % g.points_per_axis);
    flat /= g.points_per_axis;
  }
  return idx;
}

inline int signed_freq(int i, int n) { return i < n / 2 ? i : i - n; }

/// c(k) = N^{-n} sum_x f(x) e^{-2 pi i k.x/L}, O(size^2).
inline std::vector<Complex> dft(const Field& f) {
  const auto& g = f.grid();
  const int n = g.points_per_axis;
  std::vector<Complex> c(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto ki = index_of(g, k);
    Complex s = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      const auto xi = index_of(g, x);
      double phase = 0.0;
      for (int d = 0; d < g.dims; ++d) phase += double(ki[d]) * xi[d] / n;
      s += f[x] * std::polar(1.0, -2.0 * pi * phase);
    }
    c[k] = s / double(g.size());
  }
  return c;
}

/// Weight of lattice point x in the closed periodic ball B(c, r): each image
/// x + mL with every component offset in [-L/2, L/2] counts 1 inside, 1/2 on the sphere.
inline double ball_weight(const TorusGrid& g, std::size_t c, std::size_t x, double r) {
  const auto ci = index_of(g, c), xi = index_of(g, x);
  const int n = g.points_per_axis;
  const double h = g.spacing();
  double w = 0.0;
  const int reach = g.dims >= 2 ? 1 : 0;
  for (int m0 = -1; m0 <= 1; ++m0)
    for (int m1 = -reach; m1 <= reach; ++m1)
      for (int m2 = -(g.dims >= 3 ? 1 : 0); m2 <= (g.dims >= 3 ? 1 : 0); ++m2) {
        const std::array<int, 3> m{m0, m1, m2};
        double d2 = 0.0;
        bool inside_cell = true;
        for (int d = 0; d < g.dims; ++d) {
          const int o = xi[d] - ci[d] + m[d] * n;
          if (o < -n / 2 || o > n / 2) inside_cell = false;
          d2 += (o * h) * (o * h);
        }
        if (!inside_cell) continue;
        const double dist = std::sqrt(d2);
        const double tol = 1e-12 * r;
        if (dist < r - tol) w += 1.0;
        else if (std::abs(dist - r) <= tol) w += 0.5;
      }
  return w;
}

inline double torus_distance(const TorusGrid& g, std::size_t a, std::size_t b) {
  const auto ai = index_of(g, a), bi = index_of(g, b);
  const int n = g.points_per_axis;
  double d2 = 0.0;
  for (int d = 0; d < g.dims; ++d) {
    int o = std::abs(ai[d] - bi[d]) % n;
    o = std::min(o, n - o);
    d2 += (o * g.spacing()) * (o * g.spacing());
  }
  return std::sqrt(d2);
}

/// r^{-(n+2a)} sum_x w (f - f_B)^2 h^n, maximised over centers and radii, square-rooted.
inline double campanato(const Field& f, double alpha, const std::vector<std::size_t>& centers,
                        const std::vector<double>& radii) {
  const auto& g = f.grid();
  double best = 0.0;
  for (double r : radii)
    for (std::size_t c : centers) {
      double W = 0.0, S = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) {
        const double w = ball_weight(g, c, x, r);
        W += w;
        S += w * f[x];
      }
      const double mean = S / W;
      double O = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) O += ball_weight(g, c, x, r) * (f[x] - mean) * (f[x] - mean);
      best = std::max(best, std::pow(r, -(g.dims + 2.0 * alpha)) * O * g.cell_volume());
    }
  return std::sqrt(best);
}

/// Double loop over all lattice pairs; power < 0 means no distance kernel.
inline double pair_box(const Field& f, std::size_t c, double r, double power) {
  const auto& g = f.grid();
  std::vector<double> w(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) w[x] = ball_weight(g, c, x, r);
  double s = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (w[x] == 0.0) continue;
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (y == x || w[y] == 0.0) continue;
      const double diff = f[x] - f[y];
      const double kernel = power < 0.0 ? 1.0 : std::pow(torus_distance(g, x, y), -power);
      s += w[x] * w[y] * diff * diff * kernel;
    }
  }
  return s * g.cell_volume() * g.cell_volume();
}

inline double campanato_pair(const Field& f, double alpha, const std::vector<std::size_t>& centers,
                             const std::vector<double>& radii) {
  const int n = f.grid().dims;
  double best = 0.0;
  for (double r : radii)
    for (std::size_t c : centers) best = std::max(best, std::pow(r, -2.0 * (alpha + n)) * pair_box(f, c, r, -1.0));
  return std::sqrt(best);
}

inline double q_norm(const Field& f, double beta, const std::vector<std::size_t>& centers,
                     const std::vector<double>& radii) {
  const int n = f.grid().dims;
  double best = 0.0;
  for (double r : radii)
    for (std::size_t c : centers)
      best = std::max(best, std::pow(r, 2.0 * beta - n) * pair_box(f, c, r, n + 2.0 * beta));
  return std::sqrt(best);
}

/// sum_x w(x) g(x) h^n over the ball B(c, r).
template <class G>
double ball_integral(const TorusGrid& grid, std::size_t c, double r, G&& g) {
  double s = 0.0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const double w = ball_weight(grid, c, x, r);
    if (w != 0.0) s += w * g(grid.coordinates(x));
  }
  return s * grid.cell_volume();
}

/// int_0^H t^p e^{-c t} dt via the lower incomplete gamma function.
inline double exp_moment(double p, double c, double H) {
  if (c == 0.0) return std::pow(H, p + 1.0) / (p + 1.0);
  return boost::math::tgamma_lower(p + 1.0, c * H) / std::pow(c, p + 1.0);
}

inline Field random_field(const TorusGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(rng);
  return f;
}

}  // namespace oracle
