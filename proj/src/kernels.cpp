#include "tlab/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace tlab::kernels {

namespace {

// Flat lattice index of center + offset with periodic wrap (N is a power of two).
struct Wrapper {
  int dims;
  int n;
  int mask;
  explicit Wrapper(const TorusGrid& g) : dims(g.dims), n(g.points_per_axis), mask(g.points_per_axis - 1) {}

  std::size_t operator()(const std::array<int, 3>& c, const std::array<int, 3>& o) const {
    std::size_t flat = 0;
    for (int d = 0; d < dims; ++d) flat = flat * n + static_cast<std::size_t>((c[d] + o[d]) & mask);
    return flat;
  }
};

void check_sizes(const TorusGrid& grid, std::span<const double> v) {
  if (v.size() != grid.size()) throw std::invalid_argument("kernel: value array does not match the grid");
}

double ball_sum_at(const TorusGrid& grid, const Wrapper& wrap, std::span<const double> v, const BallStencil& ball,
                   std::size_t center) {
  const auto c = grid.unflatten(center);
  double s = 0.0;
  for (std::size_t j = 0; j < ball.size(); ++j) s += ball.weights[j] * v[wrap(c, ball.offsets[j])];
  return s;
}

double oscillation_at(const TorusGrid& grid, const Wrapper& wrap, std::span<const double> v,
                      const BallStencil& ball, std::size_t center) {
  const auto c = grid.unflatten(center);
  double mean = 0.0;
  for (std::size_t j = 0; j < ball.size(); ++j) mean += ball.weights[j] * v[wrap(c, ball.offsets[j])];
  mean /= ball.weight_sum;
  double s = 0.0;
  for (std::size_t j = 0; j < ball.size(); ++j) {
    const double dv = v[wrap(c, ball.offsets[j])] - mean;
    s += ball.weights[j] * dv * dv;
  }
  return s;
}

// |d|^{-power} for every wrapped lattice difference d (minimal image), 0 at d = 0.
std::vector<double> distance_table(const TorusGrid& grid, double power) {
  std::vector<double> table(grid.size(), 0.0);
  const double h = grid.spacing();
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double d2 = 0.0;
    for (int d = 0; d < grid.dims; ++d) {
      const double k = grid.frequency(idx[d]);  // minimal image offset in cells
      d2 += k * k;
    }
    table[i] = std::pow(std::sqrt(d2) * h, -power);
  }
  return table;
}

double pair_sum_at(const TorusGrid& grid, const Wrapper& wrap, std::span<const double> v, const BallStencil& ball,
                   const std::vector<double>& table, std::size_t center, std::vector<double>& vals) {
  const auto c = grid.unflatten(center);
  const std::size_t m = ball.size();
  vals.resize(m);
  for (std::size_t a = 0; a < m; ++a) vals[a] = v[wrap(c, ball.offsets[a])];
  double s = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    const auto& oa = ball.offsets[a];
    double row = 0.0;
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto& ob = ball.offsets[b];
      const std::array<int, 3> diff{oa[0] - ob[0], oa[1] - ob[1], oa[2] - ob[2]};
      const double dv = vals[a] - vals[b];
      row += ball.weights[b] * dv * dv * table[wrap({0, 0, 0}, diff)];
    }
    s += ball.weights[a] * row;
  }
  return 2.0 * s;
}

bool prefer_spectral(const TorusGrid& grid, const BallStencil& ball, std::size_t centers) {
  const double direct = double(centers) * double(ball.size());
  const double fft = 8.0 * double(grid.size()) * std::log2(double(grid.size()) + 1.0);
  return direct > fft;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::automatic: return "automatic";
    case Backend::serial: return "serial";
    case Backend::omp: return "omp";
    case Backend::spectral: return "spectral";
  }
  return "automatic";
}

Backend backend_from_string(std::string_view name) {
  if (name == "automatic") return Backend::automatic;
  if (name == "serial") return Backend::serial;
  if (name == "omp") return Backend::omp;
  if (name == "spectral") return Backend::spectral;
  throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

std::vector<double> ball_sums_serial(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                     std::span<const std::size_t> centers) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) out[i] = ball_sum_at(grid, wrap, v, ball, centers[i]);
  return out;
}

std::vector<double> ball_sums_omp(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                  std::span<const std::size_t> centers) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  std::vector<double> out(centers.size());
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = ball_sum_at(grid, wrap, v, ball, centers[i]);
  return out;
}

std::vector<double> ball_sums_spectral(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                       std::span<const std::size_t> centers) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  std::vector<Complex> kernel(grid.size()), values(v.begin(), v.end()), kh(grid.size()), vh(grid.size());
  for (std::size_t j = 0; j < ball.size(); ++j) kernel[wrap({0, 0, 0}, ball.offsets[j])] += ball.weights[j];
  detail::dft(grid, kernel, kh, -1);
  detail::dft(grid, values, vh, -1);
  // correlation: S(c) = sum_y K(y - c) v(y)
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < vh.size(); ++i) vh[i] *= std::conj(kh[i]) * scale;
  detail::dft(grid, vh, values, +1);
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) out[i] = values[centers[i]].real();
  return out;
}

std::vector<double> ball_sums(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                              std::span<const std::size_t> centers, Backend backend) {
  switch (backend) {
    case Backend::serial: return ball_sums_serial(grid, v, ball, centers);
    case Backend::omp: return ball_sums_omp(grid, v, ball, centers);
    case Backend::spectral: return ball_sums_spectral(grid, v, ball, centers);
    case Backend::automatic: break;
  }
  return prefer_spectral(grid, ball, centers.size()) ? ball_sums_spectral(grid, v, ball, centers)
                                                     : ball_sums_omp(grid, v, ball, centers);
}

std::vector<double> ball_oscillation_serial(const TorusGrid& grid, std::span<const double> v,
                                            const BallStencil& ball, std::span<const std::size_t> centers) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) out[i] = oscillation_at(grid, wrap, v, ball, centers[i]);
  return out;
}

std::vector<double> ball_oscillation_omp(const TorusGrid& grid, std::span<const double> v,
                                         const BallStencil& ball, std::span<const std::size_t> centers) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  std::vector<double> out(centers.size());
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = oscillation_at(grid, wrap, v, ball, centers[i]);
  return out;
}

std::vector<double> ball_oscillation(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                     std::span<const std::size_t> centers, Backend backend) {
  switch (backend) {
    case Backend::serial: return ball_oscillation_serial(grid, v, ball, centers);
    case Backend::omp: return ball_oscillation_omp(grid, v, ball, centers);
    case Backend::spectral:
    case Backend::automatic: break;
  }
  if (backend == Backend::automatic && !prefer_spectral(grid, ball, centers.size()))
    return ball_oscillation_omp(grid, v, ball, centers);
  // sum w (v - v_B)^2 = S2 - S1^2 / W
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  const auto s1 = ball_sums_spectral(grid, v, ball, centers);
  const auto s2 = ball_sums_spectral(grid, sq, ball, centers);
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, s2[i] - s1[i] * s1[i] / ball.weight_sum);
  return out;
}

std::vector<double> pair_sums_serial(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                     std::span<const std::size_t> centers, double power) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  const auto table = distance_table(grid, power);
  std::vector<double> out(centers.size()), scratch;
  for (std::size_t i = 0; i < centers.size(); ++i)
    out[i] = pair_sum_at(grid, wrap, v, ball, table, centers[i], scratch);
  return out;
}

std::vector<double> pair_sums_omp(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                  std::span<const std::size_t> centers, double power) {
  check_sizes(grid, v);
  const Wrapper wrap(grid);
  const auto table = distance_table(grid, power);
  std::vector<double> out(centers.size());
  const auto n = static_cast<std::ptrdiff_t>(centers.size());
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = pair_sum_at(grid, wrap, v, ball, table, centers[i], scratch);
  }
  return out;
}

std::vector<double> pair_sums(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                              std::span<const std::size_t> centers, double power, Backend backend) {
  if (backend == Backend::serial) return pair_sums_serial(grid, v, ball, centers, power);
  return pair_sums_omp(grid, v, ball, centers, power);
}

}  // namespace tlab::kernels
