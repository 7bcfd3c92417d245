#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "tlab/boxes.hpp"
#include "tlab/grid.hpp"

/// Per-box reduction kernels behind every norm.
///
/// Each kernel has a serial reference and an OpenMP version over centers that
/// must agree to rounding; `ball_sums` also has an FFT-convolution variant for
/// families with a center at every lattice point.
namespace tlab::kernels {

enum class Backend { automatic, serial, omp, spectral };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view name);

/// S(c) = sum_o w_o v(c + o) for each center c.
std::vector<double> ball_sums_serial(const TorusGrid& grid, std::span<const double> v,
                                     const BallStencil& ball, std::span<const std::size_t> centers);
std::vector<double> ball_sums_omp(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                  std::span<const std::size_t> centers);
std::vector<double> ball_sums_spectral(const TorusGrid& grid, std::span<const double> v,
                                       const BallStencil& ball, std::span<const std::size_t> centers);
std::vector<double> ball_sums(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                              std::span<const std::size_t> centers, Backend backend = Backend::automatic);

/// O(c) = sum_o w_o (v(c+o) - v_B)^2 with v_B the weighted ball average.
std::vector<double> ball_oscillation_serial(const TorusGrid& grid, std::span<const double> v,
                                            const BallStencil& ball, std::span<const std::size_t> centers);
std::vector<double> ball_oscillation_omp(const TorusGrid& grid, std::span<const double> v,
                                         const BallStencil& ball, std::span<const std::size_t> centers);
std::vector<double> ball_oscillation(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                     std::span<const std::size_t> centers, Backend backend = Backend::automatic);

/// P(c) = sum_{x != y in ball} w_x w_y |v(x) - v(y)|^2 |x - y|^{-power},
/// |x - y| the minimal-image torus distance.
std::vector<double> pair_sums_serial(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                     std::span<const std::size_t> centers, double power);
std::vector<double> pair_sums_omp(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                                  std::span<const std::size_t> centers, double power);
std::vector<double> pair_sums(const TorusGrid& grid, std::span<const double> v, const BallStencil& ball,
                              std::span<const std::size_t> centers, double power,
                              Backend backend = Backend::automatic);

}  // namespace tlab::kernels
