#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tlab/grid.hpp"

namespace tlab {

/// Lattice offsets and weights of a periodic ball B(0, r).
///
/// A lattice point at torus distance d < r has weight 1, d == r weight 1/2
/// (trapezoid closure of the boundary), otherwise 0. Offsets are enumerated over
/// [-N/2, N/2]^n and folded onto the lattice, so a point reached by two images
/// (the antipode of a radius-L/2 ball) accumulates both weights.
struct BallStencil {
  double radius = 0.0;
  std::vector<std::array<int, 3>> offsets;  // canonical, in [-N/2, N/2)
  std::vector<double> weights;
  double weight_sum = 0.0;

  std::size_t size() const { return offsets.size(); }
  /// Lattice measure of the ball: weight_sum * cell volume.
  double measure(const TorusGrid& grid) const { return weight_sum * grid.cell_volume(); }
};

BallStencil make_ball_stencil(const TorusGrid& grid, double radius);

/// Discrete set of boxes B(x0, r) x (0, height(r)) over which norm suprema run.
struct BoxFamily {
  TorusGrid grid;
  std::vector<std::size_t> centers;  // flat lattice indices
  std::vector<double> radii;         // decreasing
  // construction parameters, kept for reports
  int j_min = 1;
  int j_max = 1;
  int stride = 1;
  double scale = 1.0;  // 1 for dyadic families, 1/lambda after rescaling

  /// Radii L 2^-j for j = j_min..j_max, centers on the stride-subsampled lattice.
  static BoxFamily dyadic(const TorusGrid& grid, int j_min, int j_max, int stride);
  /// j = 1..log2(N)-1, stride max(1, N/32).
  static BoxFamily standard(const TorusGrid& grid);
  /// Every lattice point and every dyadic radius down to two cells.
  static BoxFamily full(const TorusGrid& grid);

  /// Image of the family under x -> x / 2 (radii halved, center indices halved).
  /// Used for lattice-exact lambda = 2 scaling checks; needs even center indices.
  BoxFamily halved() const;

  std::size_t box_count() const { return centers.size() * radii.size(); }
};

int log2_exact(int n);

}  // namespace tlab
