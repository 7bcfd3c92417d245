#include "tlab/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tlab {

int log2_exact(int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("log2_exact: not a power of two");
  int j = 0;
  while ((1 << j) < n) ++j;
  return j;
}

BallStencil make_ball_stencil(const TorusGrid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (radius > 0.5 * grid.period * (1.0 + 1e-12))
    throw std::invalid_argument("ball radius must not exceed L/2");
  const int n = grid.points_per_axis;
  const int half = n / 2;
  const double h = grid.spacing();
  const double tol = 1e-12 * radius;
  const int reach = std::min(half, static_cast<int>(std::ceil(radius / h)) + 1);

  std::map<std::array<int, 3>, double> folded;
  std::array<int, 3> o{0, 0, 0};
  auto visit = [&](auto&& self, int axis) -> void {
    if (axis == grid.dims) {
      double d2 = 0.0;
      for (int d = 0; d < grid.dims; ++d) d2 += double(o[d]) * o[d];
      const double dist = std::sqrt(d2) * h;
      double w = 0.0;
      if (dist < radius - tol) w = 1.0;
      else if (dist <= radius + tol) w = 0.5;
      if (w == 0.0) return;
      std::array<int, 3> key{0, 0, 0};
      for (int d = 0; d < grid.dims; ++d) key[d] = o[d] == half ? -half : o[d];
      folded[key] += w;
      return;
    }
    for (int v = -reach; v <= reach; ++v) {
      o[axis] = v;
      self(self, axis + 1);
    }
    o[axis] = 0;
  };
  visit(visit, 0);

  BallStencil s;
  s.radius = radius;
  for (const auto& [off, w] : folded) {
    s.offsets.push_back(off);
    s.weights.push_back(w);
    s.weight_sum += w;
  }
  return s;
}

BoxFamily BoxFamily::dyadic(const TorusGrid& grid, int j_min, int j_max, int stride) {
  if (j_min < 1 || j_max < j_min) throw std::invalid_argument("BoxFamily: need 1 <= j_min <= j_max");
  if (stride < 1 || grid.points_per_axis % stride != 0)
    throw std::invalid_argument("BoxFamily: stride must divide the points per axis");
  BoxFamily fam;
  fam.grid = grid;
  fam.j_min = j_min;
  fam.j_max = j_max;
  fam.stride = stride;
  for (int j = j_min; j <= j_max; ++j) fam.radii.push_back(std::ldexp(grid.period, -j));
  if (fam.radii.back() < grid.spacing())
    throw std::invalid_argument("BoxFamily: smallest radius is below one lattice spacing");
  // coverage: every lattice point within the largest radius of some center
  const double reach = 0.5 * stride * grid.spacing() * std::sqrt(double(grid.dims));
  if (fam.radii.front() < reach) throw std::invalid_argument("BoxFamily: stride too coarse to cover the lattice");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    bool on = true;
    for (int d = 0; d < grid.dims; ++d) on = on && idx[d] % stride == 0;
    if (on) fam.centers.push_back(i);
  }
  return fam;
}

BoxFamily BoxFamily::standard(const TorusGrid& grid) {
  const int n = grid.points_per_axis;
  return dyadic(grid, 1, std::max(1, log2_exact(n) - 1), std::max(1, n / 32));
}

BoxFamily BoxFamily::full(const TorusGrid& grid) {
  return dyadic(grid, 1, std::max(1, log2_exact(grid.points_per_axis) - 1), 1);
}

BoxFamily BoxFamily::halved() const {
  BoxFamily out = *this;
  out.scale = scale * 0.5;
  for (auto& r : out.radii) r *= 0.5;
  if (out.radii.back() < grid.spacing())
    throw std::invalid_argument("BoxFamily::halved: smallest radius drops below one lattice spacing");
  out.centers.clear();
  for (auto c : centers) {
    auto idx = grid.unflatten(c);
    for (int d = 0; d < grid.dims; ++d) {
      if (idx[d] % 2 != 0) throw std::invalid_argument("BoxFamily::halved: odd center index");
      idx[d] /= 2;
    }
    out.centers.push_back(grid.flatten(idx));
  }
  return out;
}

}  // namespace tlab
