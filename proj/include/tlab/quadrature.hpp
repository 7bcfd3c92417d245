#pragma once

#include <cstddef>
#include <vector>

namespace tlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// q-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int q);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int q, double a, double b);

/// Dyadic-panel Gauss mesh on (r_max 2^-M, r_max].
///
/// Panel m covers [r_max 2^-(m+1), r_max 2^-m], m = 0..M-1. Nodes are stored in
/// increasing order, so the nodes at or below a panel boundary form a prefix.
struct TimeMesh {
  double r_max = 0.0;
  int panels = 0;
  int nodes_per_panel = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static TimeMesh dyadic(double r_max, int panels = 20, int nodes_per_panel = 8);

  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
  double t_floor() const;
  double panel_top(int m) const;

  /// m with r_max 2^-m equal to `height` (relative 1e-12). Throws
  /// std::invalid_argument if the height is not a panel boundary of this mesh.
  int panel_for_height(double height) const;
  /// Number of leading nodes lying in (t_floor, r_max 2^-m].
  std::size_t nodes_up_to_panel(int m) const;
};

}  // namespace tlab
