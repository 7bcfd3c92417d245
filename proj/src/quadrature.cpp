#include "tlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlab {

QuadratureRule gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(q));
  rule.weights.resize(static_cast<std::size_t>(q));
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) p0 = 1.0;
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (q == 1) p0 = 1.0;
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int q, double a, double b) {
  auto rule = gauss_legendre(q);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

TimeMesh TimeMesh::dyadic(double r_max, int panels, int q) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("TimeMesh: r_max must be positive");
  if (panels < 1 || q < 1) throw std::invalid_argument("TimeMesh: empty mesh");
  TimeMesh mesh;
  mesh.r_max = r_max;
  mesh.panels = panels;
  mesh.nodes_per_panel = q;
  const auto ref = gauss_legendre(q);
  mesh.nodes.reserve(static_cast<std::size_t>(panels * q));
  mesh.weights.reserve(static_cast<std::size_t>(panels * q));
  for (int m = panels - 1; m >= 0; --m) {
    const double b = std::ldexp(r_max, -m), a = 0.5 * b;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < q; ++i) {
      mesh.nodes.push_back(mid + half * ref.nodes[i]);
      mesh.weights.push_back(half * ref.weights[i]);
    }
  }
  return mesh;
}

double TimeMesh::t_floor() const { return std::ldexp(r_max, -panels); }

double TimeMesh::panel_top(int m) const { return std::ldexp(r_max, -m); }

int TimeMesh::panel_for_height(double height) const {
  if (!(height > 0.0)) throw std::invalid_argument("TimeMesh: height must be positive");
  const int m = static_cast<int>(std::lround(std::log2(r_max / height)));
  if (m < 0 || m >= panels || std::abs(panel_top(m) - height) > 1e-12 * height)
    throw std::invalid_argument("TimeMesh: box height is not a panel boundary of the mesh");
  return m;
}

std::size_t TimeMesh::nodes_up_to_panel(int m) const {
  return static_cast<std::size_t>((panels - m) * nodes_per_panel);
}

}  // namespace tlab
