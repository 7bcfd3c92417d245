#include "tlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tlab {

namespace {

enum class Height { radius, radius_squared };

void check_alpha(double alpha, const char* who) {
  if (!(alpha > -1.0 && alpha < 1.0)) throw std::domain_error(std::string(who) + ": alpha must lie in (-1, 1)");
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double box_height(double r, Height h) { return h == Height::radius ? r : r * r; }

// Running maximum over boxes, shared by every norm.
struct SupTracker {
  const BoxFamily& boxes;
  const NormOptions& opts;
  NormResult result;
  double best_sq = -1.0;

  SupTracker(const BoxFamily& b, const NormOptions& o) : boxes(b), opts(o) {}

  void add(double radius, const std::vector<double>& per_center, double scale) {
    for (std::size_t i = 0; i < per_center.size(); ++i) {
      const double v = std::max(0.0, scale * per_center[i]);
      if (opts.keep_table) result.per_box.push_back({boxes.centers[i], radius, v});
      if (v > best_sq) {
        best_sq = v;
        result.arg_center = boxes.centers[i];
        result.arg_radius = radius;
      }
    }
  }

  NormResult finish() {
    result.value = std::sqrt(std::max(0.0, best_sq));
    result.arg_point = boxes.grid.coordinates(result.arg_center);
    return std::move(result);
  }
};

NormResult zero_result(const BoxFamily& boxes, double removed_mean) {
  NormResult r;
  r.removed_mean = removed_mean;
  if (!boxes.centers.empty()) {
    r.arg_center = boxes.centers.front();
    r.arg_point = boxes.grid.coordinates(r.arg_center);
    r.arg_radius = boxes.radii.empty() ? 0.0 : boxes.radii.front();
  }
  return r;
}

void require_grid(const TorusGrid& a, const BoxFamily& boxes) {
  if (!(a == boxes.grid)) throw std::invalid_argument("norm: box family lives on a different grid");
}

// Supremum over boxes of r^{-(2 alpha + n)} int_B int_0^{height(r)} I(x,t) t^w dt dx,
// where I at mesh node q is produced by `integrand(q)`. Radii with r^2 >= T are skipped.
NormResult carleson_sup(const TorusGrid& grid, const TimeMesh& mesh,
                        const std::function<std::vector<double>(std::size_t)>& integrand, double alpha,
                        double weight_exponent, Height height, const BoxFamily& boxes, double T,
                        double integrand_bound_sq, const NormOptions& opts) {
  require_grid(grid, boxes);
  struct Level {
    double radius;
    double height;
    std::size_t nodes;
  };
  std::vector<Level> levels;
  for (double r : boxes.radii) {
    if (!(r * r < T)) continue;
    const double h = box_height(r, height);
    levels.push_back({r, h, mesh.nodes_up_to_panel(mesh.panel_for_height(h))});
  }
  if (levels.empty()) return zero_result(boxes, 0.0);
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.nodes < b.nodes; });

  SupTracker sup(boxes, opts);
  std::vector<double> acc(grid.size(), 0.0);
  std::size_t done = 0;
  double omitted = 0.0;
  const double floor_integral =
      std::pow(mesh.t_floor(), weight_exponent + 1.0) / (weight_exponent + 1.0);
  for (const auto& lv : levels) {
    for (; done < lv.nodes; ++done) {
      const auto vals = integrand(done);
      double w = mesh.weights[done] * std::pow(mesh.nodes[done], weight_exponent);
      if (done == 0) w += floor_integral;  // (0, t_floor) at the lowest node's value
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * vals[i];
    }
    const auto ball = make_ball_stencil(grid, lv.radius);
    const double scale = std::pow(lv.radius, -(2.0 * alpha + grid.dims)) * grid.cell_volume();
    sup.add(lv.radius, kernels::ball_sums(grid, acc, ball, boxes.centers, opts.backend), scale);
    omitted = std::max(omitted, scale * ball.weight_sum * integrand_bound_sq * floor_integral);
  }
  auto res = sup.finish();
  // the floor cell lies in [0, omitted] in squared units, so the value can move by at most this much
  res.truncation_bound = res.value - std::sqrt(std::max(0.0, res.value * res.value - omitted));
  return res;
}

enum class Integrand { full_gradient, spatial_gradient, value };

std::function<std::vector<double>(std::size_t)> stack_integrand(const ExtensionStack& s, Integrand which) {
  return [&s, which](std::size_t q) {
    std::vector<double> out(s.grid.size(), 0.0);
    if (which == Integrand::value) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.values[q][i] * s.values[q][i];
      return out;
    }
    for (const auto& g : s.grad_x[q])
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i] * g[i];
    if (which == Integrand::full_gradient)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += s.grad_t[q][i] * s.grad_t[q][i];
    return out;
  };
}

double integrand_bound_sq(const ExtensionStack& s, Integrand which) {
  const auto b = gradient_bounds(s.source, s.kind);
  switch (which) {
    case Integrand::value: return b.value * b.value;
    case Integrand::spatial_gradient: return b.spatial * b.spatial;
    case Integrand::full_gradient: return b.spatial * b.spatial + b.temporal * b.temporal;
  }
  return 0.0;
}

NormResult stack_carleson(const ExtensionStack& s, Integrand which, double alpha, double weight_exponent,
                          Height height, const BoxFamily& boxes, double T, const NormOptions& opts) {
  auto res = carleson_sup(s.grid, s.mesh, stack_integrand(s, which), alpha, weight_exponent, height, boxes, T,
                          integrand_bound_sq(s, which), opts);
  res.removed_mean = s.removed_mean;
  return res;
}

void require_kind(const ExtensionStack& s, ExtensionKind kind, const char* who) {
  if (s.kind != kind)
    throw std::invalid_argument(std::string(who) + ": needs a " + std::string(to_string(kind)) + " stack");
}

}  // namespace

// ---- trace side -----------------------------------------------------------

NormResult campanato_norm(const Field& f, double alpha, const BoxFamily& boxes, const NormOptions& opts) {
  check_alpha(alpha, "campanato_norm");
  require_grid(f.grid(), boxes);
  const double mean = f.mean();
  const Field g = f.without_mean();
  if (is_constant(g.samples())) return zero_result(boxes, mean);
  SupTracker sup(boxes, opts);
  const auto& grid = f.grid();
  for (double r : boxes.radii) {
    const auto ball = make_ball_stencil(grid, r);
    const double scale = std::pow(r, -(grid.dims + 2.0 * alpha)) * grid.cell_volume();
    sup.add(r, kernels::ball_oscillation(grid, g.samples(), ball, boxes.centers, opts.backend), scale);
  }
  auto res = sup.finish();
  res.removed_mean = mean;
  return res;
}

NormResult campanato_pair_norm(const Field& f, double alpha, const BoxFamily& boxes, const NormOptions& opts) {
  check_alpha(alpha, "campanato_pair_norm");
  require_grid(f.grid(), boxes);
  const double mean = f.mean();
  const Field g = f.without_mean();
  if (is_constant(g.samples())) return zero_result(boxes, mean);
  SupTracker sup(boxes, opts);
  const auto& grid = f.grid();
  const double cell = grid.cell_volume();
  for (double r : boxes.radii) {
    const auto ball = make_ball_stencil(grid, r);
    // int_B int_B |f(y) - f(z)|^2 = 2 |B| int_B |f - f_B|^2 for the weighted lattice measure
    const double scale = std::pow(r, -2.0 * (alpha + grid.dims)) * 2.0 * ball.weight_sum * cell * cell;
    sup.add(r, kernels::ball_oscillation(grid, g.samples(), ball, boxes.centers, opts.backend), scale);
  }
  auto res = sup.finish();
  res.removed_mean = mean;
  return res;
}

NormResult q_norm(const Field& f, double beta, const BoxFamily& boxes, const NormOptions& opts) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("q_norm: beta must lie in (0, 1)");
  require_grid(f.grid(), boxes);
  const double mean = f.mean();
  const Field g = f.without_mean();
  if (is_constant(g.samples())) return zero_result(boxes, mean);
  SupTracker sup(boxes, opts);
  const auto& grid = f.grid();
  const double cell = grid.cell_volume();
  const double power = grid.dims + 2.0 * beta;
  for (double r : boxes.radii) {
    const auto ball = make_ball_stencil(grid, r);
    const double scale = std::pow(r, 2.0 * beta - grid.dims) * cell * cell;
    sup.add(r, kernels::pair_sums(grid, g.samples(), ball, boxes.centers, power, opts.backend), scale);
  }
  auto res = sup.finish();
  res.removed_mean = mean;
  return res;
}

NormResult frac_campanato_norm(const Field& f, double alpha, const BoxFamily& boxes, const NormOptions& opts) {
  check_alpha(alpha, "frac_campanato_norm");
  if (alpha == 0.0) return campanato_norm(f, 0.0, boxes, opts);
  const double mean = f.mean();
  const Field lifted = inverse_transform(frac_laplacian_power(remove_zero_mode(forward_transform(f)), -alpha));
  auto res = campanato_norm(lifted, alpha, boxes, opts);
  res.removed_mean = mean;
  return res;
}

// ---- extension side -------------------------------------------------------

TimeMesh time_mesh_for(const BoxFamily& boxes, ExtensionKind kind, int floor_panels, int nodes_per_panel) {
  std::vector<double> heights;
  for (double r : boxes.radii) {
    heights.push_back(r);
    if (kind == ExtensionKind::heat) heights.push_back(r * r);
  }
  if (heights.empty()) throw std::invalid_argument("time_mesh_for: empty box family");
  const double top = *std::max_element(heights.begin(), heights.end());
  const double low = *std::min_element(heights.begin(), heights.end());
  const int span = static_cast<int>(std::lround(std::log2(top / low)));
  auto mesh = TimeMesh::dyadic(top, span + floor_panels, nodes_per_panel);
  for (double h : heights) mesh.panel_for_height(h);  // throws when a height is off the dyadic ladder
  return mesh;
}

NormResult h_alpha2_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "h_alpha2_norm");
  require_kind(stack, ExtensionKind::poisson, "h_alpha2_norm");
  return stack_carleson(stack, Integrand::full_gradient, alpha, 1.0, Height::radius, boxes, kInfiniteTime, opts);
}

NormResult scaled_h_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "scaled_h_norm");
  require_kind(stack, ExtensionKind::poisson, "scaled_h_norm");
  return stack_carleson(stack, Integrand::full_gradient, alpha, 1.0 + 2.0 * alpha, Height::radius, boxes,
                        kInfiniteTime, opts);
}

NormResult star_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes, const NormOptions& opts) {
  check_alpha(alpha, "star_norm");
  require_kind(stack, ExtensionKind::poisson, "star_norm");
  if (alpha == 0.0) return h_alpha2_norm(stack, 0.0, boxes, opts);
  auto res = h_alpha2_norm(lift_stack(stack, -alpha), alpha, boxes, opts);
  res.removed_mean = stack.removed_mean;
  return res;
}

NormResult t_alpha2_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "t_alpha2_norm");
  require_kind(heat, ExtensionKind::heat, "t_alpha2_norm");
  return stack_carleson(heat, Integrand::spatial_gradient, alpha, 0.0, Height::radius_squared, boxes,
                        kInfiniteTime, opts);
}

NormResult scaled_t_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "scaled_t_norm");
  require_kind(heat, ExtensionKind::heat, "scaled_t_norm");
  return stack_carleson(heat, Integrand::spatial_gradient, alpha, alpha, Height::radius_squared, boxes,
                        kInfiniteTime, opts);
}

DaggerResult dagger_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "dagger_norm");
  require_kind(heat, ExtensionKind::heat, "dagger_norm");
  const ExtensionStack lifted = alpha == 0.0 ? heat : lift_stack(heat, -alpha);
  DaggerResult out;
  out.displayed = stack_carleson(lifted, Integrand::full_gradient, alpha, 1.0, Height::radius, boxes,
                                 kInfiniteTime, opts);
  out.parabolic = stack_carleson(lifted, Integrand::full_gradient, alpha, 1.0, Height::radius_squared, boxes,
                                 kInfiniteTime, opts);
  out.displayed.removed_mean = out.parabolic.removed_mean = heat.removed_mean;
  return out;
}

double bloch_hb_norm(const ExtensionStack& poisson) {
  require_kind(poisson, ExtensionKind::poisson, "bloch_hb_norm");
  double best = 0.0;
  for (std::size_t q = 0; q < poisson.node_count(); ++q) {
    const double t = poisson.mesh.nodes[q];
    for (std::size_t i = 0; i < poisson.grid.size(); ++i) {
      double g2 = poisson.grad_t[q][i] * poisson.grad_t[q][i];
      for (const auto& g : poisson.grad_x[q]) g2 += g[i] * g[i];
      best = std::max(best, t * std::sqrt(g2));
    }
  }
  return best;
}

double bloch_cb_norm(const ExtensionStack& heat) {
  require_kind(heat, ExtensionKind::heat, "bloch_cb_norm");
  double best = 0.0;
  for (std::size_t q = 0; q < heat.node_count(); ++q) {
    const double st = std::sqrt(heat.mesh.nodes[q]);
    for (std::size_t i = 0; i < heat.grid.size(); ++i) {
      double g2 = 0.0;
      for (const auto& g : heat.grad_x[q]) g2 += g[i] * g[i];
      best = std::max(best, st * std::sqrt(g2));
    }
  }
  return best;
}

std::vector<double> log_time_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw std::invalid_argument("log_time_grid: bad range");
  std::vector<double> t(static_cast<std::size_t>(count));
  const double a = std::log(t_min), b = std::log(t_max);
  for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
  return t;
}

std::vector<double> besov_time_grid(const TorusGrid& grid, int count) {
  const double h = grid.spacing() / 8.0;
  return log_time_grid(h * h, grid.period * grid.period, count);
}

double besov_norm(const Field& f, const std::vector<double>& t_grid) {
  const auto fh = remove_zero_mode(forward_transform(f));
  double best = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::domain_error("besov_norm: times must be positive");
    best = std::max(best, std::sqrt(t) * inverse_transform(heat_semigroup(fh, t)).max_abs());
  }
  return best;
}

NormResult inverse_space_norm(const Field& f, double alpha, double T, const BoxFamily& boxes,
                              const NormOptions& opts) {
  check_alpha(alpha, "inverse_space_norm");
  if (!(T > 0.0)) throw std::domain_error("inverse_space_norm: T must be positive");
  require_grid(f.grid(), boxes);
  const double mean = f.mean();
  const auto fh = remove_zero_mode(forward_transform(f));
  if (fh.l1() == 0.0) return zero_result(boxes, mean);
  // heights r^2 only; the mesh need not hold the r heights
  std::vector<double> heights;
  for (double r : boxes.radii) heights.push_back(r * r);
  const double top = *std::max_element(heights.begin(), heights.end());
  const double low = *std::min_element(heights.begin(), heights.end());
  const auto mesh = TimeMesh::dyadic(top, static_cast<int>(std::lround(std::log2(top / low))) + 20, 8);
  const auto a = [&] {
    std::vector<double> r(fh.grid.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = semigroup_rate(fh.grid, i, ExtensionKind::heat);
    return r;
  }();
  auto integrand = [&](std::size_t q) {
    SpectralField at(fh.grid);
    const double t = mesh.nodes[q];
    for (std::size_t i = 0; i < a.size(); ++i) at.coefficients[i] = std::exp(-a[i] * t) * fh.coefficients[i];
    const Field u = inverse_transform(at);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * u[i];
    return out;
  };
  const double bound = fh.l1();
  auto res = carleson_sup(f.grid(), mesh, integrand, alpha, alpha, Height::radius_squared, boxes, T,
                          bound * bound, opts);
  res.removed_mean = mean;
  return res;
}

XNormResult x_space_norm(const ExtensionStack& heat, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "x_space_norm");
  require_kind(heat, ExtensionKind::heat, "x_space_norm");
  if (!(T > 0.0)) throw std::domain_error("x_space_norm: T must be positive");
  if (heat.node_count() == 0) throw std::invalid_argument("x_space_norm: empty stack");
  XNormResult out;
  for (std::size_t q = 0; q < heat.node_count(); ++q) {
    const double t = heat.mesh.nodes[q];
    if (t > T) break;
    out.sup_part = std::max(out.sup_part, std::sqrt(t) * heat.values[q].max_abs());
  }
  out.carleson = stack_carleson(heat, Integrand::value, alpha, alpha, Height::radius_squared, boxes, T, opts);
  out.carleson_part = out.carleson.value;
  out.total = out.sup_part + out.carleson_part;
  return out;
}

namespace {

// Weights w_i with int_0^H g(t) t^alpha dt ~ sum_i w_i g_i for g piecewise linear
// through (times[i], g_i); index 0 is t = 0 when `has_origin`.
std::vector<double> product_trapezoid_weights(const std::vector<double>& times, double H, double alpha) {
  std::vector<double> w(times.size(), 0.0);
  auto moments = [&](double a, double b) {
    const double m0 = (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) / (alpha + 1.0);
    const double m1 = (std::pow(b, alpha + 2.0) - std::pow(a, alpha + 2.0)) / (alpha + 2.0);
    return std::pair{m0, m1};
  };
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = times[i], b = times[i + 1];
    if (a >= H) break;
    const double delta = b - a;
    const double top = std::min(b, H);
    const auto [m0, m1] = moments(a, top);
    // linear pieces in terms of the endpoint values g_i, g_{i+1}
    const double wi = (b * m0 - m1) / delta;
    const double wj = (m1 - a * m0) / delta;
    w[i] += wi;
    w[i + 1] += wj;
  }
  return w;
}

}  // namespace

XNormResult x_space_norm(const ScalarTrace& trace, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts) {
  check_alpha(alpha, "x_space_norm");
  if (!(T > 0.0)) throw std::domain_error("x_space_norm: T must be positive");
  if (trace.times.empty() || trace.times.size() != trace.fields.size())
    throw std::invalid_argument("x_space_norm: empty or inconsistent trace");
  const auto& grid = trace.fields.front().grid();
  require_grid(grid, boxes);
  XNormResult out;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] > T * (1.0 + 1e-12)) break;
    out.sup_part = std::max(out.sup_part, std::sqrt(trace.times[i]) * trace.fields[i].max_abs());
  }

  // node list including t = 0 (initial data, or constant extension of the first sample)
  std::vector<double> times{0.0};
  std::vector<const Field*> fields{trace.initial ? trace.initial : &trace.fields.front()};
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    times.push_back(trace.times[i]);
    fields.push_back(&trace.fields[i]);
  }
  std::vector<std::vector<double>> sq(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sq[i].resize(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) sq[i][p] = (*fields[i])[p] * (*fields[i])[p];
  }

  SupTracker sup(boxes, opts);
  bool any = false;
  for (double r : boxes.radii) {
    const double H = r * r;
    if (!(H < T)) continue;
    if (H > times.back() * (1.0 + 1e-12)) throw std::invalid_argument("x_space_norm: trace does not reach r^2");
    const auto w = product_trapezoid_weights(times, H, alpha);
    std::vector<double> acc(grid.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != 0.0)
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w[i] * sq[i][p];
    const auto ball = make_ball_stencil(grid, r);
    const double scale = std::pow(r, -(2.0 * alpha + grid.dims)) * grid.cell_volume();
    sup.add(r, kernels::ball_sums(grid, acc, ball, boxes.centers, opts.backend), scale);
    any = true;
  }
  out.carleson = any ? sup.finish() : zero_result(boxes, 0.0);
  out.carleson_part = out.carleson.value;
  out.total = out.sup_part + out.carleson_part;
  return out;
}

}  // namespace tlab
