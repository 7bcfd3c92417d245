#include "tlab/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlab {

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > -1.0 && alpha < 1.0)) throw std::domain_error(std::string(who) + ": alpha must lie in (-1, 1)");
}

SpectralField scaled(const SpectralField& f, const std::vector<double>& factor) {
  SpectralField out(f.grid);
  for (std::size_t i = 0; i < factor.size(); ++i) out.coefficients[i] = factor[i] * f.coefficients[i];
  return out;
}

// Fills one node of the stack from the coefficients of u(., t).
void fill_node(ExtensionStack& s, std::size_t node, const SpectralField& at_t,
               const std::vector<double>& rate) {
  s.values[node] = inverse_transform(at_t);
  s.grad_x[node] = spatial_gradient(at_t);
  SpectralField dt(at_t.grid);
  for (std::size_t i = 0; i < rate.size(); ++i) dt.coefficients[i] = -rate[i] * at_t.coefficients[i];
  s.grad_t[node] = inverse_transform(dt);
}

std::vector<double> rates(const TorusGrid& grid, ExtensionKind kind) {
  std::vector<double> a(grid.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = semigroup_rate(grid, i, kind);
  return a;
}

// Builds a stack whose node-t coefficients are exp(-a t) * trace.
ExtensionStack assemble(const SpectralField& trace, ExtensionKind kind, const TimeMesh& mesh, double removed_mean) {
  if (mesh.empty()) throw std::invalid_argument("build_stack: empty time mesh");
  ExtensionStack s;
  s.grid = trace.grid;
  s.kind = kind;
  s.mesh = mesh;
  s.source = trace;
  s.removed_mean = removed_mean;
  const auto nodes = mesh.size();
  s.values.resize(nodes);
  s.grad_x.resize(nodes);
  s.grad_t.resize(nodes);
  const auto a = rates(trace.grid, kind);
  const auto count = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t q = 0; q < count; ++q) {
    const double t = mesh.nodes[static_cast<std::size_t>(q)];
    std::vector<double> decay(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) decay[i] = std::exp(-a[i] * t);
    fill_node(s, static_cast<std::size_t>(q), scaled(trace, decay), a);
  }
  return s;
}

}  // namespace

ExtensionStack build_stack(const SpectralField& f, ExtensionKind kind, const TimeMesh& mesh) {
  const double mean = f.zero_mode().real();
  return assemble(remove_zero_mode(f), kind, mesh, mean);
}

ExtensionStack build_stack(const Field& f, ExtensionKind kind, const TimeMesh& mesh) {
  return build_stack(forward_transform(f), kind, mesh);
}

ExtensionStack lift_stack(const ExtensionStack& stack, double s) {
  return assemble(frac_laplacian_power(stack.source, s), stack.kind, stack.mesh, 0.0);
}

SubordinationResult frac_lift_subordination(const ExtensionStack& stack, double alpha,
                                            const SubordinationOptions& opts) {
  if (stack.kind != ExtensionKind::poisson)
    throw std::invalid_argument("frac_lift_subordination: needs a Poisson stack");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("frac_lift_subordination: alpha must lie in (0, 1)");
  if (!(opts.s_cut > 0.0)) throw std::domain_error("frac_lift_subordination: s_cut must be positive");
  const auto& grid = stack.grid;
  const double s_cut = opts.s_cut * grid.period;

  // s = sigma^{1/alpha} turns s^{alpha-1} ds into dsigma / alpha; dyadic panels in
  // sigma resolve the fast decay of high modes near s = 0.
  const double sigma_max = std::pow(s_cut, alpha);
  std::vector<double> s_nodes, s_weights;
  auto add_panel = [&](double a, double b) {
    const auto rule = gauss_legendre(opts.nodes_per_panel, a, b);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      s_nodes.push_back(std::pow(rule.nodes[j], 1.0 / alpha));
      s_weights.push_back(rule.weights[j] / alpha);
    }
  };
  for (int m = 0; m < opts.panels; ++m)
    add_panel(std::ldexp(sigma_max, -(m + 1)), std::ldexp(sigma_max, -m));
  add_panel(0.0, std::ldexp(sigma_max, -opts.panels));

  // u(x, t+s) = e^{-a t} e^{-a s} u(x, 0) mode by mode, so the s-sum is taken once
  // per mode and the t-dependence is restored by the Poisson factor at each node.
  const double inv_gamma = 1.0 / std::tgamma(alpha);
  const auto a = rates(grid, ExtensionKind::poisson);
  std::vector<double> multiplier(a.size(), 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s_nodes.size(); ++j) acc += s_weights[j] * std::exp(-a[i] * s_nodes[j]);
    multiplier[i] = inv_gamma * acc;
  }
  SubordinationResult out;
  out.lifted = assemble(scaled(stack.source, multiplier), ExtensionKind::poisson, stack.mesh, 0.0);

  const double a_min = 2.0 * std::numbers::pi / grid.period;
  out.tail_bound = inv_gamma * stack.source.l1() * std::pow(s_cut, alpha - 1.0) * std::exp(-a_min * s_cut) / a_min;
  return out;
}

double gradient_bound_constant(const ExtensionStack& stack, double alpha) {
  check_alpha(alpha, "gradient_bound_constant");
  double best = 0.0;
  for (std::size_t q = 0; q < stack.node_count(); ++q) {
    const double w = std::pow(stack.mesh.nodes[q], 1.0 - alpha);
    for (std::size_t i = 0; i < stack.grid.size(); ++i) {
      double g2 = stack.grad_t[q][i] * stack.grad_t[q][i];
      for (const auto& g : stack.grad_x[q]) g2 += g[i] * g[i];
      best = std::max(best, w * std::sqrt(g2));
    }
  }
  return best;
}

double gradient_bound_ratio(const ExtensionStack& stack, double alpha, double h_norm) {
  if (!(h_norm > 0.0)) throw std::domain_error("gradient_bound_ratio: H^{alpha,2} norm must be positive");
  return gradient_bound_constant(stack, alpha) / h_norm;
}

ModulusReport modulus_bound_check(const ExtensionStack& stack, double alpha, int center_stride) {
  check_alpha(alpha, "modulus_bound_check");
  const auto& grid = stack.grid;
  const int n = grid.points_per_axis;
  if (center_stride <= 0) center_stride = std::max(1, n / 32);
  ModulusReport rep;
  rep.alpha = alpha;
  rep.gradient_constant = gradient_bound_constant(stack, alpha);
  const double C = rep.gradient_constant;
  if (C == 0.0) return rep;
  const double h = grid.spacing();
  for (std::size_t q = 0; q < stack.node_count(); ++q) {
    const double t = stack.mesh.nodes[q];
    const auto& u = stack.values[q];
    for (std::size_t c = 0; c < grid.size(); c += static_cast<std::size_t>(center_stride)) {
      const auto c_idx = grid.unflatten(c);
      // offsets along the first axis; the torus distance is |offset| * h
      for (int off = -n / 2 + 1; off <= n / 2; ++off) {
        if (off == 0) continue;
        auto x_idx = c_idx;
        x_idx[0] += off;
        const double diff = std::abs(u[grid.wrap(x_idx)] - u[c]);
        const double d = std::abs(off) * h;
        double bound;
        if (d <= t) {
          bound = C * std::pow(t, alpha - 1.0) * d;
        } else if (alpha > 0.0) {
          bound = C * (1.0 + 2.0 / alpha) * std::pow(d, alpha);
        } else if (alpha == 0.0) {
          bound = C * (1.0 + 2.0 * std::log(d / t));
        } else {
          bound = C * (1.0 + 2.0 / std::abs(alpha)) * std::pow(t, alpha);
        }
        const double ratio = diff / bound;
        if (d <= t) rep.max_ratio_near = std::max(rep.max_ratio_near, ratio);
        else rep.max_ratio_far = std::max(rep.max_ratio_far, ratio);
        ++rep.pairs;
      }
    }
  }
  rep.max_ratio = std::max(rep.max_ratio_near, rep.max_ratio_far);
  return rep;
}

double pde_residual(const ExtensionStack& stack) {
  const auto& grid = stack.grid;
  const auto a = rates(grid, stack.kind);
  double worst = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < stack.node_count(); ++q) {
    scale = std::max(scale, stack.values[q].max_abs());
    auto lap = forward_transform(stack.values[q]);
    for (std::size_t i = 0; i < lap.coefficients.size(); ++i) {
      const double s = sqrt_laplacian_symbol(grid, i);
      lap.coefficients[i] *= -s * s;
    }
    const Field lap_u = inverse_transform(lap);
    Field second(grid);
    if (stack.kind == ExtensionKind::poisson) {
      SpectralField dtt(grid);
      const double t = stack.mesh.nodes[q];
      for (std::size_t i = 0; i < a.size(); ++i)
        dtt.coefficients[i] = a[i] * a[i] * std::exp(-a[i] * t) * stack.source.coefficients[i];
      second = inverse_transform(dtt);  // Lap u + d_t^2 u = 0
    } else {
      second = stack.grad_t[q];
      second *= -1.0;  // Lap u - d_t u = 0
    }
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(lap_u[i] + second[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

GradientBounds gradient_bounds(const SpectralField& trace, ExtensionKind kind) {
  GradientBounds b;
  for (std::size_t i = 1; i < trace.coefficients.size(); ++i) {
    const double c = std::abs(trace.coefficients[i]);
    const double s = sqrt_laplacian_symbol(trace.grid, i);
    b.value += c;
    b.spatial += s * c;
    b.temporal += (kind == ExtensionKind::poisson ? s : s * s) * c;
  }
  return b;
}

}  // namespace tlab
