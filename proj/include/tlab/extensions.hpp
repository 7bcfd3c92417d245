#pragma once

#include <vector>

#include "tlab/grid.hpp"
#include "tlab/quadrature.hpp"
#include "tlab/spectral.hpp"

namespace tlab {

/// Values and space-time gradients of u(x,t) = e^{-t sqrt(-Lap)} f or e^{t Lap} f
/// at the nodes of a TimeMesh. Immutable once built.
struct ExtensionStack {
  TorusGrid grid;
  ExtensionKind kind = ExtensionKind::poisson;
  TimeMesh mesh;
  /// Trace coefficients at t = 0 (mean removed).
  SpectralField source;
  /// Mean subtracted from the input before extension.
  double removed_mean = 0.0;
  std::vector<Field> values;               // [node]
  std::vector<std::vector<Field>> grad_x;  // [node][axis]
  std::vector<Field> grad_t;               // [node]

  std::size_t node_count() const { return values.size(); }
};

ExtensionStack build_stack(const Field& f, ExtensionKind kind, const TimeMesh& mesh);
ExtensionStack build_stack(const SpectralField& f, ExtensionKind kind, const TimeMesh& mesh);

/// Rebuilds the stack from (-Lap)^{s/2} of its trace; the operator commutes with
/// both semigroups, so this equals applying it node by node.
ExtensionStack lift_stack(const ExtensionStack& stack, double s);

struct SubordinationOptions {
  double s_cut = 3.0;  // in units of the period
  int panels = 40;
  int nodes_per_panel = 10;
};

struct SubordinationResult {
  ExtensionStack lifted;
  /// Upper bound on |dropped tail| of the s-integral, uniformly in x and t.
  double tail_bound = 0.0;
};

/// (-Lap)^{-alpha/2} u(x,t) = Gamma(alpha)^{-1} int_0^inf u(x,t+s) s^{alpha-1} ds
/// for a Poisson stack, truncated at s_cut and evaluated by quadrature.
SubordinationResult frac_lift_subordination(const ExtensionStack& stack, double alpha,
                                            const SubordinationOptions& opts = {});

/// sup over nodes and lattice points of t^{1-alpha} |grad_{x,t} u| / h_norm.
double gradient_bound_ratio(const ExtensionStack& stack, double alpha, double h_norm);

/// sup over nodes and lattice points of t^{1-alpha} |grad_{x,t} u|.
double gradient_bound_constant(const ExtensionStack& stack, double alpha);

struct ModulusReport {
  double alpha = 0.0;
  double gradient_constant = 0.0;  // C in |grad u| <= C t^{alpha-1}
  double max_ratio_near = 0.0;     // |x - x0| <= t
  double max_ratio_far = 0.0;      // |x - x0| > t
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Checks |u(x,t) - u(x0,t)| against the modulus bound implied by
/// |grad u| <= C t^{alpha-1}:
///   C t^{alpha-1} |x-x0|                     if |x-x0| <= t
///   C (1 + 2/alpha) |x-x0|^alpha             if |x-x0| > t, alpha > 0
///   C (1 + 2 log(|x-x0|/t))                  if |x-x0| > t, alpha = 0
///   C (1 + 2/|alpha|) t^alpha                if |x-x0| > t, alpha < 0
/// Pairs are (x0, x0 + offset) for x0 on a stride-subsampled lattice.
ModulusReport modulus_bound_check(const ExtensionStack& stack, double alpha, int center_stride = 0);

/// max over nodes of |Lap_x u + d_t^2 u| (Poisson) or |Lap_x u - d_t u| (heat),
/// relative to max |u| over the stack. Lap_x u is taken from the stored values.
double pde_residual(const ExtensionStack& stack);

/// Rigorous sup bounds from the trace coefficients (zero mode excluded):
/// |u| <= value, |grad_x u| <= spatial, |d_t u| <= temporal.
struct GradientBounds {
  double value = 0.0;
  double spatial = 0.0;
  double temporal = 0.0;
};
GradientBounds gradient_bounds(const SpectralField& trace, ExtensionKind kind);

}  // namespace tlab
