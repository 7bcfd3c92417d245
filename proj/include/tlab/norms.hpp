#pragma once

#include <array>
#include <limits>
#include <vector>

#include "tlab/boxes.hpp"
#include "tlab/extensions.hpp"
#include "tlab/kernels.hpp"

namespace tlab {

struct BoxValue {
  std::size_t center = 0;
  double radius = 0.0;
  double value_sq = 0.0;  // weighted box quantity before the square root
};

/// A discrete supremum over a BoxFamily.
struct NormResult {
  double value = 0.0;
  std::size_t arg_center = 0;
  std::array<double, 3> arg_point{0, 0, 0};
  double arg_radius = 0.0;
  /// Mean removed from the input (seminorms vanish on constants).
  double removed_mean = 0.0;
  /// Bound on the error from the part of the t-integral below the mesh floor,
  /// which is filled with the integrand at the lowest node; 0 for trace-side norms.
  double truncation_bound = 0.0;
  std::vector<BoxValue> per_box;  // filled only when requested
};

struct NormOptions {
  kernels::Backend backend = kernels::Backend::automatic;
  bool keep_table = false;
};

// ---- trace side -----------------------------------------------------------

/// max_box r^{-(n+2 alpha)} int_B |f - f_B|^2, square-rooted.
NormResult campanato_norm(const Field& f, double alpha, const BoxFamily& boxes, const NormOptions& opts = {});

/// max_box r^{-2(alpha+n)} int_B int_B |f(y) - f(z)|^2, square-rooted.
NormResult campanato_pair_norm(const Field& f, double alpha, const BoxFamily& boxes,
                               const NormOptions& opts = {});

/// max_box r^{2 beta - n} int_B int_B |f(x)-f(y)|^2 |x-y|^{-(n+2 beta)}, diagonal excluded.
NormResult q_norm(const Field& f, double beta, const BoxFamily& boxes, const NormOptions& opts = {});

/// campanato_norm of (-Lap)^{-alpha/2} f.
NormResult frac_campanato_norm(const Field& f, double alpha, const BoxFamily& boxes,
                               const NormOptions& opts = {});

// ---- extension side -------------------------------------------------------

/// Shared dyadic mesh whose panel boundaries include every box height used by
/// the norms of `kind` on `boxes`, with `floor_panels` panels below the lowest.
TimeMesh time_mesh_for(const BoxFamily& boxes, ExtensionKind kind, int floor_panels = 20,
                       int nodes_per_panel = 8);

/// H^{alpha,2}: max_box r^{-(2 alpha+n)} int_B int_0^r |grad_{x,t} u|^2 t dt dx.
NormResult h_alpha2_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts = {});
/// Scaling invariant version, weight t^{1+2 alpha}.
NormResult scaled_h_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts = {});
/// h_alpha2_norm of the stack lifted by (-Lap)^{-alpha/2}.
NormResult star_norm(const ExtensionStack& stack, double alpha, const BoxFamily& boxes,
                     const NormOptions& opts = {});

/// T^{alpha,2}: max_box r^{-(2 alpha+n)} int_B int_0^{r^2} |grad_x u|^2 dt dx.
NormResult t_alpha2_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts = {});
/// Scaling invariant caloric version, weight t^alpha.
NormResult scaled_t_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts = {});

struct DaggerResult {
  NormResult displayed;  // int_0^r ... t dt
  NormResult parabolic;  // int_0^{r^2} ... t dt
};
/// Caloric stack lifted by (-Lap)^{-alpha/2}, full gradient, weight t, with both box heights.
DaggerResult dagger_norm(const ExtensionStack& heat, double alpha, const BoxFamily& boxes,
                         const NormOptions& opts = {});

/// sup t |grad_{x,t} u| over stack nodes and lattice points.
double bloch_hb_norm(const ExtensionStack& poisson);
/// sup sqrt(t) |grad_x u| over stack nodes and lattice points.
double bloch_cb_norm(const ExtensionStack& heat);

/// count points spread log-uniformly over [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int count);
/// Default Besov grid for a lattice: from (h/8)^2 up to L^2.
std::vector<double> besov_time_grid(const TorusGrid& grid, int count = 400);

/// sup over x and t in t_grid of sqrt(t) |e^{t Lap} f(x)|, mean removed.
double besov_norm(const Field& f, const std::vector<double>& t_grid);

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// max over boxes with r^2 < T of r^{-(2 alpha+n)} int_0^{r^2} int_B |e^{t Lap} f|^2 t^alpha.
NormResult inverse_space_norm(const Field& f, double alpha, double T, const BoxFamily& boxes,
                              const NormOptions& opts = {});

struct XNormResult {
  double sup_part = 0.0;       // sup_{t <= T} sqrt(t) |u|
  double carleson_part = 0.0;  // square-rooted Carleson term with weight t^alpha
  double total = 0.0;
  NormResult carleson;
};

/// A scalar time series u(., t_i), 0 < t_1 < ... < t_m, optionally with u(., 0).
struct ScalarTrace {
  std::vector<double> times;
  std::vector<Field> fields;
  const Field* initial = nullptr;  // u(., 0) when known
};

/// X-space norm of a caloric stack (Gauss nodes; r^2 heights must be panel boundaries).
XNormResult x_space_norm(const ExtensionStack& heat, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts = {});
/// X-space norm of a sampled trace; the Carleson time integral uses product
/// trapezoid rules (|u|^2 piecewise linear, t^alpha integrated exactly).
XNormResult x_space_norm(const ScalarTrace& trace, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts = {});

}  // namespace tlab
