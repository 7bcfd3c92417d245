#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tlab/boxes.hpp"
#include "tlab/grid.hpp"
#include "tlab/norms.hpp"

/// Mild solutions of the incompressible Navier-Stokes system with unit
/// viscosity on the 3-torus, u(t) = e^{t Lap} a - int_0^t e^{(t-s) Lap} P div(u x u) ds.
namespace tlab::ns {

struct VelocityField {
  TorusGrid grid;
  std::array<Field, 3> components;

  VelocityField() = default;
  explicit VelocityField(const TorusGrid& g);  // zero field, g must be 3D
  VelocityField(const TorusGrid& g, std::array<Field, 3> c);

  double max_abs() const;
};

/// max_k |k . u^(k)| / max |u^(k)| (0 for the zero field).
double divergence_defect(const VelocityField& u);
/// (1/2) int |u|^2.
double kinetic_energy(const VelocityField& u);
/// sqrt(int |u|^2).
double l2_norm(const VelocityField& u);
/// l2_norm(a - b) / l2_norm(b).
double relative_l2_difference(const VelocityField& a, const VelocityField& b);

/// Leray projection of three fields on a common 3D grid.
VelocityField make_divergence_free(const std::array<Field, 3>& v);

/// lambda u(lambda x) for lambda = 2 on the same lattice.
VelocityField dilate(const VelocityField& u);

/// Energy fraction in modes with max_j |k_j| above 0.8 of the 2/3 cutoff.
double dealias_shell_fraction(const VelocityField& u);

struct SolverOptions {
  bool nonlinear = true;
  bool dealias = true;  // 2/3 rule on the nonlinear term
};

struct NSTrace {
  std::string method;
  double T = 0.0;
  VelocityField initial;
  std::vector<double> times;  // 0 < t_1 < ... < t_m = T
  std::vector<VelocityField> states;
  SolverOptions options;
  int iterations = 0;
  bool converged = true;
  std::vector<double> residual_history;  // max over nodes of the relative L2 update
  std::vector<std::string> warnings;

  const VelocityField& final_state() const { return states.back(); }
};

/// Node times T (i/m)^2, i = 1..m.
std::vector<double> graded_times(double T, int m);

/// Picard iteration of the Duhamel map on graded nodes. On each node interval
/// the s-integral interpolates the nonlinear term quadratically through three
/// neighbouring nodes and integrates the heat factor against it exactly.
/// Stops at residual <= tol, at max_iter, or on blow-up; `converged` records which.
NSTrace mild_solve_picard(const VelocityField& a, double T, int m = 32, int max_iter = 60, double tol = 1e-10,
                          const SolverOptions& opts = {});

/// Integrating-factor RK4 with `steps` uniform steps; every step is stored.
NSTrace step_ifrk4(const VelocityField& a, double T, int steps, const SolverOptions& opts = {});

/// sum_j inverse_space_norm(a_j, alpha, T, boxes).
double initial_data_norm(const VelocityField& a, double alpha, double T, const BoxFamily& boxes,
                         const NormOptions& opts = {});

struct SolutionNorm {
  double sup_part = 0.0;
  double carleson_part = 0.0;
  double total = 0.0;
};
/// sum_j x_space_norm of the component traces.
SolutionNorm solution_x_norm(const NSTrace& trace, double alpha, double T, const BoxFamily& boxes,
                             const NormOptions& opts = {});

/// Seeded divergence-free band-limited field with |k|_inf <= max_freq, unit max.
VelocityField random_velocity(const TorusGrid& grid, std::uint64_t seed, int max_freq = 3);

struct SmallDataConfig {
  std::vector<double> deltas{0.0, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
  double alpha = 0.0;
  double T = 0.1;
  int points_per_axis = 32;
  int nodes = 32;
  int max_iter = 60;
  double tol = 1e-10;
  std::uint64_t seed = 7;
  int max_freq = 3;
  int box_stride = 2;
  double max_ratio = 4.0;
};

struct SmallDataRow {
  double delta = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double initial_norm = 0.0;
  double solution_norm = 0.0;
  double sup_part = 0.0;
  double carleson_part = 0.0;
  double ratio = 0.0;  // solution_norm / delta
};

struct SmallDataReport {
  SmallDataConfig config;
  double linear_ratio = 0.0;  // ratio of the heat flow, the delta -> 0 limit
  std::vector<SmallDataRow> rows;
  double threshold = 0.0;     // largest delta below which every rung contracts with ratio <= max_ratio
  bool contraction_regime = false;
};

SmallDataReport smalldata_probe(const SmallDataConfig& cfg);

struct InflationConfig {
  double epsilon = 1.0;
  double alpha = 0.5;
  int modes = 8;  // K
  int base_freq = 4;
  double T = 0.01;
  int steps = 400;
  int points_per_axis = 32;
  std::uint64_t seed = 11;
  int box_stride = 2;
  bool nonlinear = true;
};

struct InflationReport {
  InflationConfig config;
  double initial_norm = 0.0;
  double sup_nonlinear = 0.0;  // sup_{t <= T} sqrt(t) max |u|
  double sup_linear = 0.0;     // same for the heat flow of the data
  double growth_ratio = 0.0;
  double shell_fraction = 0.0;
  std::vector<std::string> warnings;
};

/// K frequency-separated shear modes k_j = (F, j, 0), j = 0..K-1, with polarizations
/// alternating e_3 and k x e_3 / |k x e_3|, scaled to initial_data_norm = epsilon.
VelocityField shear_modes(const TorusGrid& grid, int modes, int base_freq, std::uint64_t seed);

InflationReport inflation_probe(const InflationConfig& cfg);

}  // namespace tlab::ns
