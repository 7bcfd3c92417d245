#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "tlab/grid.hpp"

namespace tlab {

enum class ExtensionKind { poisson, heat };

std::string_view to_string(ExtensionKind kind);
ExtensionKind extension_kind_from_string(std::string_view name);

SpectralField forward_transform(const Field& f);
/// Real part of the inverse transform. Hermitian input gives a real field.
Field inverse_transform(const SpectralField& f);

// Symbols on a torus of period L; k is the integer frequency vector.
//   sqrt(-Laplacian):  2 pi |k| / L
//   Poisson:           exp(-2 pi |k| t / L)
//   heat:              exp(-4 pi^2 |k|^2 t / L^2)
double sqrt_laplacian_symbol(const TorusGrid& grid, std::size_t flat);
/// Exponent a(k) of the semigroup symbol exp(-a(k) t).
double semigroup_rate(const TorusGrid& grid, std::size_t flat, ExtensionKind kind);

SpectralField poisson_semigroup(const SpectralField& f, double t);
SpectralField heat_semigroup(const SpectralField& f, double t);
SpectralField semigroup(const SpectralField& f, double t, ExtensionKind kind);

/// (-Laplacian)^{s/2}, s in (-1, 1). The zero mode is always sent to 0;
/// negative s requires mean-zero input.
SpectralField frac_laplacian_power(const SpectralField& f, double s);

/// R_j with symbol i k_j / |k|. Zero mode and the axis-j Nyquist plane map to 0.
SpectralField riesz_transform(const SpectralField& f, int axis);

/// Leray projector delta_jl - k_j k_l / |k|^2 on an n-component field.
std::vector<SpectralField> leray_project(std::span<const SpectralField> v);

/// Spectral derivative along one axis (symbol 2 pi i k_j / L, Nyquist dropped).
SpectralField partial_derivative(const SpectralField& f, int axis);
std::vector<Field> spatial_gradient(const SpectralField& f);
/// sum_j d_j v_j in spectral form.
SpectralField divergence(std::span<const SpectralField> v);

/// d/dt of the Poisson or heat extension at t > 0.
SpectralField extension_time_derivative(const SpectralField& f, double t, ExtensionKind kind);

/// Sets the zero mode to 0.
SpectralField remove_zero_mode(SpectralField f);

double max_abs_difference(const SpectralField& a, const SpectralField& b);
double max_abs(const SpectralField& a);

}  // namespace tlab
