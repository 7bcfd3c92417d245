#include "tlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace tlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw std::invalid_argument("spectral: grid mismatch");
}

template <class Symbol>
SpectralField apply_symbol(const SpectralField& f, Symbol&& symbol) {
  SpectralField out(f.grid);
  const auto n = static_cast<std::ptrdiff_t>(f.coefficients.size());
#pragma omp parallel for if (n > 65536)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out.coefficients[i] = symbol(static_cast<std::size_t>(i)) * f.coefficients[i];
  return out;
}

}  // namespace

std::string_view to_string(ExtensionKind kind) {
  return kind == ExtensionKind::poisson ? "poisson" : "heat";
}

ExtensionKind extension_kind_from_string(std::string_view name) {
  if (name == "poisson") return ExtensionKind::poisson;
  if (name == "heat") return ExtensionKind::heat;
  throw std::invalid_argument("unknown extension kind: " + std::string(name));
}

SpectralField forward_transform(const Field& f) {
  const auto& grid = f.grid();
  std::vector<Complex> in(f.samples().begin(), f.samples().end());
  for (double v : f.samples())
    if (!std::isfinite(v)) throw std::invalid_argument("forward_transform: non-finite sample");
  SpectralField out(grid);
  detail::dft(grid, in, out.coefficients, -1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out.coefficients) c *= scale;
  return out;
}

Field inverse_transform(const SpectralField& f) {
  std::vector<Complex> out(f.grid.size());
  detail::dft(f.grid, f.coefficients, out, +1);
  std::vector<double> s(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) s[i] = out[i].real();
  return Field(f.grid, std::move(s));
}

double sqrt_laplacian_symbol(const TorusGrid& grid, std::size_t flat) {
  return kTwoPi * grid.frequency_norm(flat) / grid.period;
}

double semigroup_rate(const TorusGrid& grid, std::size_t flat, ExtensionKind kind) {
  const double s = sqrt_laplacian_symbol(grid, flat);
  return kind == ExtensionKind::poisson ? s : s * s;
}

SpectralField semigroup(const SpectralField& f, double t, ExtensionKind kind) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("semigroup: t must be finite and >= 0");
  if (t == 0.0) return f;
  return apply_symbol(f, [&](std::size_t i) { return std::exp(-semigroup_rate(f.grid, i, kind) * t); });
}

SpectralField poisson_semigroup(const SpectralField& f, double t) {
  return semigroup(f, t, ExtensionKind::poisson);
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
  return semigroup(f, t, ExtensionKind::heat);
}

SpectralField frac_laplacian_power(const SpectralField& f, double s) {
  if (!(s > -1.0 && s < 1.0)) throw std::domain_error("frac_laplacian_power: s must lie in (-1, 1)");
  if (s < 0.0 && !f.is_mean_zero())
    throw std::invalid_argument("frac_laplacian_power: negative power needs mean-zero input");
  return apply_symbol(f, [&](std::size_t i) {
    if (i == 0) return 0.0;
    return s == 0.0 ? 1.0 : std::pow(sqrt_laplacian_symbol(f.grid, i), s);
  });
}

SpectralField riesz_transform(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dims) throw std::domain_error("riesz_transform: axis out of range");
  return apply_symbol(f, [&](std::size_t i) -> Complex {
    const auto idx = f.grid.unflatten(i);
    if (i == 0 || f.grid.is_nyquist(idx[axis])) return 0.0;
    return Complex(0.0, f.grid.frequency(idx[axis]) / f.grid.frequency_norm(i));
  });
}

std::vector<SpectralField> leray_project(std::span<const SpectralField> v) {
  if (v.empty()) throw std::invalid_argument("leray_project: empty field");
  const auto& grid = v.front().grid;
  if (static_cast<int>(v.size()) != grid.dims)
    throw std::invalid_argument("leray_project: need one component per dimension");
  for (const auto& c : v) require_same_grid(grid, c.grid);
  std::vector<SpectralField> out(v.size(), SpectralField(grid));
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for if (n > 65536)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto idx = grid.unflatten(i);
    std::array<double, 3> k{0, 0, 0};
    double k2 = 0.0;
    for (int d = 0; d < grid.dims; ++d) {
      k[d] = grid.frequency(idx[d]);
      k2 += k[d] * k[d];
    }
    Complex kv = 0.0;
    for (int d = 0; d < grid.dims; ++d) kv += k[d] * v[d].coefficients[i];
    for (int d = 0; d < grid.dims; ++d)
      out[d].coefficients[i] = k2 == 0.0 ? v[d].coefficients[i] : v[d].coefficients[i] - k[d] * kv / k2;
  }
  return out;
}

SpectralField partial_derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dims) throw std::domain_error("partial_derivative: axis out of range");
  return apply_symbol(f, [&](std::size_t i) -> Complex {
    const auto idx = f.grid.unflatten(i);
    if (f.grid.is_nyquist(idx[axis])) return 0.0;
    return Complex(0.0, kTwoPi * f.grid.frequency(idx[axis]) / f.grid.period);
  });
}

std::vector<Field> spatial_gradient(const SpectralField& f) {
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(f.grid.dims));
  for (int d = 0; d < f.grid.dims; ++d) out.push_back(inverse_transform(partial_derivative(f, d)));
  return out;
}

SpectralField divergence(std::span<const SpectralField> v) {
  if (v.empty()) throw std::invalid_argument("divergence: empty field");
  SpectralField out(v.front().grid);
  for (int d = 0; d < static_cast<int>(v.size()); ++d) {
    require_same_grid(out.grid, v[d].grid);
    const auto dv = partial_derivative(v[d], d);
    for (std::size_t i = 0; i < out.coefficients.size(); ++i) out.coefficients[i] += dv.coefficients[i];
  }
  return out;
}

SpectralField extension_time_derivative(const SpectralField& f, double t, ExtensionKind kind) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("extension_time_derivative: t must be > 0");
  return apply_symbol(f, [&](std::size_t i) {
    const double a = semigroup_rate(f.grid, i, kind);
    return -a * std::exp(-a * t);
  });
}

SpectralField remove_zero_mode(SpectralField f) {
  f.coefficients.front() = 0.0;
  return f;
}

double max_abs_difference(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  double m = 0.0;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i)
    m = std::max(m, std::abs(a.coefficients[i] - b.coefficients[i]));
  return m;
}

double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coefficients) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace tlab
