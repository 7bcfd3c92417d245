#include "tlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tlab {

bool is_power_of_two(long n) { return n >= 2 && (n & (n - 1)) == 0; }

TorusGrid::TorusGrid(int dims_, int n, double L) : dims(dims_), points_per_axis(n), period(L) {
  if (dims < 1 || dims > 3) throw std::invalid_argument("TorusGrid: dims must be 1, 2 or 3");
  if (!is_power_of_two(n)) throw std::invalid_argument("TorusGrid: points per axis must be a power of two");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("TorusGrid: period must be positive");
}

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dims; ++d) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dims); }

std::array<int, 3> TorusGrid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(points_per_axis);
  for (int d = dims - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::size_t TorusGrid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dims; ++d) flat = flat * points_per_axis + static_cast<std::size_t>(idx[d]);
  return flat;
}

std::size_t TorusGrid::wrap(const std::array<int, 3>& idx) const {
  std::array<int, 3> w{0, 0, 0};
  for (int d = 0; d < dims; ++d) {
    int v = idx[d] % points_per_axis;
    w[d] = v < 0 ? v + points_per_axis : v;
  }
  return flatten(w);
}

std::array<double, 3> TorusGrid::coordinates(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0, 0, 0};
  for (int d = 0; d < dims; ++d) x[d] = idx[d] * spacing();
  return x;
}

double TorusGrid::frequency_norm(std::size_t flat) const {
  const auto idx = unflatten(flat);
  double s = 0.0;
  for (int d = 0; d < dims; ++d) {
    const double k = frequency(idx[d]);
    s += k * k;
  }
  return std::sqrt(s);
}

Field::Field(const TorusGrid& grid) : grid_(grid), samples_(grid.size(), 0.0) {}

Field::Field(const TorusGrid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size())
    throw std::invalid_argument("Field: expected " + std::to_string(grid_.size()) + " samples, got " +
                                std::to_string(samples_.size()));
  for (double v : samples_)
    if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite sample");
}

Field Field::from_function(const TorusGrid& grid,
                           const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto x = grid.coordinates(i);
    s[i] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dims)));
  }
  return Field(grid, std::move(s));
}

double Field::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return samples_.empty() ? 0.0 : s / static_cast<double>(samples_.size());
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::is_mean_zero() const { return std::abs(mean()) <= 1e-12 * max_abs(); }

Field Field::without_mean() const {
  Field out = *this;
  const double m = mean();
  for (double& v : out.samples_) v -= m;
  return out;
}

Field& Field::operator*=(double c) {
  for (double& v : samples_) v *= c;
  return *this;
}

Field& Field::operator+=(const Field& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("Field: grid mismatch");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Field operator*(double c, Field f) { return f *= c; }

SpectralField::SpectralField(const TorusGrid& g, std::vector<Complex> c)
    : grid(g), coefficients(std::move(c)) {
  if (coefficients.size() != grid.size()) throw std::invalid_argument("SpectralField: size mismatch");
}

double SpectralField::l1() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::abs(c);
  return s;
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    auto idx = grid.unflatten(i);
    for (int d = 0; d < grid.dims; ++d) idx[d] = -idx[d];
    const auto j = grid.wrap(idx);
    worst = std::max(worst, std::abs(coefficients[i] - std::conj(coefficients[j])));
  }
  return worst;
}

bool SpectralField::is_mean_zero() const { return std::abs(zero_mode()) <= 1e-12 * l1(); }

}  // namespace tlab
