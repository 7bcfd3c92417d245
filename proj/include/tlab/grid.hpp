#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tlab {

using Complex = std::complex<double>;

/// Uniform periodic lattice on the torus [0, L)^n with N points per axis.
///
/// N must be an even power of two so that dyadic rescaling maps the lattice
/// onto itself. Samples are stored row-major with the last axis fastest.
struct TorusGrid {
  int dims = 1;
  int points_per_axis = 2;
  double period = 1.0;

  TorusGrid() = default;
  TorusGrid(int dims, int points_per_axis, double period = 1.0);

  std::size_t size() const;
  double spacing() const { return period / points_per_axis; }
  double cell_volume() const;

  /// Integer frequency of an axis index, in [-N/2, N/2).
  int frequency(int index) const {
    return index < points_per_axis / 2 ? index : index - points_per_axis;
  }
  bool is_nyquist(int index) const { return index == points_per_axis / 2; }

  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  /// Lattice index with periodic wraparound on every axis.
  std::size_t wrap(const std::array<int, 3>& idx) const;

  /// Physical coordinates of lattice point `flat`.
  std::array<double, 3> coordinates(std::size_t flat) const;

  /// |k| for the frequency vector of flat index `flat` (integer units).
  double frequency_norm(std::size_t flat) const;

  bool operator==(const TorusGrid&) const = default;
};

/// Real samples of a function on a TorusGrid.
class Field {
 public:
  Field() = default;
  explicit Field(const TorusGrid& grid);  // zero field
  Field(const TorusGrid& grid, std::vector<double> samples);

  static Field from_function(const TorusGrid& grid,
                             const std::function<double(std::span<const double>)>& fn);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  double mean() const;
  double max_abs() const;
  /// |mean| <= 1e-12 * max|samples|.
  bool is_mean_zero() const;
  Field without_mean() const;

  Field& operator*=(double c);
  Field& operator+=(const Field& other);

 private:
  TorusGrid grid_;
  std::vector<double> samples_;
};

Field operator*(double c, Field f);

/// Fourier coefficients c(k) = N^{-n} sum_x f(x) exp(-2 pi i k.x / L),
/// stored at the same flat positions as the samples.
struct SpectralField {
  TorusGrid grid;
  std::vector<Complex> coefficients;

  SpectralField() = default;
  explicit SpectralField(const TorusGrid& g) : grid(g), coefficients(g.size()) {}
  SpectralField(const TorusGrid& g, std::vector<Complex> c);

  Complex zero_mode() const { return coefficients.front(); }
  /// sum_k |c(k)|, an upper bound for max|f|.
  double l1() const;
  /// Largest |c(k) - conj(c(-k))| over all k.
  double hermitian_defect() const;
  bool is_mean_zero() const;
};

/// Number of points per axis must be a power of two >= 2.
bool is_power_of_two(long n);

}  // namespace tlab
