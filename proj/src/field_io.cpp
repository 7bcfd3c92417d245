#include "tlab/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tlab {

static_assert(std::endian::native == std::endian::little, "field format assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("read_field: truncated header");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const auto& g = f.grid();
  out.write("TLAB", 4);
  put<std::uint32_t>(out, kFieldFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dims));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_axis));
  put<double>(out, g.period);
  const std::array<char, 8> reserved{};
  out.write(reserved.data(), reserved.size());
  out.write(reinterpret_cast<const char*>(f.samples().data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_field: stream error");
}

Field read_field(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "TLAB", 4) != 0) throw std::runtime_error("read_field: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kFieldFormatVersion) throw std::runtime_error("read_field: unsupported version");
  const auto dims = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto period = get<double>(in);
  std::array<char, 8> reserved{};
  in.read(reserved.data(), reserved.size());
  if (!in) throw std::runtime_error("read_field: truncated header");
  TorusGrid grid(static_cast<int>(dims), static_cast<int>(n), period);
  std::vector<double> s(grid.size());
  in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field: truncated sample block");
  return Field(grid, std::move(s));
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

void write_field_csv(std::ostream& out, const Field& f) {
  const auto& g = f.grid();
  static const char* names[] = {"i0", "i1", "i2"};
  for (int d = 0; d < g.dims; ++d) out << names[d] << ',';
  out << "value\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = g.unflatten(i);
    for (int d = 0; d < g.dims; ++d) out << idx[d] << ',';
    out << f[i] << '\n';
  }
}

}  // namespace tlab
