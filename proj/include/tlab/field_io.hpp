#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "tlab/grid.hpp"

namespace tlab {

// Binary layout (little endian), 32-byte header then samples:
//   0  char[4] "TLAB"
//   4  u32     version (1)
//   8  u32     dims n
//   12 u32     points per axis N
//   16 f64     period L
//   24 u8[8]   reserved, zero
//   32 f64[N^n] row-major samples
inline constexpr std::uint32_t kFieldFormatVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 32;

void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);
void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

/// One row per lattice point: i0[,i1[,i2]],value with full double precision.
void write_field_csv(std::ostream& out, const Field& f);

}  // namespace tlab
