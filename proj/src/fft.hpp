#pragma once

#include <span>

#include "tlab/grid.hpp"

namespace tlab::detail {

// Unnormalized complex DFT over the whole grid. sign = -1 forward, +1 backward.
// Safe to call concurrently; plans are created once per (dims, N, sign) under a lock.
void dft(const TorusGrid& grid, std::span<const Complex> in, std::span<Complex> out, int sign);

}  // namespace tlab::detail
