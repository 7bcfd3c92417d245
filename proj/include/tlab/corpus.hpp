#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/grid.hpp"

namespace tlab {

enum class CorpusKind { trig_poly, frac_noise, bump, single_mode, step_like };

std::string_view to_string(CorpusKind kind);
CorpusKind corpus_kind_from_string(std::string_view name);

/// Recipe for one deterministic test function.
///
/// Everything except single_mode is assembled from Fourier coefficients over
/// the fixed window |k|_inf <= max_freq, so the same spec gives the same
/// function on every grid fine enough to hold it.
struct CorpusSpec {
  std::string name;
  std::uint64_t seed = 0;
  CorpusKind kind = CorpusKind::trig_poly;
  int max_freq = 8;
  double decay = 1.0;      // spectral decay s (frac_noise, trig_poly)
  double amplitude = 1.0;
  int mode = 1;            // single_mode: cos(2 pi mode x_1 / L)
  double width = 0.05;     // bump: Gaussian width in units of L
};

/// Thrown when a spec needs frequencies the grid cannot represent.
struct AliasingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Field generate(const CorpusSpec& spec, const TorusGrid& grid);

/// 20 members: 8 frac_noise (s = 0.25..1.75), 6 trig_poly, 3 single_mode, 3 step_like.
std::vector<CorpusSpec> default_corpus(std::uint64_t seed = 20240601);

/// FNV-1a over the raw sample bytes.
std::uint64_t content_hash(const Field& f);

}  // namespace tlab
