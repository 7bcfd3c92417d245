#include "tlab/corpus.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "tlab/spectral.hpp"

namespace tlab {

namespace {

using Engine = std::mt19937_64;

// Calls fn(k) for every k in [-K, K]^n with k > 0 in lexicographic order
// (first nonzero component positive), a fixed, grid independent sequence.
template <class Fn>
void for_each_half_window(int dims, int K, Fn&& fn) {
  std::array<int, 3> k{0, 0, 0};
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == dims) {
      for (int d = 0; d < dims; ++d) {
        if (k[d] > 0) return fn(k);
        if (k[d] < 0) return;
      }
      return;
    }
    for (int v = -K; v <= K; ++v) {
      k[axis] = v;
      self(self, axis + 1);
    }
    k[axis] = 0;
  };
  rec(rec, 0);
}

double norm_of(const std::array<int, 3>& k, int dims) {
  double s = 0.0;
  for (int d = 0; d < dims; ++d) s += double(k[d]) * k[d];
  return std::sqrt(s);
}

void set_pair(SpectralField& f, const std::array<int, 3>& k, Complex c) {
  const auto& g = f.grid;
  std::array<int, 3> neg{-k[0], -k[1], -k[2]};
  f.coefficients[g.wrap(k)] += c;
  f.coefficients[g.wrap(neg)] += std::conj(c);
}

Complex gaussian_complex(Engine& eng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double re = n01(eng);
  const double im = n01(eng);
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

void frac_noise(SpectralField& f, const CorpusSpec& s, Engine& eng) {
  for_each_half_window(f.grid.dims, s.max_freq, [&](const std::array<int, 3>& k) {
    set_pair(f, k, std::pow(norm_of(k, f.grid.dims), -s.decay) * gaussian_complex(eng));
  });
}

void trig_poly(SpectralField& f, const CorpusSpec& s, Engine& eng) {
  std::vector<std::array<int, 3>> window;
  for_each_half_window(f.grid.dims, s.max_freq, [&](const std::array<int, 3>& k) { window.push_back(k); });
  std::uniform_int_distribution<std::size_t> pick(0, window.size() - 1);
  std::uniform_real_distribution<double> amp(0.5, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  for (int term = 0; term < 6; ++term) {
    const auto& k = window[pick(eng)];
    const double a = amp(eng) * std::pow(norm_of(k, f.grid.dims), -s.decay);
    set_pair(f, k, std::polar(0.5 * a, phase(eng)));
  }
}

void bump(SpectralField& f, const CorpusSpec& s, Engine& eng) {
  const int n = f.grid.dims;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::array<double, 3> x0{0, 0, 0};
  for (int d = 0; d < n; ++d) x0[d] = u01(eng);
  const double w = s.width;
  double peak = 1.0;
  std::vector<std::pair<std::array<int, 3>, Complex>> terms;
  for_each_half_window(n, s.max_freq, [&](const std::array<int, 3>& k) {
    const double k2 = norm_of(k, n) * norm_of(k, n);
    const double g = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * w * w * k2);
    double kx = 0.0;
    for (int d = 0; d < n; ++d) kx += k[d] * x0[d];
    terms.push_back({k, std::polar(g, -2.0 * std::numbers::pi * kx)});
    peak += 2.0 * g;
  });
  for (const auto& [k, c] : terms) set_pair(f, k, c / peak);
}

void step_like(SpectralField& f, const CorpusSpec& s, Engine& eng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double shift = u01(eng);
  const int K = s.max_freq;
  for (int m = 1; m <= K; m += 2) {
    const double z = std::numbers::pi * m / (K + 1);
    const double sigma = std::sin(z) / z;
    const double a = 4.0 / (std::numbers::pi * m) * sigma;
    // a sin(2 pi m (x - shift)) = c e^{2 pi i m x} + conj
    const Complex c = a / Complex(0.0, 2.0) * std::polar(1.0, -2.0 * std::numbers::pi * m * shift);
    set_pair(f, {m, 0, 0}, c);
  }
}

}  // namespace

std::string_view to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::trig_poly: return "trig_poly";
    case CorpusKind::frac_noise: return "frac_noise";
    case CorpusKind::bump: return "bump";
    case CorpusKind::single_mode: return "single_mode";
    case CorpusKind::step_like: return "step_like";
  }
  return "trig_poly";
}

CorpusKind corpus_kind_from_string(std::string_view name) {
  for (auto k : {CorpusKind::trig_poly, CorpusKind::frac_noise, CorpusKind::bump, CorpusKind::single_mode,
                 CorpusKind::step_like})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown corpus kind: " + std::string(name));
}

Field generate(const CorpusSpec& spec, const TorusGrid& grid) {
  const int limit = grid.points_per_axis / 2;
  if (spec.kind == CorpusKind::single_mode) {
    if (spec.mode < 0 || spec.mode >= limit) throw AliasingError("generate: mode must lie below N/2");
    const double k = 2.0 * std::numbers::pi * spec.mode / grid.period;
    return Field::from_function(grid, [&](std::span<const double> x) { return spec.amplitude * std::cos(k * x[0]); });
  }
  if (spec.max_freq < 1) throw std::invalid_argument("generate: max_freq must be positive");
  if (spec.max_freq >= limit) throw AliasingError("generate: max_freq must lie below N/2");
  if (!std::isfinite(spec.decay) || !std::isfinite(spec.amplitude) || !(spec.width > 0.0))
    throw std::invalid_argument("generate: bad spec parameters");

  Engine eng(spec.seed);
  SpectralField f(grid);
  switch (spec.kind) {
    case CorpusKind::frac_noise: frac_noise(f, spec, eng); break;
    case CorpusKind::trig_poly: trig_poly(f, spec, eng); break;
    case CorpusKind::bump: bump(f, spec, eng); break;
    case CorpusKind::step_like: step_like(f, spec, eng); break;
    case CorpusKind::single_mode: break;
  }
  for (auto& c : f.coefficients) c *= spec.amplitude;
  f.coefficients[0] = 0.0;
  return inverse_transform(f);
}

std::vector<CorpusSpec> default_corpus(std::uint64_t seed) {
  std::vector<CorpusSpec> out;
  std::uint64_t next = seed;
  auto add = [&](std::string name, CorpusKind kind, int max_freq, double decay, int mode = 1) {
    CorpusSpec s;
    s.name = std::move(name);
    s.seed = next++;
    s.kind = kind;
    s.max_freq = max_freq;
    s.decay = decay;
    s.mode = mode;
    out.push_back(s);
  };
  for (int i = 0; i < 8; ++i)
    add("frac_noise_" + std::to_string(i), CorpusKind::frac_noise, 32, 0.25 + 1.5 * i / 7.0);
  const int trig_freqs[6] = {2, 4, 6, 8, 12, 16};
  for (int i = 0; i < 6; ++i) add("trig_poly_" + std::to_string(i), CorpusKind::trig_poly, trig_freqs[i], 0.5);
  for (int m : {1, 3, 8}) add("single_mode_" + std::to_string(m), CorpusKind::single_mode, 1, 0.0, m);
  for (int K : {7, 15, 31}) add("step_like_" + std::to_string(K), CorpusKind::step_like, K, 0.0);
  return out;
}

std::uint64_t content_hash(const Field& f) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : f.samples()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace tlab
