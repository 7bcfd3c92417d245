// Serial reference vs OpenMP vs FFT convolution for the per-box kernels.
// Arguments: points per axis (1D) or per side (2D), and the ball radius in cells.

#include <benchmark/benchmark.h>

#include <random>

#include "tlab/kernels.hpp"

using namespace tlab;

namespace {

struct Setup {
  TorusGrid grid;
  std::vector<double> v;
  BallStencil ball;
  std::vector<std::size_t> centers;

  Setup(int dims, int n, int radius_cells) : grid(dims, n) {
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    v.resize(grid.size());
    for (auto& x : v) x = nd(rng);
    ball = make_ball_stencil(grid, radius_cells * grid.spacing());
    centers.resize(grid.size());
    for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = i;
  }
};

template <auto Kernel>
void sums(benchmark::State& st) {
  const Setup s(int(st.range(0)), int(st.range(1)), int(st.range(2)));
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(s.grid, s.v, s.ball, s.centers));
  st.SetItemsProcessed(st.iterations() * s.centers.size() * s.ball.size());
}

template <auto Kernel>
void pairs(benchmark::State& st) {
  const Setup s(int(st.range(0)), int(st.range(1)), int(st.range(2)));
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(s.grid, s.v, s.ball, s.centers, 1.5));
  st.SetItemsProcessed(st.iterations() * s.centers.size() * s.ball.size() * s.ball.size());
}

void sum_args(benchmark::internal::Benchmark* b) {
  b->Args({1, 4096, 64})->Args({1, 4096, 512})->Args({2, 128, 8})->Args({2, 128, 32})->Unit(benchmark::kMillisecond);
}

void pair_args(benchmark::internal::Benchmark* b) {
  b->Args({1, 512, 16})->Args({2, 32, 4})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(sums<kernels::ball_sums_serial>)->Name("ball_sums/serial")->Apply(sum_args);
BENCHMARK(sums<kernels::ball_sums_omp>)->Name("ball_sums/omp")->Apply(sum_args);
BENCHMARK(sums<kernels::ball_sums_spectral>)->Name("ball_sums/spectral")->Apply(sum_args);
BENCHMARK(sums<kernels::ball_oscillation_serial>)->Name("ball_oscillation/serial")->Apply(sum_args);
BENCHMARK(sums<kernels::ball_oscillation_omp>)->Name("ball_oscillation/omp")->Apply(sum_args);
BENCHMARK(pairs<kernels::pair_sums_serial>)->Name("pair_sums/serial")->Apply(pair_args);
BENCHMARK(pairs<kernels::pair_sums_omp>)->Name("pair_sums/omp")->Apply(pair_args);

BENCHMARK_MAIN();
