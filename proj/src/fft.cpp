#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace tlab::detail {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const TorusGrid& grid, int sign) {
    const auto key = std::make_tuple(grid.dims, grid.points_per_axis, sign);
    std::lock_guard lock(mutex);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    int n[3] = {grid.points_per_axis, grid.points_per_axis, grid.points_per_axis};
    const auto size = grid.size();
    auto* a = fftw_alloc_complex(size);
    auto* b = fftw_alloc_complex(size);
    fftw_plan plan = fftw_plan_dft(grid.dims, n, a, b, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (!plan) throw std::runtime_error("fftw: plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft(const TorusGrid& grid, std::span<const Complex> in, std::span<Complex> out, int sign) {
  if (in.size() != grid.size() || out.size() != grid.size())
    throw std::invalid_argument("dft: buffer size mismatch");
  fftw_plan plan = cache().get(grid, sign);
  // new-array execution is thread-safe; FFTW never writes the input of an out-of-place c2c plan
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace tlab::detail
