#include <doctest.h>

#include "oracles.hpp"
#include "tlab/boxes.hpp"
#include "tlab/kernels.hpp"

using namespace tlab;
namespace k = tlab::kernels;

TEST_CASE("ball stencils agree with the image-sum definition") {
  for (const auto& g : {TorusGrid(1, 16, 2.0), TorusGrid(2, 8), TorusGrid(3, 8)}) {
    for (double frac : {0.5, 0.25, 0.125, 0.3}) {
      const double r = frac * g.period;
      if (r < g.spacing()) continue;
      const auto ball = make_ball_stencil(g, r);
      std::vector<double> w(g.size(), 0.0);
      for (std::size_t i = 0; i < ball.size(); ++i) w[g.wrap(ball.offsets[i])] += ball.weights[i];
      double total = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) {
        CHECK(w[x] == oracle::ball_weight(g, 0, x, r));
        total += w[x];
      }
      CHECK(total == ball.weight_sum);
    }
  }
  // 1D balls at dyadic radii have lattice measure exactly 2r
  const TorusGrid g(1, 64);
  for (int j = 1; j <= 5; ++j) {
    const double r = std::ldexp(1.0, -j);
    CHECK(make_ball_stencil(g, r).measure(g) == doctest::Approx(2 * r).epsilon(1e-14));
  }
  CHECK_THROWS(make_ball_stencil(g, 0.6));
  CHECK_THROWS(make_ball_stencil(g, 0.0));
}

TEST_CASE("box families") {
  const TorusGrid g(2, 64);
  const auto s = BoxFamily::standard(g);
  CHECK(s.radii.size() == 5);
  CHECK(s.stride == 2);
  CHECK(s.centers.size() == 32 * 32);
  CHECK(s.radii.back() == doctest::Approx(2 * g.spacing()));
  const auto f = BoxFamily::full(TorusGrid(1, 16));
  CHECK(f.centers.size() == 16);
  CHECK(f.box_count() == 16 * 3);
  const auto h = BoxFamily::dyadic(TorusGrid(1, 64), 2, 4, 2).halved();
  CHECK(h.radii.front() == doctest::Approx(0.125));
  CHECK(h.centers[3] == 3);
  CHECK(h.scale == 0.5);
  CHECK_THROWS(BoxFamily::dyadic(g, 0, 3, 1));
  CHECK_THROWS(BoxFamily::dyadic(g, 2, 1, 1));
  CHECK_THROWS(BoxFamily::dyadic(g, 1, 3, 3));
  CHECK_THROWS(BoxFamily::dyadic(g, 1, 8, 1));
  CHECK_THROWS(BoxFamily::dyadic(TorusGrid(1, 64), 5, 5, 32));
  CHECK_THROWS(BoxFamily::dyadic(TorusGrid(1, 64), 2, 5, 1).halved());
  CHECK(log2_exact(256) == 8);
  CHECK_THROWS(log2_exact(24));
}

TEST_CASE("serial, OpenMP and spectral kernels agree") {
  for (const auto& g : {TorusGrid(1, 128), TorusGrid(2, 32), TorusGrid(3, 8)}) {
    const Field f = oracle::random_field(g, 5);
    const auto v = f.samples();
    const auto fam = BoxFamily::full(g);
    const auto sub = BoxFamily::dyadic(g, 1, 2, 2);
    for (double r : fam.radii) {
      const auto ball = make_ball_stencil(g, r);
      const auto a = k::ball_sums_serial(g, v, ball, fam.centers);
      const auto b = k::ball_sums_omp(g, v, ball, fam.centers);
      const auto c = k::ball_sums_spectral(g, v, ball, fam.centers);
      const auto d = k::ball_sums(g, v, ball, fam.centers);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (1 + std::abs(a[i])));
        CHECK(std::abs(a[i] - c[i]) <= 1e-10 * (1 + std::abs(a[i])));
        CHECK(std::abs(a[i] - d[i]) <= 1e-10 * (1 + std::abs(a[i])));
      }
      const auto o1 = k::ball_oscillation_serial(g, v, ball, fam.centers);
      const auto o2 = k::ball_oscillation_omp(g, v, ball, fam.centers);
      for (std::size_t i = 0; i < o1.size(); ++i) CHECK(std::abs(o1[i] - o2[i]) <= 1e-12 * (1 + o1[i]));
      if (r <= 0.25) {
        const auto p1 = k::pair_sums_serial(g, v, ball, sub.centers, g.dims + 0.5);
        const auto p2 = k::pair_sums_omp(g, v, ball, sub.centers, g.dims + 0.5);
        for (std::size_t i = 0; i < p1.size(); ++i) CHECK(std::abs(p1[i] - p2[i]) <= 1e-12 * (1 + p1[i]));
      }
    }
  }
}

TEST_CASE("kernels against brute-force ball loops") {
  const TorusGrid g(2, 8);
  const Field f = oracle::random_field(g, 9);
  for (double r : {0.5, 0.25}) {
    const auto ball = make_ball_stencil(g, r);
    std::vector<std::size_t> centers{0, 9, 63};
    const auto s = k::ball_sums(g, f.samples(), ball, centers, k::Backend::serial);
    const auto o = k::ball_oscillation(g, f.samples(), ball, centers, k::Backend::omp);
    const auto p = k::pair_sums(g, f.samples(), ball, centers, 2.5, k::Backend::serial);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double W = 0, S = 0, S2 = 0, P = 0;
      for (std::size_t x = 0; x < g.size(); ++x) {
        const double w = oracle::ball_weight(g, centers[i], x, r);
        W += w;
        S += w * f[x];
        S2 += w * f[x] * f[x];
        for (std::size_t y = 0; y < g.size(); ++y)
          if (y != x)
            P += w * oracle::ball_weight(g, centers[i], y, r) * std::pow(f[x] - f[y], 2) *
                 std::pow(oracle::torus_distance(g, x, y), -2.5);
      }
      CHECK(s[i] == doctest::Approx(S).epsilon(1e-12));
      CHECK(o[i] == doctest::Approx(S2 - S * S / W).epsilon(1e-11));
      CHECK(p[i] == doctest::Approx(P).epsilon(1e-11));
    }
  }
}

TEST_CASE("backend names") {
  for (auto b : {k::Backend::automatic, k::Backend::serial, k::Backend::omp, k::Backend::spectral})
    CHECK(k::backend_from_string(k::to_string(b)) == b);
  CHECK_THROWS(k::backend_from_string("gpu"));
}
