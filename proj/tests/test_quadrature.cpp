#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tlab/quadrature.hpp"

using namespace tlab;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2q-1 exactly") {
  for (int q : {1, 2, 5, 8, 12}) {
    const auto rule = gauss_legendre(q, 0.5, 2.0);
    for (int p = 0; p <= 2 * q - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = (std::pow(2.0, p + 1) - std::pow(0.5, p + 1)) / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  const auto r = gauss_legendre(4);
  for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i) CHECK(r.nodes[i] < r.nodes[i + 1]);
}

TEST_CASE("dyadic time mesh") {
  const auto m = TimeMesh::dyadic(0.5, 10, 6);
  CHECK(m.size() == 60);
  CHECK(m.t_floor() == std::ldexp(0.5, -10));
  for (std::size_t i = 0; i + 1 < m.size(); ++i) CHECK(m.nodes[i] < m.nodes[i + 1]);
  CHECK(m.nodes.front() > m.t_floor());
  CHECK(m.nodes.back() < 0.5);

  // weights reproduce int_{floor}^{r_max} t^{-1/2} dt
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m.weights[i] / std::sqrt(m.nodes[i]);
  CHECK(s == doctest::Approx(2 * (std::sqrt(0.5) - std::sqrt(m.t_floor()))).epsilon(1e-9));

  // prefix property
  for (int p = 0; p < 10; ++p) {
    const auto count = m.nodes_up_to_panel(p);
    CHECK(count == static_cast<std::size_t>(6 * (10 - p)));
    CHECK(m.nodes[count - 1] <= m.panel_top(p));
    if (count < m.size()) CHECK(m.nodes[count] > m.panel_top(p));
  }
  CHECK(m.panel_for_height(0.125) == 2);
  CHECK_THROWS_AS(m.panel_for_height(0.1), std::invalid_argument);
  CHECK_THROWS_AS(m.panel_for_height(1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeMesh::dyadic(-1.0), std::invalid_argument);
}
