#include <doctest.h>

#include <cmath>
#include <numbers>

#include "postcon/error.hpp"
#include "postcon/quadrature.hpp"

using namespace postcon;

TEST_SUITE("quadrature") {

TEST_CASE("Kronrod weights integrate constants and the Gauss rule is embedded") {
  double sk = 0.0, sg = 0.0, s6 = 0.0;
  const auto& x = KronrodRule::nodes();
  for (std::size_t i = 0; i < KronrodRule::kSize; ++i) {
    sk += KronrodRule::kronrod_weights()[i];
    sg += KronrodRule::gauss_weights()[i];
    s6 += KronrodRule::gauss_weights()[i] * std::pow(x[i], 12);
  }
  CHECK(sk == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sg == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s6 == doctest::Approx(2.0 / 13.0).epsilon(1e-14));
}

TEST_CASE("smooth, oscillatory and kinked integrands") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return std::exp(x); }, {0.0, 1.0}, cfg);
  CHECK(r.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));

  const double w = 2000.0;
  r = integrate([&](double x) { return std::cos(w * x) * std::cos(w * x); }, {0.0, 1.0}, cfg, w);
  CHECK(r.value == doctest::Approx(0.5 + std::sin(2 * w) / (4 * w)).epsilon(1e-12));

  const double bp[] = {1.0 / 3.0};
  r = integrate([](double x) { return std::abs(x - 1.0 / 3.0); }, {0.0, 1.0}, cfg, 0.0, bp);
  CHECK(r.value == doctest::Approx(1.0 / 18.0 + 2.0 / 9.0).epsilon(1e-14));
  CHECK(r.panels >= 2);
}

TEST_CASE("initial panels respect breakpoints and the oscillation guard") {
  const double bp[] = {0.25, 2.0};
  const auto p = initial_panels({0.0, 1.0}, 100.0, 8, bp);
  const double width = 2.0 * std::numbers::pi / 100.0 / 8.0;
  bool hit = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i].length() <= width * (1 + 1e-12));
    if (i > 0) CHECK(p[i].lo == p[i - 1].hi);
    hit = hit || p[i].hi == 0.25;
  }
  CHECK(hit);
  CHECK(p.front().lo == 0.0);
  CHECK(p.back().hi == 1.0);
}

TEST_CASE("panel budget exhaustion is a numerical error") {
  QuadratureConfig cfg;
  cfg.max_panels = 4;
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(x + 1e-14); }, {0.0, 1.0}, cfg),
                  NumericalError);
}

TEST_CASE("invalid configuration") {
  QuadratureConfig cfg;
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

}
