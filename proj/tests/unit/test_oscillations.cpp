#include <doctest.h>

#include <cmath>
#include <numbers>

#include "postcon/metrics.hpp"
#include "postcon/model.hpp"
#include "postcon/oscillations.hpp"

using namespace postcon;
using std::numbers::pi;

namespace {

Member random_mixture(std::uint64_t seed) {
  auto u = [&](std::uint64_t i) { return uniform_variate(seed, i); };
  const double w0 = 0.1 + 0.8 * u(0), w1 = (1.0 - w0) * (0.1 + 0.8 * u(1));
  return {FamilySpec::gauss_mixture({{w0, -2.0 + 4.0 * u(2), 0.5 + 4.0 * u(3)},
                                     {w1, -2.0 + 4.0 * u(4), 0.5 + 4.0 * u(5)},
                                     {1.0 - w0 - w1, -2.0 + 4.0 * u(6), 0.5 + 4.0 * u(7)}}),
          Theta(0.0)};
}

// Number of maximal runs of grid points with f - g > 0 on a uniform grid.
std::size_t grid_runs(const Member& f, const Member& g, Interval d, std::size_t points) {
  std::size_t runs = 0;
  bool prev = false;
  for (std::size_t k = 0; k <= points; ++k) {
    const double x = d.lo + d.length() * static_cast<double>(k) / static_cast<double>(points);
    const bool above = density_or_zero(f.family, f.theta, x) - density_or_zero(g.family, g.theta, x) > 1e-12;
    if (above && !prev) ++runs;
    prev = above;
  }
  return runs;
}

}  // namespace

TEST_SUITE("oscillations") {

TEST_CASE("cosine against uniform") {
  const auto s = exceedance_intervals(cosine_member(2 * pi), cosine_member(0.0));
  REQUIRE(s.size() == 2);
  CHECK(s.intervals[0].lo == 0.0);
  CHECK(s.intervals[0].hi == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(s.intervals[1].lo == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(s.intervals[1].hi == 1.0);
  CHECK(s.contains(0.1));
  CHECK_FALSE(s.contains(0.5));
  CHECK(exceedance_intervals(cosine_member(3.0), cosine_member(3.0)).empty());
  CHECK(oscillation_count(cosine_member(4 * pi), cosine_member(0.0)) == 3);
  for (std::size_t j = 1; j <= 5; ++j) {
    CHECK(oscillation_count(cosine_member(2 * pi * static_cast<double>(j)), cosine_member(0.0)) == j + 1);
  }
  CHECK(oscillation_count(cosine_member(0.0), cosine_member(0.0)) == 0);
}

TEST_CASE("endpoints bracket sign changes and merging is never possible") {
  const Member f = cosine_member(37.0), g = cosine_member(11.0);
  const auto s = exceedance_intervals(f, g);
  auto diff = [&](double x) { return density_or_zero(f.family, f.theta, x) - density_or_zero(g.family, g.theta, x); };
  REQUIRE(!s.empty());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& iv = s.intervals[i];
    CHECK(iv.lo < iv.hi);
    if (iv.lo > 0.0) {
      CHECK(diff(iv.lo - 1e-9) <= 1e-7);
      CHECK(diff(iv.lo + 1e-9) >= -1e-7);
    }
    if (iv.hi < 1.0) {
      CHECK(diff(iv.hi + 1e-9) <= 1e-7);
      CHECK(diff(iv.hi - 1e-9) >= -1e-7);
    }
    if (i > 0) {
      const auto& prev = s.intervals[i - 1];
      CHECK(prev.hi < iv.lo);
      // Some point of the 1e4 grid between the two pieces is not above.
      bool gap = false;
      for (int k = 0; k <= 10000 && !gap; ++k) {
        const double x = prev.hi + (iv.lo - prev.hi) * k / 10000.0;
        gap = diff(x) <= 0.0;
      }
      CHECK(gap);
    }
  }
  CHECK(s.size() == grid_runs(f, g, {0.0, 1.0}, 1000000));
}

TEST_CASE("three-component mixtures oscillate at most six times") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Member f = random_mixture(1000 + 2 * k), g = random_mixture(1001 + 2 * k);
    const auto s = exceedance_intervals(f, g);
    CHECK(s.size() <= 6);
    if (k < 10) CHECK(s.size() == grid_runs(f, g, s.domain, 1000000));
  }
}

TEST_CASE("oscillation inequality along theta_j = 2 pi j") {
  std::vector<Theta> seq;
  for (int j = 1; j <= 12; ++j) seq.emplace_back(2 * pi * j);
  const auto reports = theorem3_check(seq, cosine_member(0.0), 0.30);
  REQUIRE(reports.size() == seq.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(reports[i].count == i + 2);
    CHECK(reports[i].inequality_holds);
    CHECK(reports[i].tv_epsilon == doctest::Approx(0.30));
    if (i > 0) CHECK(reports[i].count > reports[i - 1].count);
    // Uniform G: the modulus equals the shift.
    CHECK(reports[i].modulus == doctest::Approx(reports[i].lp_delta).epsilon(1e-9));
  }
}

TEST_CASE("oscillation inequality on degenerate and constant sequences") {
  const Theta same[] = {Theta(5.0)};
  const auto r = theorem3_check(same, cosine_member(5.0), 0.30);
  REQUIRE(r.size() == 1);
  CHECK(r[0].count == 0);
  CHECK(r[0].tv_epsilon == doctest::Approx(0.0));
  CHECK(r[0].inequality_holds);

  const std::vector<Theta> constant(4, Theta(2 * pi));
  const auto c = theorem3_check(constant, cosine_member(0.0), 0.30);
  for (const auto& rep : c) {
    CHECK(rep.count == 2);
    CHECK(rep.inequality_holds);
    CHECK(rep.lp_delta == c[0].lp_delta);
  }
}

}
