#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "postcon/metrics.hpp"

using namespace postcon;
using std::numbers::pi;

TEST_SUITE("metrics") {

TEST_CASE("closed forms against the uniform member") {
  for (int j : {1, 3, 10}) {
    const double t = 2.0 * pi * j;
    const Member a = cosine_member(t), u = cosine_member(0.0);
    CHECK(total_variation(a, u) == doctest::Approx(1.0 / pi).epsilon(1e-10));
    CHECK(kolmogorov_distance(a, u) == doctest::Approx(1.0 / t).epsilon(1e-9));
    CHECK(levy_distance(a, u) == doctest::Approx(1.0 / (2.0 * t)).epsilon(1e-6));
    CHECK(hellinger(a, u) == doctest::Approx(std::sqrt(2.0 - 4.0 * std::sqrt(2.0) / pi)).epsilon(1e-10));
  }
}

TEST_CASE("metric axioms") {
  const Member a = cosine_member(3.3), b = cosine_member(17.0);
  CHECK(hellinger(a, a) == doctest::Approx(0.0));
  CHECK(total_variation(a, a) == doctest::Approx(0.0));
  CHECK(kl_divergence(a, a) == doctest::Approx(0.0));
  CHECK(hellinger(a, b) == doctest::Approx(hellinger(b, a)).epsilon(1e-12));
  CHECK(levy_distance(a, b) == doctest::Approx(levy_distance(b, a)).epsilon(1e-8));
  CHECK(hellinger(a, b) <= std::sqrt(2.0));
  // Le Cam: H^2 / 2 <= TV <= H.
  const double h = hellinger(a, b), tv = total_variation(a, b);
  CHECK(h * h / 2.0 <= tv + 1e-12);
  CHECK(tv <= h + 1e-12);
}

TEST_CASE("hellinger, TV and KL agree with Simpson oracles") {
  for (auto [s, t] : {std::pair{0.5, 4.0}, {3.0, 40.0}, {11.0, 11.5}}) {
    auto f = [&](double x) { return oracle::cosine_density(s, x); };
    auto g = [&](double x) { return oracle::cosine_density(t, x); };
    const std::size_t n = 400000;
    const double h2 = oracle::simpson([&](double x) { return std::pow(std::sqrt(f(x)) - std::sqrt(g(x)), 2); }, 0, 1, n);
    const double tv = 0.5 * oracle::simpson([&](double x) { return std::abs(f(x) - g(x)); }, 0, 1, n);
    const double kl = oracle::simpson([&](double x) { return f(x) > 0 ? f(x) * std::log(f(x) / g(x)) : 0.0; }, 0, 1, n);
    CHECK(hellinger(cosine_member(s), cosine_member(t)) == doctest::Approx(std::sqrt(h2)).epsilon(1e-6));
    CHECK(total_variation(cosine_member(s), cosine_member(t)) == doctest::Approx(tv).epsilon(1e-6));
    CHECK(kl_divergence(cosine_member(s), cosine_member(t)) == doctest::Approx(kl).epsilon(1e-5));
  }
}

TEST_CASE("KL is infinite when the truth has mass on the other's zero set") {
  // f_0 is uniform, f_{2 pi} vanishes at 1/2: the log ratio diverges only
  // logarithmically, so the integral is finite; UniformScale gives a true support mismatch.
  const Member wide{FamilySpec::uniform_scale(), Theta(2.0)};
  const Member narrow{FamilySpec::uniform_scale(), Theta(1.0)};
  CHECK(std::isinf(kl_divergence(wide, narrow)));
  CHECK(kl_divergence(narrow, wide) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("Levy distance agrees with a grid oracle") {
  for (auto [s, t] : {std::pair{0.0, 9.0}, {5.0, 60.0}, {1.0, 1.2}}) {
    auto F = [&](double x) { return oracle::cosine_cdf(s, x); };
    auto G = [&](double x) { return oracle::cosine_cdf(t, x); };
    const double ref = oracle::levy_grid(F, G, 0.0, 1.0, 200000);
    CHECK(levy_distance(cosine_member(s), cosine_member(t)) == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("Levy-Prokhorov bound dominates Levy and stays close for these pairs") {
  for (auto [s, t] : {std::pair{0.0, 2.0 * pi}, {0.0, 40.0 * pi}, {5.0, 60.0}}) {
    const double l = levy_distance(cosine_member(s), cosine_member(t));
    const double p = prokhorov_upper_bound(cosine_member(s), cosine_member(t));
    CHECK(p >= l - 1e-9);
    CHECK(p <= 1.0);
  }
  CHECK(prokhorov_upper_bound(cosine_member(4.0), cosine_member(4.0)) < 1e-3);
}

TEST_CASE("CDF modulus against a grid") {
  const Member g = cosine_member(8.0);
  for (double d : {0.01, 0.1, 0.5}) {
    double best = 0.0;
    for (int k = 0; k <= 100000; ++k) {
      const double x = -d + (1.0 + d) * k / 100000.0;
      best = std::max(best, cdf_clamped(g.family, g.theta, x + d) - cdf_clamped(g.family, g.theta, x));
    }
    CHECK(cdf_modulus(g, d) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("cross-correlation closed form agrees with Simpson") {
  for (auto [s, t] : {std::pair{0.0, 0.0}, {4.1615, 4.1615}, {2.0, 30.0}, {100.0, 100.5}}) {
    const double ref = oracle::simpson(
        [&](double x) { return oracle::cosine_density(s, x) * oracle::cosine_density(t, x); }, 0, 1, 200000);
    CHECK(cosine_cross_correlation(Theta(s), Theta(t)) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("worked examples") {
  CHECK(hellinger(cosine_member(3.7), cosine_member(3.7)) == doctest::Approx(0.0));
  CHECK(hellinger(cosine_member(0.1), cosine_member(0.3)) <= 0.2);
  CHECK(hellinger(cosine_member(2000 * pi), cosine_member(0.0)) == doctest::Approx(0.4465).epsilon(0.002 / 0.4465));
  CHECK(kl_divergence(cosine_member(1.0), cosine_member(1.01)) <= 0.02);
  CHECK(kl_divergence(cosine_member(0.0), cosine_member(0.01)) < 1e-3);
  CHECK(total_variation(cosine_member(1000 * pi), cosine_member(0.0)) == doctest::Approx(0.3183).epsilon(0.002 / 0.3183));
  CHECK(levy_distance(cosine_member(200 * pi), cosine_member(0.0)) <= 1.0 / (200 * pi));
  CHECK(cosine_cross_correlation(Theta(0.0), Theta(0.0)) == 1.0);
}

TEST_CASE("Hellinger is 1-Lipschitz in theta") {
  for (std::uint64_t k = 0; k < 40; ++k) {
    const double s = 50.0 * uniform_variate(5, 2 * k), t = 50.0 * uniform_variate(5, 2 * k + 1);
    CHECK(hellinger(cosine_member(s), cosine_member(t)) <= std::min(std::sqrt(2.0), std::abs(s - t)) + 1e-6);
  }
}

TEST_CASE("triangle inequality on sampled triples") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Member a = cosine_member(30.0 * uniform_variate(8, 3 * k));
    const Member b = cosine_member(30.0 * uniform_variate(8, 3 * k + 1));
    const Member c = cosine_member(30.0 * uniform_variate(8, 3 * k + 2));
    CHECK(hellinger(a, c) <= hellinger(a, b) + hellinger(b, c) + 1e-8);
    CHECK(total_variation(a, c) <= total_variation(a, b) + total_variation(b, c) + 1e-8);
    CHECK(levy_distance(a, c) <= levy_distance(a, b) + levy_distance(b, c) + 1e-8);
  }
}

TEST_CASE("sinc floor") {
  double lo = INFINITY;
  for (int k = 0; k <= 1000000; ++k) lo = std::min(lo, 1.0 + sinc(1e-3 * k));
  CHECK(lo == doctest::Approx(0.7828).epsilon(1e-3 / 0.7828));
  CHECK(lo > 0.0);
}

}
