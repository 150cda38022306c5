#include <cmath>
#include <limits>
#include <numbers>

#include "postcon/kernels.hpp"

namespace postcon::kernels {

double phase_tolerance(double delta) noexcept { return std::acos(1.0 - 0.5 * delta); }

bool integer_peak_accepts(std::span<const double> points, double theta, double delta,
                          double phase_tol) noexcept {
  if (!(std::abs(sinc(theta)) < 0.25 * delta)) return false;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (double x : points) {
    if (!(std::abs(std::remainder(theta * x, kTwoPi)) < phase_tol)) return false;
  }
  return true;
}

double log_likelihood_at(const FamilySpec& family, Theta theta,
                         std::span<const double> points) noexcept {
  if (family.kind() == FamilyKind::Cosine) {
    const double t = theta.value();
    double sum = 0.0;
    for (double x : points) {
      const double v = 1.0 + std::cos(t * x);
      if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
      sum += std::log(v);
    }
    return sum - static_cast<double>(points.size()) * std::log1p(sinc(t));
  }
  double sum = 0.0;
  for (double x : points) {
    const double v = density_or_zero(family, theta, x);
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    sum += std::log(v);
  }
  return sum;
}

double min_cosine_density(std::span<const double> points, double theta) noexcept {
  double lowest = std::numeric_limits<double>::infinity();
  for (double x : points) lowest = std::min(lowest, std::cos(theta * x));
  return (1.0 + lowest) / (1.0 + sinc(theta));
}

namespace serial {

void inverse_cdf_draws(const FamilySpec& family, Theta theta, std::uint64_t seed,
                       std::uint64_t first_index, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = inverse_cdf(family, theta, uniform_variate(seed, first_index + i));
  }
}

void log_likelihood_scan(const FamilySpec& family, std::span<const double> points,
                         std::span<const double> thetas, std::span<double> out) {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out[i] = log_likelihood_at(family, Theta(thetas[i]), points);
  }
}

IntegerScan integer_peak_scan(std::span<const double> points, double delta,
                              std::uint64_t first, std::uint64_t last) {
  IntegerScan r;
  r.best_min_density = -1.0;
  const double tol = phase_tolerance(delta);
  for (std::uint64_t k = first; k <= last; ++k) {
    const double t = static_cast<double>(k);
    ++r.scanned;
    const double md = min_cosine_density(points, t);
    if (md > r.best_min_density) {
      r.best_min_density = md;
      r.best_theta = k;
    }
    if (integer_peak_accepts(points, t, delta, tol)) {
      r.found = true;
      r.theta = k;
      return r;
    }
  }
  return r;
}

}  // namespace serial
}  // namespace postcon::kernels
