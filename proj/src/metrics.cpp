#include "postcon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "postcon/error.hpp"
#include "postcon/golden.hpp"

namespace postcon {

namespace {

constexpr std::size_t kProkhorovMinBins = std::size_t{1} << 16;

// (1 + r) ln(1 + r) - r, accurate for small r.
double kl_kernel(double r) noexcept {
  if (std::abs(r) < 1e-2) {
    double term = r * r;
    double sum = 0.0;
    for (int k = 2; k <= 10; ++k) {
      sum += (k % 2 == 0 ? 1.0 : -1.0) * term / static_cast<double>(k * (k - 1));
      term *= r;
    }
    return sum;
  }
  return (1.0 + r) * std::log1p(r) - r;
}

// sup over [lo, hi] of v: grid scan, then golden-section polish of every grid
// peak that could still hold the supremum given the observed slope.
template <class V>
double grid_sup(V&& v, double lo, double hi, std::size_t points) {
  if (!(hi > lo)) return v(lo);
  const double h = (hi - lo) / static_cast<double>(points);
  std::vector<double> vals(points + 1);
  for (std::size_t k = 0; k <= points; ++k) vals[k] = v(lo + h * static_cast<double>(k));
  double best = *std::max_element(vals.begin(), vals.end());
  double slope = 0.0;
  for (std::size_t k = 0; k < points; ++k) slope = std::max(slope, std::abs(vals[k + 1] - vals[k]));
  const double margin = 2.0 * slope;
  const double tol = 1e-13 * std::max(1.0, hi - lo);
  for (std::size_t k = 0; k <= points; ++k) {
    if (vals[k] < best - margin) continue;
    const bool left_ok = k == 0 || vals[k] >= vals[k - 1];
    const bool right_ok = k == points || vals[k] >= vals[k + 1];
    if (!left_ok || !right_ok) continue;
    const double a = k == 0 ? lo : lo + h * static_cast<double>(k - 1);
    const double b = k == points ? hi : lo + h * static_cast<double>(k + 1);
    best = std::max(best, golden_section_max(v, a, b, tol).value);
  }
  return best;
}

void append(std::vector<double>& out, const std::vector<double>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

}  // namespace

PairLayout pair_layout(const Member& a, const Member& b) {
  PairLayout layout;
  layout.domain = common_domain(a.family, a.theta, b.family, b.theta);
  layout.frequency = std::max(oscillation_frequency(a.family, a.theta),
                              oscillation_frequency(b.family, b.theta));
  append(layout.breakpoints, breakpoints(a.family, a.theta));
  append(layout.breakpoints, breakpoints(b.family, b.theta));
  const Interval sa = support(a.family, a.theta);
  const Interval sb = support(b.family, b.theta);
  layout.breakpoints.insert(layout.breakpoints.end(), {sa.lo, sa.hi, sb.lo, sb.hi});
  return layout;
}

double hellinger_between(const Integrand& f, const Integrand& g, Interval domain,
                         const QuadratureConfig& cfg, double frequency,
                         std::span<const double> breakpoints) {
  const auto r = integrate(
      [&](double x) {
        const double d = std::sqrt(f(x)) - std::sqrt(g(x));
        return d * d;
      },
      domain, cfg, frequency, breakpoints);
  return std::clamp(std::sqrt(std::max(0.0, r.value)), 0.0, std::numbers::sqrt2);
}

double hellinger(const Member& a, const Member& b, const QuadratureConfig& cfg) {
  if (a.family == b.family && a.theta == b.theta) return 0.0;
  const auto layout = pair_layout(a, b);
  return hellinger_between([&](double x) { return density_or_zero(a.family, a.theta, x); },
                           [&](double x) { return density_or_zero(b.family, b.theta, x); },
                           layout.domain, cfg, layout.frequency, layout.breakpoints);
}

double kl_divergence(const Member& truth, const Member& other, const QuadratureConfig& cfg) {
  if (truth.family == other.family && truth.theta == other.theta) return 0.0;
  const Interval st = support(truth.family, truth.theta);
  const Interval so = support(other.family, other.theta);
  if (st.lo < so.lo || st.hi > so.hi) return std::numeric_limits<double>::infinity();
  const auto layout = pair_layout(truth, other);
  const auto r = integrate(
      [&](double x) {
        const double f = density_or_zero(truth.family, truth.theta, x);
        const double g = density_or_zero(other.family, other.theta, x);
        if (f <= 0.0) return g;
        // Zeros of g inside the support are isolated points; the log singularity is integrable.
        const double gg = std::max(g, std::numeric_limits<double>::min());
        return gg * kl_kernel((f - gg) / gg);
      },
      st, cfg, layout.frequency, layout.breakpoints);
  // The integrand only covers the truth's support; g's mass outside it adds to -f + g.
  const double g_outside = 1.0 - (cdf_clamped(other.family, other.theta, st.hi) -
                                  cdf_clamped(other.family, other.theta, st.lo));
  const double value = std::max(0.0, r.value + g_outside);
  return value > kKlEffectivelyInfinite ? std::numeric_limits<double>::infinity() : value;
}

double total_variation(const Member& a, const Member& b, const QuadratureConfig& cfg) {
  if (a.family == b.family && a.theta == b.theta) return 0.0;
  const auto layout = pair_layout(a, b);
  const auto r = integrate(
      [&](double x) {
        return std::abs(density_or_zero(a.family, a.theta, x) -
                        density_or_zero(b.family, b.theta, x));
      },
      layout.domain, cfg, layout.frequency, layout.breakpoints);
  return std::clamp(0.5 * r.value, 0.0, 1.0);
}

double kolmogorov_distance(const Member& a, const Member& b) {
  const auto layout = pair_layout(a, b);
  return grid_sup(
      [&](double x) {
        return std::abs(cdf_clamped(a.family, a.theta, x) - cdf_clamped(b.family, b.theta, x));
      },
      layout.domain.lo, layout.domain.hi, kLevyGridPoints);
}

double levy_distance(const Member& a, const Member& b) {
  const auto layout = pair_layout(a, b);
  const double lo = layout.domain.lo;
  const double hi = layout.domain.hi;
  auto F = [&](double x) { return cdf_clamped(a.family, a.theta, x); };
  auto G = [&](double x) { return cdf_clamped(b.family, b.theta, x); };

  // Largest violation of the corridor at width d; feasible iff <= 0.
  auto violation = [&](double d) {
    const double upper = grid_sup([&](double x) { return G(x) - F(x + d); }, lo, hi, kLevyGridPoints);
    const double lower = grid_sup([&](double x) { return F(x - d) - G(x); }, lo, hi, kLevyGridPoints);
    return std::max(upper, lower) - d;
  };

  const double kolmogorov = kolmogorov_distance(a, b);
  if (kolmogorov == 0.0) return 0.0;
  double left = 0.0;
  double right = kolmogorov;
  for (int it = 0; it < 80 && right - left > 1e-14; ++it) {
    const double mid = 0.5 * (left + right);
    if (violation(mid) <= 0.0) {
      right = mid;
    } else {
      left = mid;
    }
  }
  return right;
}

double prokhorov_upper_bound(const Member& a, const Member& b) {
  const auto layout = pair_layout(a, b);
  const double lo = layout.domain.lo;
  const double len = layout.domain.length();
  const auto periods = static_cast<std::size_t>(std::ceil(layout.frequency * len / (2.0 * std::numbers::pi)));
  const std::size_t bins = std::max(kProkhorovMinBins, 64 * (periods + 1));
  const double h = len / static_cast<double>(bins);

  std::vector<double> supply(bins);
  std::vector<double> demand(bins);
  double prev_f = cdf_clamped(a.family, a.theta, lo);
  double prev_g = cdf_clamped(b.family, b.theta, lo);
  bool identical = true;
  for (std::size_t i = 0; i < bins; ++i) {
    const double x = i + 1 == bins ? layout.domain.hi : lo + h * static_cast<double>(i + 1);
    const double fx = cdf_clamped(a.family, a.theta, x);
    const double gx = cdf_clamped(b.family, b.theta, x);
    supply[i] = std::max(0.0, fx - prev_f);
    demand[i] = std::max(0.0, gx - prev_g);
    if (fx != gx) identical = false;
    prev_f = fx;
    prev_g = gx;
  }
  if (identical) return 0.0;

  // Mass left untransported when bins up to `reach` apart may be paired.
  auto unmatched = [&](std::size_t reach) {
    std::vector<double> left = supply;
    double moved = 0.0;
    std::size_t p = 0;
    for (std::size_t k = 0; k < bins; ++k) {
      double cap = demand[k];
      if (k > reach) p = std::max(p, k - reach);
      const std::size_t last = std::min(bins - 1, k + reach);
      // Supply is consumed left to right, so everything before p is spent or expired.
      while (cap > 0.0) {
        while (p <= last && left[p] <= 0.0) ++p;
        if (p > last) break;
        const double t = std::min(cap, left[p]);
        left[p] -= t;
        cap -= t;
        moved += t;
      }
    }
    double total = 0.0;
    for (double s : supply) total += s;
    return std::max(0.0, total - moved);
  };
  // Pairing bins `reach` apart needs d >= (reach + 1) h.
  auto bound_at = [&](std::size_t reach) {
    return std::max(static_cast<double>(reach + 1) * h, unmatched(reach));
  };

  std::size_t left = 0;
  std::size_t right = bins - 1;
  while (right - left > 1) {
    const std::size_t mid = left + (right - left) / 2;
    if (static_cast<double>(mid + 1) * h >= unmatched(mid)) {
      right = mid;
    } else {
      left = mid;
    }
  }
  return std::min({bound_at(left), bound_at(right), 1.0});
}

double cdf_modulus(const Member& g, double d) {
  const Interval s = support(g.family, g.theta);
  if (d <= 0.0) return 0.0;
  return grid_sup(
      [&](double x) { return cdf_clamped(g.family, g.theta, x + d) - cdf_clamped(g.family, g.theta, x); },
      s.lo - d, s.hi, kLevyGridPoints);
}

double cosine_cross_correlation(Theta theta, Theta theta_star) noexcept {
  const double t = theta.value();
  const double s = theta_star.value();
  const double num = 1.0 + sinc(t) + sinc(s) + 0.5 * (sinc(t - s) + sinc(t + s));
  return num / ((1.0 + sinc(t)) * (1.0 + sinc(s)));
}

}  // namespace postcon
