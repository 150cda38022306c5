#include "postcon/oscillations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "postcon/error.hpp"

namespace postcon {

namespace {

constexpr double kRootTol = 1e-10;
constexpr std::size_t kMaxScanPoints = std::size_t{1} << 28;
constexpr double kInequalitySlack = 1e-9;

std::size_t scan_points(const Member& f, const Member& g, Interval domain) {
  const double freq = std::max(oscillation_frequency(f.family, f.theta),
                               oscillation_frequency(g.family, g.theta));
  double periods = freq * domain.length() / (2.0 * std::numbers::pi);
  // Gaussian bumps: resolve the narrowest standard deviation.
  for (const Member* m : {&f, &g}) {
    for (const auto& c : m->family.components()) {
      periods = std::max(periods, domain.length() * std::sqrt(c.precision));
    }
  }
  const double n = 64.0 * (1.0 + periods);
  if (n > static_cast<double>(kMaxScanPoints)) {
    throw NumericalError("exceedance scan would need more than 2^28 grid points");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

bool IntervalSet::contains(double x) const noexcept {
  for (const auto& iv : intervals) {
    if (x > iv.lo && x < iv.hi) return true;
    if (x == iv.lo && iv.lo == domain.lo) return true;
    if (x == iv.hi && iv.hi == domain.hi) return true;
  }
  return false;
}

IntervalSet exceedance_intervals(const Member& f, const Member& g) {
  IntervalSet out;
  out.domain = common_domain(f.family, f.theta, g.family, g.theta);
  if (f.family == g.family && f.theta == g.theta) return out;

  auto above = [&](double x) {
    return density_or_zero(f.family, f.theta, x) - density_or_zero(g.family, g.theta, x) >
           kExceedanceFloor;
  };
  // Boundary between a "below" point a and an "above" point b (either order).
  auto boundary = [&](double a, double b) {
    const bool a_above = above(a);
    for (int it = 0; it < 200 && std::abs(b - a) > kRootTol; ++it) {
      const double mid = 0.5 * (a + b);
      if (above(mid) == a_above) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  const double lo = out.domain.lo;
  const double hi = out.domain.hi;
  const std::size_t n = scan_points(f, g, out.domain);
  const double h = (hi - lo) / static_cast<double>(n);
  auto grid = [&](std::size_t k) { return k == n ? hi : lo + h * static_cast<double>(k); };

  std::vector<char> state(n + 1);
  const auto count = static_cast<std::int64_t>(n + 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    state[static_cast<std::size_t>(k)] = above(grid(static_cast<std::size_t>(k))) ? 1 : 0;
  }

  std::size_t k = 0;
  while (k <= n) {
    if (!state[k]) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k <= n && state[k]) ++k;
    const std::size_t stop = k - 1;
    const double a = start == 0 ? lo : boundary(grid(start - 1), grid(start));
    const double b = stop == n ? hi : boundary(grid(stop), grid(stop + 1));
    if (b > a) out.intervals.push_back({a, b});
  }
  return out;
}

std::size_t oscillation_count(const Member& f, const Member& g) {
  return exceedance_intervals(f, g).size();
}

std::vector<OscillationReport> theorem3_check(std::span<const Theta> sequence, const Member& g,
                                              double eps) {
  require(eps > 0.0, "theorem3_check requires eps > 0");
  require(!sequence.empty(), "theorem3_check requires a nonempty sequence");
  std::vector<OscillationReport> reports(sequence.size());
  const auto count = static_cast<std::int64_t>(sequence.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Member f{g.family, sequence[idx]};
    OscillationReport& r = reports[idx];
    r.theta = sequence[idx];
    r.count = oscillation_count(f, g);
    r.tv = total_variation(f, g);
    r.lp_delta = prokhorov_upper_bound(f, g);
    r.levy_delta = levy_distance(f, g);
    r.tv_epsilon = std::min(eps, r.tv);
    r.modulus = cdf_modulus(g, r.lp_delta);
    r.inequality_holds = r.tv_epsilon <= 2.0 * static_cast<double>(r.count) * r.modulus +
                                              r.lp_delta + kInequalitySlack;
  }
  return reports;
}

}  // namespace postcon
