#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "postcon/metrics.hpp"

namespace postcon {

/// Sorted, disjoint open intervals inside `domain`. Pieces touching the
/// domain boundary are kept (half-open in the domain) and counted.
struct IntervalSet {
  std::vector<Interval> intervals;
  Interval domain;

  std::size_t size() const noexcept { return intervals.size(); }
  bool empty() const noexcept { return intervals.empty(); }
  bool contains(double x) const noexcept;
};

/// Minimal decomposition of {x : f(x) > g(x)}. Sign scan on
/// 64 (1 + t_max L / 2 pi) grid points, then bisection of every sign change
/// to 1e-10. Differences within kExceedanceFloor of zero count as "not above".
IntervalSet exceedance_intervals(const Member& f, const Member& g);
inline constexpr double kExceedanceFloor = 1e-12;

/// Number of intervals in the minimal decomposition of {f > g}.
std::size_t oscillation_count(const Member& f, const Member& g);

struct OscillationReport {
  Theta theta;
  std::size_t count = 0;    // O_j
  double lp_delta = 0.0;    // upper bound on the Levy-Prokhorov distance
  double levy_delta = 0.0;  // Levy metric, for reference
  double tv = 0.0;          // total variation distance
  double tv_epsilon = 0.0;  // min(eps, tv)
  double modulus = 0.0;     // sup_x {G(x + lp_delta) - G(x)}
  bool inequality_holds = false;
};

/// Checks eps <= 2 O modulus + delta for each f_j = (g.family, theta_j) against g.
std::vector<OscillationReport> theorem3_check(std::span<const Theta> sequence, const Member& g,
                                              double eps);

}  // namespace postcon
