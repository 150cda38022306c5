#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "postcon/model.hpp"

namespace postcon {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_panels = std::size_t{1} << 20;
  // Minimum number of panels per period of the fastest oscillating factor.
  std::size_t oscillation_guard = 8;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  int max_depth = 0;
};

/// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
struct KronrodRule {
  static constexpr std::size_t kSize = 15;
  static const std::array<double, kSize>& nodes();
  static const std::array<double, kSize>& kronrod_weights();
  /// Gauss weights aligned with nodes(); zero at the Kronrod-only nodes.
  static const std::array<double, kSize>& gauss_weights();
};

/// Splits `domain` at the breakpoints that fall inside it, then subdivides
/// every piece so no panel is wider than (2 pi / frequency) / guard.
std::vector<Interval> initial_panels(Interval domain, double frequency, std::size_t guard,
                                     std::span<const double> breakpoints);

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod quadrature: the panel with the largest
/// error estimate is bisected until the summed estimate is below
/// max(abs_tol, rel_tol * |value|). Throws NumericalError past max_panels.
/// The final sum runs over panels in position order, so results do not
/// depend on how the initial panels were scheduled across threads.
QuadratureResult integrate(const Integrand& f, Interval domain, const QuadratureConfig& cfg,
                           double frequency = 0.0, std::span<const double> breakpoints = {});

}  // namespace postcon
