#pragma once

#include <span>

#include "postcon/model.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

/// One member of a family: (FamilySpec, Theta).
struct Member {
  FamilySpec family = FamilySpec::cosine();
  Theta theta;
};

inline Member cosine_member(double theta) { return {FamilySpec::cosine(), Theta(theta)}; }

/// Integrands and quadrature layout shared by every model-vs-model metric.
struct PairLayout {
  Interval domain;
  double frequency = 0.0;
  std::vector<double> breakpoints;
};
PairLayout pair_layout(const Member& a, const Member& b);

/// [int (sqrt f - sqrt g)^2]^(1/2), in [0, sqrt 2].
double hellinger(const Member& a, const Member& b, const QuadratureConfig& cfg = {});

/// int f ln(f/g), integrated as int [f ln(f/g) - f + g] so the integrand is
/// nonnegative and small divergences keep full relative accuracy. Returns
/// +inf when the truth puts mass outside the other support or the value
/// exceeds kKlEffectivelyInfinite.
double kl_divergence(const Member& truth, const Member& other, const QuadratureConfig& cfg = {});
inline constexpr double kKlEffectivelyInfinite = 1e6;

/// Half the L1 distance between the densities.
double total_variation(const Member& a, const Member& b, const QuadratureConfig& cfg = {});

/// sup_x |F(x) - G(x)|.
double kolmogorov_distance(const Member& a, const Member& b);

/// One-dimensional Levy metric
///   inf{d : F(x - d) - d <= G(x) <= F(x + d) + d for all x},
/// found by bisection on d. Each feasibility test scans a grid of
/// kLevyGridPoints points and polishes the near-maximal grid peaks by golden
/// section, so the supremum over x is not limited to the grid.
double levy_distance(const Member& a, const Member& b);
inline constexpr std::size_t kLevyGridPoints = 10000;

/// Certified upper bound on the Levy-Prokhorov distance. Both laws are
/// binned on a common grid of width h; bin mass may move between bins whose
/// farthest points are within d, and the largest such transport is found by
/// an earliest-deadline greedy (exact for interval-structured supply/demand).
/// The result is the smallest d with untransported mass <= d; the transport
/// is a genuine coupling, so the bound is never below the true distance and
/// overshoots it by at most about h.
double prokhorov_upper_bound(const Member& a, const Member& b);

/// sup_x {G(x + d) - G(x)}: uniform-continuity modulus of the CDF at d.
double cdf_modulus(const Member& g, double d);

/// int_0^1 f_t f_s dx for the Cosine family, by closed form.
double cosine_cross_correlation(Theta theta, Theta theta_star) noexcept;

/// Hellinger distance between two arbitrary densities on `domain`.
double hellinger_between(const Integrand& f, const Integrand& g, Interval domain,
                         const QuadratureConfig& cfg, double frequency,
                         std::span<const double> breakpoints);

}  // namespace postcon
