#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postcon/model.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

struct RestrictedMle {
  Theta theta;
  double log_lik = 0.0;
  std::size_t grid_points = 0;
};

/// Global maximiser of the log-likelihood over [0, M]: dense scan with step
/// at most (2 pi / max_i x_i) / 64, then golden-section refinement of the
/// best local maxima to 1e-9. Ties go to the smallest theta.
RestrictedMle restricted_mle(const FamilySpec& family, const SampleSet& sample, double M);
inline constexpr std::size_t kMleRefinedPeaks = 16;

struct PeakSearchResult {
  bool found = false;
  Theta theta;  // accepted integer, or the best candidate when not found
  std::vector<double> per_point_densities;
  double min_density = 0.0;
  std::uint64_t scan_bound = 0;
  std::uint64_t iterations = 0;
  // Real-valued local maximiser of the likelihood within +-1 of theta.
  Theta refined_theta;
  double refined_log_lik = 0.0;
};

/// Scans integer theta = first..scan_bound for the first t with
/// |sin t / t| < delta/4 and every t x_i within acos(1 - delta/2) of a
/// multiple of 2 pi. Such a t has min_i f_t(x_i) >= 2 - delta. When none
/// qualifies, `found` is false and the best candidate seen is reported.
PeakSearchResult dirichlet_peak_search(const SampleSet& sample, double delta,
                                       std::uint64_t scan_bound, std::uint64_t first = 1);
inline constexpr std::uint64_t kDefaultScanBound = 10'000'000;

struct EscapeRow {
  double M = 0.0;
  Theta theta_hat;
  double log_lik = 0.0;
  std::optional<Theta> peak_theta;
  std::optional<double> peak_log_lik;
  std::string verdict;     // "escaped", "not-escaped", "inconclusive" or "no-peak-search"
  bool below_ceiling = false;  // log_lik / n < ln 1.9 + kCeilingMargin
};
inline constexpr double kCeilingMargin = 0.05;

struct EscapeReport {
  Theta theta_star;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<EscapeRow> rows;
};

/// Restricted MLE on [0, M] for each M, then (when delta is given) a peak
/// search beyond max(M) whose likelihood is compared against each of them.
/// Rejects n > kMaxEscapeN unless forced: the search needs t ~ (2 pi / eps)^n.
EscapeReport escape_experiment(Theta theta_star, std::size_t n, std::span<const double> M_list,
                               std::optional<double> delta, std::uint64_t seed,
                               std::uint64_t scan_bound = kDefaultScanBound, bool force = false);
inline constexpr std::size_t kMaxEscapeN = 6;

/// CSV: M,theta_hat,log_lik,peak_theta,peak_log_lik,verdict
void write_escape_csv(std::ostream& out, const EscapeReport& report);

/// int_0^1 f ln f for the Cosine density at theta_star.
double entropy_diagnostic(Theta theta_star, const QuadratureConfig& cfg = {});

}  // namespace postcon
