#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "postcon/model.hpp"
#include "postcon/prior.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

/// Sum of log f_theta(x_i); -inf when a point sits on a density zero.
double log_likelihood(const FamilySpec& family, Theta theta, const SampleSet& sample);

/// What build_posterior does when prior mass beyond theta_max is not
/// negligible against the evidence.
enum class TailPolicy {
  Error,   // throw, asking for a larger theta_max
  Report,  // keep going; the shortfall is recorded in the diagnostics
};

struct PosteriorDiagnostics {
  std::size_t panels = 0;
  int max_depth = 0;
  double error_estimate = 0.0;  // relative error estimate of the evidence
  double log_evidence = 0.0;
  double log_tail_mass = 0.0;   // log prior mass beyond theta_max (-inf if none)
  bool tail_ok = true;          // tail mass < 1e-12 of the evidence
};

/// Quadrature panel of a posterior grid; owns 15 consecutive nodes.
struct PosteriorPanel {
  double lo = 0.0;
  double hi = 0.0;
  int depth = 0;
};

/// Normalised posterior over theta, stored as Gauss-Kronrod nodes with
/// log weights log(likelihood * prior density * quadrature weight).
/// Immutable after construction.
class PosteriorGrid {
 public:
  static constexpr std::size_t kNodesPerPanel = KronrodRule::kSize;

  PosteriorGrid(FamilySpec family, std::vector<PosteriorPanel> panels,
                std::vector<double> log_weights, PosteriorDiagnostics diagnostics);

  const FamilySpec& family() const noexcept { return family_; }
  std::span<const PosteriorPanel> panels() const noexcept { return panels_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }
  double log_normalizer() const noexcept { return log_normalizer_; }
  const PosteriorDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  Interval domain() const noexcept;

  /// Normalised weight of node i.
  double weight(std::size_t i) const noexcept;
  double mean() const noexcept;

 private:
  FamilySpec family_;
  std::vector<PosteriorPanel> panels_;
  std::vector<double> nodes_;
  std::vector<double> log_weights_;
  double log_normalizer_ = 0.0;
  PosteriorDiagnostics diagnostics_;
};

/// Posterior over [prior lower end, min(prior upper end, theta_max)] by
/// globally adaptive Gauss-Kronrod quadrature in log space. Panels are never
/// wider than (2 pi / max_i x_i) / oscillation_guard for the oscillating
/// families. Throws NumericalError if the likelihood vanishes everywhere.
PosteriorGrid build_posterior(const PriorSpec& prior, const FamilySpec& family,
                              const SampleSet& sample, const QuadratureConfig& cfg,
                              double theta_max, TailPolicy tail_policy = TailPolicy::Error);

/// Posterior mass of [lo, hi]. Panels cut by the interval are integrated
/// through the degree-14 interpolant of their nodes, so masses are additive.
double posterior_mass(const PosteriorGrid& grid, double lo, double hi);

/// Mixture of f_theta over the posterior; nodes with weight below
/// kPredictiveWeightFloor are skipped.
class PosteriorPredictive {
 public:
  explicit PosteriorPredictive(const PosteriorGrid& grid);
  double operator()(double x) const;
  /// Largest theta carrying weight; bounds the oscillation frequency in x.
  double max_theta() const noexcept { return max_theta_; }
  Interval domain() const noexcept { return domain_; }

 private:
  FamilySpec family_;
  std::vector<double> thetas_;
  std::vector<double> coeffs_;
  double max_theta_ = 0.0;
  Interval domain_;
};
inline constexpr double kPredictiveWeightFloor = 1e-20;

double posterior_predictive(const PosteriorGrid& grid, double x);

/// Hellinger distance between the posterior predictive and f_theta_star.
double predictive_hellinger(const PosteriorGrid& grid, Theta theta_star,
                            const QuadratureConfig& cfg = {});

struct KlProfilePoint {
  double radius = 0.0;
  double max_kl = 0.0;
};

/// For each radius r, max of KL(f_theta_star, f_t) over |t - theta_star| <= r,
/// t >= 0, on a 201-point grid (Cosine family).
std::vector<KlProfilePoint> kl_profile(Theta theta_star, std::span<const double> radii,
                                       const QuadratureConfig& cfg = {});

/// CSV with header `theta,log_weight` and a `# log_normalizer=` footer.
void write_posterior_csv(std::ostream& out, const PosteriorGrid& grid);
PosteriorGrid read_posterior_csv(std::istream& in, const FamilySpec& family);

}  // namespace postcon
