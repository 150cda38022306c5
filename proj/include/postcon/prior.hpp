#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "postcon/model.hpp"

namespace postcon {

enum class PriorKind { TruncatedUniform, Exponential, ParetoTail, LogPolyTail, PhiTail };

/// Shape of the tail exponent phi for PhiTail priors.
enum class PhiShape {
  Exponential,  // phi(t) = beta e^t
  Power,        // phi(t) = t^(1 + beta)
};

/// Prior on theta >= 0.
///
/// ParetoTail and LogPolyTail are flat on [0, scale] and follow their tail
/// law beyond it, with the density continuous at scale:
///   ParetoTail:  pi(t) ~ t^-(1 + alpha)
///   LogPolyTail: pi(t) ~ 1 / (t^2 (ln t)^(2 + beta)), scale > 1
/// PhiTail is given by its survival function
///   1 - Pi(t) = exp(phi(0) - phi(ln(1 + t))),
/// and its density is the derivative of the CDF through phi'.
class PriorSpec {
 public:
  static PriorSpec truncated_uniform(double a, double b);
  static PriorSpec exponential(double rate);
  static PriorSpec pareto_tail(double alpha, double scale);
  static PriorSpec log_poly_tail(double beta, double scale);
  static PriorSpec phi_tail(PhiShape shape, double beta);

  PriorKind kind() const noexcept { return kind_; }
  PhiShape phi_shape() const noexcept { return shape_; }
  /// (a, b), (rate, -), (alpha, scale), (beta, scale), (beta, -).
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  std::string name() const;

  double density(double theta) const;
  double cdf(double theta) const;
  double tail_mass(double theta) const;
  /// Pi([a, b]), accurate also when a and b are both deep in the tail.
  double mass(double a, double b) const;

  /// Lower end and upper end (may be +inf) of the support.
  Interval support() const noexcept;
  /// Kinks of the density.
  std::vector<double> breakpoints() const;

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

 private:
  PriorSpec() = default;
  double log_poly_tail_integral(double theta) const;
  double survival(double theta) const;

  PriorKind kind_ = PriorKind::Exponential;
  PhiShape shape_ = PhiShape::Exponential;
  double p1_ = 1.0;
  double p2_ = 0.0;
  double norm_ = 1.0;  // normalising constant or flat-part level
};

enum class TailVerdict { CompactSupport, Summable, Divergent, Inconclusive };
std::string to_string(TailVerdict v);

struct PartialSum {
  std::size_t k = 0;
  double sum = 0.0;        // S_K = sum_{k <= K} sqrt(Pi([2k d, 2k d + 2d]))
  double increment = 0.0;  // the K-th term
};

struct PriorDiagnostics {
  std::vector<PartialSum> checkpoints;  // K = 1, 2, 4, ..., k_max
  double tail_exponent = 0.0;           // p in increment ~ k^-p, fitted over the last decade
  double log_exponent = 0.0;            // q in increment ~ 1 / (k (ln k)^q), fitted when p ~ 1
  double last_increment = 0.0;
  TailVerdict verdict = TailVerdict::Inconclusive;
};

/// Partial sums of sqrt prior masses over the blocks [2k d, 2k d + 2d],
/// k = 0..k_max, and a verdict on their summability.
PriorDiagnostics prior_diagnostics(const PriorSpec& prior, double delta, std::size_t k_max);

}  // namespace postcon
