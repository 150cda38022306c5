#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace postcon {

/// Nonnegative, finite model parameter.
class Theta {
 public:
  constexpr Theta() = default;
  explicit Theta(double value);

  constexpr double value() const noexcept { return value_; }
  friend constexpr auto operator<=>(const Theta&, const Theta&) = default;

 private:
  double value_ = 0.0;
};

enum class FamilyKind { Cosine, ExtendedCosine, UniformScale, GaussMixture };

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double precision = 1.0;
  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// Identifies a density family plus its fixed structural constants.
///
/// - Cosine: f_t(x) = (1 + cos(t x)) / (1 + sin(t)/t) on [0, 1].
/// - ExtendedCosine: oscillation of amplitude mu and frequency t added to the
///   uniform density on [0, lambda], renormalised.
/// - UniformScale: uniform on [0, t], t > 0.
/// - GaussMixture: fixed K-component normal mixture; t is not used.
class FamilySpec {
 public:
  static constexpr double kDefaultMu = 0.4;

  static FamilySpec cosine();
  static FamilySpec extended_cosine(double lambda, double mu = kDefaultMu);
  static FamilySpec uniform_scale();
  static FamilySpec gauss_mixture(std::vector<MixtureComponent> components);

  FamilyKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  std::span<const MixtureComponent> components() const noexcept { return components_; }
  std::string name() const;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

 private:
  FamilySpec() = default;

  FamilyKind kind_ = FamilyKind::Cosine;
  double lambda_ = 1.0;
  double mu_ = 1.0;
  std::vector<MixtureComponent> components_;
};

/// Closed interval used both as the support and as the quadrature domain.
/// For GaussMixture it is the truncation means +- 12 standard deviations.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const noexcept { return hi - lo; }
};

struct SampleMeta {
  std::uint64_t seed = 0;
  Theta theta_star;
  FamilySpec family = FamilySpec::cosine();
};

struct SampleSet {
  std::vector<double> points;
  SampleMeta meta;
};

/// sin(t)/t, with a three-term Taylor series below kThetaTiny.
double sinc(double t) noexcept;
inline constexpr double kThetaTiny = 1e-6;

Interval support(const FamilySpec& family, Theta theta);
bool in_support(const FamilySpec& family, Theta theta, double x);
/// Smallest interval containing the supports of both members.
Interval common_domain(const FamilySpec& a, Theta ta, const FamilySpec& b, Theta tb);

/// Angular frequency of the density's oscillation in x (0 when it does not oscillate).
double oscillation_frequency(const FamilySpec& family, Theta theta) noexcept;
/// Points in the support where the density may vanish or has a kink.
std::vector<double> breakpoints(const FamilySpec& family, Theta theta);

double density(const FamilySpec& family, Theta theta, double x);
double cdf(const FamilySpec& family, Theta theta, double x);
/// Density without the support check; zero outside the support.
double density_or_zero(const FamilySpec& family, Theta theta, double x) noexcept;
/// CDF clamped to [0, 1] for any real x.
double cdf_clamped(const FamilySpec& family, Theta theta, double x) noexcept;

/// Bracketed bisection solve of cdf(x) = u to |cdf(x) - u| <= 1e-12.
double inverse_cdf(const FamilySpec& family, Theta theta, double u) noexcept;

/// Deterministic: draw i uses the uniform variate uniform_variate(seed, i).
SampleSet sample(const FamilySpec& family, Theta theta, std::size_t n, std::uint64_t seed);

/// Validates that every point lies in the family support.
SampleSet make_sample_set(std::vector<double> points, SampleMeta meta);

/// Zeros of the Cosine density on [0, 1], ascending.
std::vector<double> zero_set(Theta theta);

/// max over [0, 1] of the Cosine density: 2t / (t + sin t).
double sup_density(Theta theta) noexcept;

/// splitmix64 finaliser applied to seed + (index + 1) * golden gamma.
/// This is the (index + 1)-th output of a splitmix64 stream seeded with `seed`,
/// so any draw can be recomputed independently of the others.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;
/// Top 53 bits of mix_seed mapped to [0, 1).
double uniform_variate(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace postcon
