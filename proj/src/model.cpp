#include "postcon/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "postcon/error.hpp"
#include "postcon/kernels.hpp"

namespace postcon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMixtureTruncation = 12.0;  // standard deviations
constexpr double kInverseTol = 1e-12;
constexpr int kInverseMaxIter = 200;

double mixture_pdf(std::span<const MixtureComponent> comps, double x) noexcept {
  double sum = 0.0;
  for (const auto& c : comps) {
    const double s = std::sqrt(c.precision);
    const double z = s * (x - c.mean);
    sum += c.weight * s * std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
  }
  return sum;
}

double mixture_cdf(std::span<const MixtureComponent> comps, double x) noexcept {
  double sum = 0.0;
  for (const auto& c : comps) {
    const double z = std::sqrt(c.precision) * (x - c.mean);
    sum += c.weight * 0.5 * std::erfc(-z / std::numbers::sqrt2);
  }
  return std::clamp(sum, 0.0, 1.0);
}

Interval mixture_domain(std::span<const MixtureComponent> comps) noexcept {
  Interval d{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& c : comps) {
    const double sd = 1.0 / std::sqrt(c.precision);
    d.lo = std::min(d.lo, c.mean - kMixtureTruncation * sd);
    d.hi = std::max(d.hi, c.mean + kMixtureTruncation * sd);
  }
  return d;
}

void check_theta(const FamilySpec& family, Theta theta) {
  if (family.kind() == FamilyKind::UniformScale && !(theta.value() > 0.0)) {
    throw ValidationError("UniformScale requires theta > 0");
  }
}

}  // namespace

Theta::Theta(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("theta must be finite and nonnegative, got " + std::to_string(value));
  }
}

FamilySpec FamilySpec::cosine() { return FamilySpec{}; }

FamilySpec FamilySpec::extended_cosine(double lambda, double mu) {
  require(lambda >= 1.0 && lambda <= 2.0, "ExtendedCosine requires lambda in [1, 2]");
  require(mu > 0.0 && mu < 1.0, "ExtendedCosine requires mu in (0, 1)");
  require(mu <= 1.0 / lambda, "ExtendedCosine requires mu <= 1/lambda for positivity");
  FamilySpec f;
  f.kind_ = FamilyKind::ExtendedCosine;
  f.lambda_ = lambda;
  f.mu_ = mu;
  return f;
}

FamilySpec FamilySpec::uniform_scale() {
  FamilySpec f;
  f.kind_ = FamilyKind::UniformScale;
  return f;
}

FamilySpec FamilySpec::gauss_mixture(std::vector<MixtureComponent> components) {
  require(!components.empty(), "GaussMixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight >= 0.0 && std::isfinite(c.weight), "mixture weights must be nonnegative");
    require(c.precision > 0.0 && std::isfinite(c.precision), "mixture precisions must be positive");
    require(std::isfinite(c.mean), "mixture means must be finite");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture weights must sum to 1 within 1e-12");
  FamilySpec f;
  f.kind_ = FamilyKind::GaussMixture;
  f.components_ = std::move(components);
  return f;
}

std::string FamilySpec::name() const {
  switch (kind_) {
    case FamilyKind::Cosine: return "cosine";
    case FamilyKind::ExtendedCosine: return "extended_cosine";
    case FamilyKind::UniformScale: return "uniform_scale";
    case FamilyKind::GaussMixture: return "gauss_mixture";
  }
  return "unknown";
}

double sinc(double t) noexcept {
  if (std::abs(t) < kThetaTiny) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

Interval support(const FamilySpec& family, Theta theta) {
  switch (family.kind()) {
    case FamilyKind::Cosine: return {0.0, 1.0};
    case FamilyKind::ExtendedCosine: return {0.0, family.lambda()};
    case FamilyKind::UniformScale:
      check_theta(family, theta);
      return {0.0, theta.value()};
    case FamilyKind::GaussMixture: return mixture_domain(family.components());
  }
  return {0.0, 1.0};
}

bool in_support(const FamilySpec& family, Theta theta, double x) {
  if (!std::isfinite(x)) return false;
  if (family.kind() == FamilyKind::GaussMixture) return true;
  const Interval s = support(family, theta);
  return x >= s.lo && x <= s.hi;
}

Interval common_domain(const FamilySpec& a, Theta ta, const FamilySpec& b, Theta tb) {
  const Interval sa = support(a, ta);
  const Interval sb = support(b, tb);
  return {std::min(sa.lo, sb.lo), std::max(sa.hi, sb.hi)};
}

double oscillation_frequency(const FamilySpec& family, Theta theta) noexcept {
  switch (family.kind()) {
    case FamilyKind::Cosine:
    case FamilyKind::ExtendedCosine: return theta.value();
    default: return 0.0;
  }
}

std::vector<double> breakpoints(const FamilySpec& family, Theta theta) {
  std::vector<double> out;
  switch (family.kind()) {
    case FamilyKind::Cosine: return zero_set(theta);
    case FamilyKind::ExtendedCosine: {
      // cos(w x) = -1 is where the density dips lowest (a zero only when mu = 1/lambda).
      const double w = theta.value();
      if (w <= 0.0) return out;
      for (long k = 0;; ++k) {
        const double x = (2.0 * static_cast<double>(k) + 1.0) * kPi / w;
        if (x > family.lambda()) break;
        out.push_back(x);
      }
      return out;
    }
    case FamilyKind::UniformScale: out.push_back(support(family, theta).hi); return out;
    case FamilyKind::GaussMixture: return out;
  }
  return out;
}

double density_or_zero(const FamilySpec& family, Theta theta, double x) noexcept {
  const double t = theta.value();
  switch (family.kind()) {
    case FamilyKind::Cosine:
      if (x < 0.0 || x > 1.0) return 0.0;
      {
        // 1 + cos y = 2 cos^2(y / 2) keeps relative accuracy next to the zeros.
        const double c = std::cos(0.5 * t * x);
        return 2.0 * c * c / (1.0 + sinc(t));
      }
    case FamilyKind::ExtendedCosine: {
      const double lam = family.lambda();
      const double mu = family.mu();
      if (x < 0.0 || x > lam) return 0.0;
      return (1.0 / lam + mu * std::cos(t * x)) / (1.0 + mu * lam * sinc(t * lam));
    }
    case FamilyKind::UniformScale:
      if (!(t > 0.0) || x < 0.0 || x > t) return 0.0;
      return 1.0 / t;
    case FamilyKind::GaussMixture: return mixture_pdf(family.components(), x);
  }
  return 0.0;
}

double cdf_clamped(const FamilySpec& family, Theta theta, double x) noexcept {
  const double t = theta.value();
  switch (family.kind()) {
    case FamilyKind::Cosine: {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      // sin(t x)/t == x * sinc(t x), finite as t -> 0.
      const double v = (x + x * sinc(t * x)) / (1.0 + sinc(t));
      return std::clamp(v, 0.0, 1.0);
    }
    case FamilyKind::ExtendedCosine: {
      const double lam = family.lambda();
      const double mu = family.mu();
      if (x <= 0.0) return 0.0;
      if (x >= lam) return 1.0;
      const double v = (x / lam + mu * x * sinc(t * x)) / (1.0 + mu * lam * sinc(t * lam));
      return std::clamp(v, 0.0, 1.0);
    }
    case FamilyKind::UniformScale:
      if (!(t > 0.0) || x <= 0.0) return 0.0;
      if (x >= t) return 1.0;
      return x / t;
    case FamilyKind::GaussMixture: return mixture_cdf(family.components(), x);
  }
  return 0.0;
}

double density(const FamilySpec& family, Theta theta, double x) {
  check_theta(family, theta);
  if (!in_support(family, theta, x)) {
    throw DomainError("x = " + std::to_string(x) + " outside the support of " + family.name());
  }
  return density_or_zero(family, theta, x);
}

double cdf(const FamilySpec& family, Theta theta, double x) {
  check_theta(family, theta);
  if (!in_support(family, theta, x)) {
    throw DomainError("x = " + std::to_string(x) + " outside the support of " + family.name());
  }
  return cdf_clamped(family, theta, x);
}

double inverse_cdf(const FamilySpec& family, Theta theta, double u) noexcept {
  const Interval s = support(family, theta);
  double lo = s.lo;
  double hi = s.hi;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < kInverseMaxIter; ++iter) {
    mid = 0.5 * (lo + hi);
    const double fm = cdf_clamped(family, theta, mid);
    if (std::abs(fm - u) <= kInverseTol) break;
    if (fm < u) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (!(lo < next && next < hi)) break;
  }
  return mid;
}

SampleSet sample(const FamilySpec& family, Theta theta, std::size_t n, std::uint64_t seed) {
  check_theta(family, theta);
  SampleSet out;
  out.meta = SampleMeta{seed, theta, family};
  out.points.resize(n);
  kernels::parallel::inverse_cdf_draws(family, theta, seed, 0, out.points);
  return out;
}

SampleSet make_sample_set(std::vector<double> points, SampleMeta meta) {
  for (double x : points) {
    if (!in_support(meta.family, meta.theta_star, x)) {
      throw DomainError("sample point " + std::to_string(x) + " outside the support of " +
                        meta.family.name());
    }
  }
  return SampleSet{std::move(points), std::move(meta)};
}

std::vector<double> zero_set(Theta theta) {
  std::vector<double> out;
  const double t = theta.value();
  if (t <= 0.0) return out;
  for (long k = 0;; ++k) {
    const double x = (2.0 * static_cast<double>(k) + 1.0) * kPi / t;
    if (x > 1.0 + 4.0 * std::numeric_limits<double>::epsilon()) break;
    out.push_back(std::min(x, 1.0));
  }
  return out;
}

double sup_density(Theta theta) noexcept { return 2.0 / (1.0 + sinc(theta.value())); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_variate(std::uint64_t seed, std::uint64_t index) noexcept {
  return static_cast<double>(mix_seed(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace postcon
