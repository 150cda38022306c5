#include "postcon/prior.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "postcon/error.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// e^-60 relative truncation of the log-poly tail integral.
constexpr double kTailSpan = 60.0;

double phi(PhiShape shape, double beta, double t) {
  return shape == PhiShape::Exponential ? beta * std::exp(t) : std::pow(t, 1.0 + beta);
}

double phi_derivative(PhiShape shape, double beta, double t) {
  return shape == PhiShape::Exponential ? beta * std::exp(t) : (1.0 + beta) * std::pow(t, beta);
}

// Least-squares slope of y on x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

PriorSpec PriorSpec::truncated_uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b > a,
          "TruncatedUniform needs 0 <= a < b < inf");
  PriorSpec p;
  p.kind_ = PriorKind::TruncatedUniform;
  p.p1_ = a;
  p.p2_ = b;
  p.norm_ = 1.0 / (b - a);
  return p;
}

PriorSpec PriorSpec::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "Exponential prior needs rate > 0");
  PriorSpec p;
  p.kind_ = PriorKind::Exponential;
  p.p1_ = rate;
  return p;
}

PriorSpec PriorSpec::pareto_tail(double alpha, double scale) {
  require(std::isfinite(alpha) && alpha > 0.0, "ParetoTail needs alpha > 0");
  require(std::isfinite(scale) && scale > 0.0, "ParetoTail needs scale > 0");
  PriorSpec p;
  p.kind_ = PriorKind::ParetoTail;
  p.p1_ = alpha;
  p.p2_ = scale;
  p.norm_ = alpha / (scale * (alpha + 1.0));
  return p;
}

PriorSpec PriorSpec::log_poly_tail(double beta, double scale) {
  require(std::isfinite(beta) && beta > 0.0, "LogPolyTail needs beta > 0");
  require(std::isfinite(scale) && scale > 1.0, "LogPolyTail needs scale > 1");
  PriorSpec p;
  p.kind_ = PriorKind::LogPolyTail;
  p.p1_ = beta;
  p.p2_ = scale;
  const double level = 1.0 / (scale * scale * std::pow(std::log(scale), 2.0 + beta));
  p.norm_ = level * scale + p.log_poly_tail_integral(scale);
  return p;
}

PriorSpec PriorSpec::phi_tail(PhiShape shape, double beta) {
  require(std::isfinite(beta) && beta > 0.0, "PhiTail needs beta > 0");
  PriorSpec p;
  p.kind_ = PriorKind::PhiTail;
  p.shape_ = shape;
  p.p1_ = beta;
  return p;
}

std::string PriorSpec::name() const {
  switch (kind_) {
    case PriorKind::TruncatedUniform:
      return fmt::format("TruncatedUniform({},{})", p1_, p2_);
    case PriorKind::Exponential:
      return fmt::format("Exponential({})", p1_);
    case PriorKind::ParetoTail:
      return fmt::format("ParetoTail({},{})", p1_, p2_);
    case PriorKind::LogPolyTail:
      return fmt::format("LogPolyTail({},{})", p1_, p2_);
    case PriorKind::PhiTail:
      return fmt::format("PhiTail({},{})", shape_ == PhiShape::Exponential ? "exp" : "power", p1_);
  }
  return "?";
}

// int_theta^inf u^-2 (ln u)^-(2 + beta) du, via t = ln u.
double PriorSpec::log_poly_tail_integral(double theta) const {
  const double x = std::log(theta);
  const double power = 2.0 + p1_;
  const auto r = integrate([&](double t) { return std::exp(x - t) * std::pow(t, -power); },
                           {x, x + kTailSpan}, QuadratureConfig{});
  return std::exp(-x) * r.value;
}

double PriorSpec::survival(double theta) const {
  const double beta = p1_;
  return std::exp(phi(shape_, beta, 0.0) - phi(shape_, beta, std::log1p(theta)));
}

Interval PriorSpec::support() const noexcept {
  if (kind_ == PriorKind::TruncatedUniform) return {p1_, p2_};
  return {0.0, kInf};
}

std::vector<double> PriorSpec::breakpoints() const {
  switch (kind_) {
    case PriorKind::TruncatedUniform:
      return {p1_, p2_};
    case PriorKind::ParetoTail:
    case PriorKind::LogPolyTail:
      return {p2_};
    default:
      return {};
  }
}

double PriorSpec::density(double theta) const {
  if (std::isnan(theta)) throw ValidationError("prior density at NaN");
  if (theta < 0.0) return 0.0;
  switch (kind_) {
    case PriorKind::TruncatedUniform:
      return theta >= p1_ && theta <= p2_ ? norm_ : 0.0;
    case PriorKind::Exponential:
      return p1_ * std::exp(-p1_ * theta);
    case PriorKind::ParetoTail:
      return theta <= p2_ ? norm_ : norm_ * std::pow(p2_ / theta, 1.0 + p1_);
    case PriorKind::LogPolyTail: {
      const double t = std::max(theta, p2_);
      return 1.0 / (t * t * std::pow(std::log(t), 2.0 + p1_) * norm_);
    }
    case PriorKind::PhiTail: {
      if (std::isinf(theta)) return 0.0;
      // -d/dtheta of the survival function, with the chain rule through ln(1 + theta).
      const double t = std::log1p(theta);
      return survival(theta) * phi_derivative(shape_, p1_, t) / (1.0 + theta);
    }
  }
  return 0.0;
}

double PriorSpec::tail_mass(double theta) const {
  if (std::isnan(theta)) throw ValidationError("prior tail mass at NaN");
  if (theta <= 0.0) return 1.0;
  switch (kind_) {
    case PriorKind::TruncatedUniform:
      return std::clamp((p2_ - theta) * norm_, 0.0, 1.0);
    case PriorKind::Exponential:
      return std::exp(-p1_ * theta);
    case PriorKind::ParetoTail:
      if (theta <= p2_) return 1.0 - norm_ * theta;
      return std::pow(p2_ / theta, p1_) / (1.0 + p1_);
    case PriorKind::LogPolyTail: {
      if (std::isinf(theta)) return 0.0;
      if (theta <= p2_) {
        const double level = 1.0 / (p2_ * p2_ * std::pow(std::log(p2_), 2.0 + p1_));
        return 1.0 - level * theta / norm_;
      }
      return log_poly_tail_integral(theta) / norm_;
    }
    case PriorKind::PhiTail:
      return std::isinf(theta) ? 0.0 : survival(theta);
  }
  return 0.0;
}

double PriorSpec::cdf(double theta) const {
  switch (kind_) {
    case PriorKind::Exponential:
      return theta <= 0.0 ? 0.0 : -std::expm1(-p1_ * theta);
    case PriorKind::PhiTail:
      if (theta <= 0.0) return 0.0;
      if (std::isinf(theta)) return 1.0;
      return -std::expm1(phi(shape_, p1_, 0.0) - phi(shape_, p1_, std::log1p(theta)));
    default:
      return 1.0 - tail_mass(theta);
  }
}

double PriorSpec::mass(double a, double b) const {
  require(!(b < a), "prior mass needs a <= b");
  const Interval s = support();
  a = std::max(a, s.lo);
  b = std::min(b, s.hi);
  if (!(b > a)) return 0.0;
  switch (kind_) {
    case PriorKind::Exponential:
      return std::exp(-p1_ * a) * -std::expm1(-p1_ * (b - a));
    case PriorKind::ParetoTail:
      if (a >= p2_) {
        if (std::isinf(b)) return tail_mass(a);
        return tail_mass(a) * -std::expm1(p1_ * std::log(a / b));
      }
      return cdf(b) - cdf(a);
    case PriorKind::LogPolyTail: {
      if (std::isinf(b)) return tail_mass(a);
      const std::vector<double> bps{p2_};
      return integrate([&](double t) { return density(t); }, {a, b}, QuadratureConfig{}, 0.0, bps)
          .value;
    }
    case PriorKind::PhiTail:
      return survival(a) - (std::isinf(b) ? 0.0 : survival(b));
    default:
      return std::max(0.0, cdf(b) - cdf(a));
  }
}

std::string to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::CompactSupport:
      return "compact-support";
    case TailVerdict::Summable:
      return "summable";
    case TailVerdict::Divergent:
      return "divergent";
    case TailVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

PriorDiagnostics prior_diagnostics(const PriorSpec& prior, double delta, std::size_t k_max) {
  require(std::isfinite(delta) && delta > 0.0, "prior_diagnostics needs delta > 0");
  require(k_max >= 10, "prior_diagnostics needs k_max >= 10");
  PriorDiagnostics out;
  const double w = 2.0 * delta;
  auto term = [&](std::size_t k) {
    const double a = w * static_cast<double>(k);
    return std::sqrt(std::max(0.0, prior.mass(a, a + w)));
  };

  double sum = 0.0;
  std::size_t next_checkpoint = 1;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double inc = term(k);
    sum += inc;
    if (k == next_checkpoint || k == k_max) {
      out.checkpoints.push_back({k, sum, inc});
      if (k == next_checkpoint) next_checkpoint *= 2;
    }
    out.last_increment = inc;
  }

  // Log-spaced samples over the last decade.
  std::vector<double> lk, lln, linc, lkinc;
  const double k_lo = std::max(2.0, static_cast<double>(k_max) / 10.0);
  const double k_hi = static_cast<double>(k_max);
  bool all_zero = true;
  for (int i = 0; i <= 64; ++i) {
    const double kd = k_lo * std::pow(k_hi / k_lo, i / 64.0);
    const auto k = static_cast<std::size_t>(kd);
    const double inc = term(k);
    if (inc <= 0.0) continue;
    all_zero = false;
    const double kk = static_cast<double>(k);
    lk.push_back(std::log(kk));
    lln.push_back(std::log(std::log(kk)));
    linc.push_back(std::log(inc));
    lkinc.push_back(std::log(inc * kk));
  }
  if (all_zero) {
    out.verdict = std::isinf(prior.support().hi) ? TailVerdict::Inconclusive
                                                 : TailVerdict::CompactSupport;
    return out;
  }
  if (lk.size() < 8) return out;
  out.tail_exponent = -slope(lk, linc);
  const double p = out.tail_exponent;
  if (std::abs(p - 1.0) <= 0.2) {
    out.log_exponent = -slope(lln, lkinc);
    const double q = out.log_exponent;
    if (q > 1.05) {
      out.verdict = TailVerdict::Summable;
    } else if (q < 0.95) {
      out.verdict = TailVerdict::Divergent;
    }
  } else {
    out.verdict = p > 1.0 ? TailVerdict::Summable : TailVerdict::Divergent;
  }
  return out;
}

}  // namespace postcon
