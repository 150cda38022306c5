#include "postcon/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "postcon/csv.hpp"
#include "postcon/error.hpp"
#include "postcon/golden.hpp"
#include "postcon/kernels.hpp"

namespace postcon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRefineTol = 1e-9;
constexpr std::size_t kMinScanPoints = 1024;
constexpr std::size_t kPeakWindowPoints = 512;

bool better(double v, double t, double best_v, double best_t) {
  return v > best_v || (v == best_v && t < best_t);
}

}  // namespace

RestrictedMle restricted_mle(const FamilySpec& family, const SampleSet& sample, double M) {
  require(std::isfinite(M) && M > 0.0, "restricted_mle needs a finite M > 0");
  require(!sample.points.empty(), "restricted_mle needs a nonempty sample");
  const std::span<const double> points = sample.points;

  double x_max = 0.0;
  for (double x : points) x_max = std::max(x_max, std::abs(x));
  double step = M / static_cast<double>(kMinScanPoints);
  if (x_max > 0.0) step = std::min(step, (2.0 * std::numbers::pi / x_max) / 64.0);
  const auto cells = static_cast<std::size_t>(std::ceil(M / step));

  std::vector<double> thetas(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    thetas[k] = k == cells ? M : M * static_cast<double>(k) / static_cast<double>(cells);
  }
  std::vector<double> values(cells + 1);
  kernels::parallel::log_likelihood_scan(family, points, thetas, values);

  auto ll = [&](double t) { return kernels::log_likelihood_at(family, Theta(t), points); };

  RestrictedMle best{Theta(0.0), kNegInf, cells + 1};
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k <= cells; ++k) {
    if (better(values[k], thetas[k], best.log_lik, best.theta.value())) {
      best.theta = Theta(thetas[k]);
      best.log_lik = values[k];
    }
    const bool left_ok = k == 0 || values[k] >= values[k - 1];
    const bool right_ok = k == cells || values[k] >= values[k + 1];
    if (left_ok && right_ok && values[k] > kNegInf) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > kMleRefinedPeaks) peaks.resize(kMleRefinedPeaks);

  for (std::size_t k : peaks) {
    const double a = k == 0 ? 0.0 : thetas[k - 1];
    const double b = k == cells ? M : thetas[k + 1];
    const auto r = golden_section_max(ll, a, b, kRefineTol);
    if (better(r.value, r.x, best.log_lik, best.theta.value())) {
      best.theta = Theta(r.x);
      best.log_lik = r.value;
    }
  }
  return best;
}

PeakSearchResult dirichlet_peak_search(const SampleSet& sample, double delta,
                                       std::uint64_t scan_bound, std::uint64_t first) {
  require(delta > 0.0 && delta < 1.0, "dirichlet_peak_search needs 0 < delta < 1");
  require(!sample.points.empty(), "dirichlet_peak_search needs a nonempty sample");
  require(first >= 1 && first <= scan_bound, "dirichlet_peak_search needs 1 <= first <= scan_bound");
  const std::span<const double> points = sample.points;

  const auto scan = kernels::parallel::integer_peak_scan(points, delta, first, scan_bound);
  PeakSearchResult out;
  out.found = scan.found;
  out.scan_bound = scan_bound;
  out.iterations = scan.scanned;
  const auto k = scan.found ? scan.theta : scan.best_theta;
  out.theta = Theta(static_cast<double>(k));
  const FamilySpec cosine = FamilySpec::cosine();
  out.min_density = std::numeric_limits<double>::infinity();
  for (double x : points) {
    const double d = density_or_zero(cosine, out.theta, x);
    out.per_point_densities.push_back(d);
    out.min_density = std::min(out.min_density, d);
  }

  // Local polish of the likelihood within +-1 of the integer.
  auto ll = [&](double t) { return kernels::log_likelihood_at(cosine, Theta(t), points); };
  const double centre = out.theta.value();
  const double lo = std::max(0.0, centre - 1.0);
  const double hi = centre + 1.0;
  const double h = (hi - lo) / static_cast<double>(kPeakWindowPoints);
  double best_t = centre;
  double best_v = ll(centre);
  for (std::size_t j = 0; j <= kPeakWindowPoints; ++j) {
    const double t = lo + h * static_cast<double>(j);
    const double v = ll(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const auto r = golden_section_max(ll, std::max(lo, best_t - h), std::min(hi, best_t + h), kRefineTol);
  if (r.value > best_v) {
    best_v = r.value;
    best_t = r.x;
  }
  out.refined_theta = Theta(best_t);
  out.refined_log_lik = best_v;
  return out;
}

EscapeReport escape_experiment(Theta theta_star, std::size_t n, std::span<const double> M_list,
                               std::optional<double> delta, std::uint64_t seed,
                               std::uint64_t scan_bound, bool force) {
  require(n >= 1, "escape_experiment needs n >= 1");
  require(!M_list.empty(), "escape_experiment needs at least one M");
  if (delta && n > kMaxEscapeN && !force) {
    throw ValidationError("peak search is infeasible for n > 6 (integer scan must reach about "
                          "(2 pi / eps)^n); pass force to run anyway");
  }
  const FamilySpec cosine = FamilySpec::cosine();
  EscapeReport report;
  report.theta_star = theta_star;
  report.n = n;
  report.seed = seed;
  const SampleSet data = sample(cosine, theta_star, n, seed);

  double m_max = 0.0;
  for (double M : M_list) m_max = std::max(m_max, M);

  std::optional<PeakSearchResult> peak;
  if (delta) {
    const auto first = static_cast<std::uint64_t>(std::floor(m_max)) + 1;
    require(first <= scan_bound, "scan_bound must exceed max(M)");
    peak = dirichlet_peak_search(data, *delta, scan_bound, first);
  }

  const double ceiling = std::log(1.9) + kCeilingMargin;
  for (double M : M_list) {
    const auto mle = restricted_mle(cosine, data, M);
    EscapeRow row;
    row.M = M;
    row.theta_hat = mle.theta;
    row.log_lik = mle.log_lik;
    row.below_ceiling = mle.log_lik / static_cast<double>(n) < ceiling;
    if (!peak) {
      row.verdict = "no-peak-search";
    } else if (!peak->found) {
      row.verdict = "inconclusive";
    } else {
      row.peak_theta = peak->refined_theta;
      row.peak_log_lik = peak->refined_log_lik;
      row.verdict = peak->refined_log_lik > mle.log_lik ? "escaped" : "not-escaped";
    }
    report.rows.push_back(row);
  }
  return report;
}

void write_escape_csv(std::ostream& out, const EscapeReport& report) {
  CsvWriter csv(out, {"M", "theta_hat", "log_lik", "peak_theta", "peak_log_lik", "verdict"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : report.rows) {
    csv.row(r.M, r.theta_hat.value(), r.log_lik, r.peak_theta ? r.peak_theta->value() : nan,
            r.peak_log_lik.value_or(nan), r.verdict);
  }
}

double entropy_diagnostic(Theta theta_star, const QuadratureConfig& cfg) {
  const FamilySpec cosine = FamilySpec::cosine();
  const auto bps = breakpoints(cosine, theta_star);
  const auto r = integrate(
      [&](double x) {
        const double f = density_or_zero(cosine, theta_star, x);
        return f > 0.0 ? f * std::log(f) : 0.0;
      },
      {0.0, 1.0}, cfg, oscillation_frequency(cosine, theta_star), bps);
  return r.value;
}

}  // namespace postcon
