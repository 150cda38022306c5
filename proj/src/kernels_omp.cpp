#include <algorithm>
#include <cstdint>
#include <limits>

#include "postcon/kernels.hpp"

namespace postcon::kernels::parallel {

namespace {
constexpr std::uint64_t kScanBlock = std::uint64_t{1} << 16;
}

void inverse_cdf_draws(const FamilySpec& family, Theta theta, std::uint64_t seed,
                       std::uint64_t first_index, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        inverse_cdf(family, theta, uniform_variate(seed, first_index + static_cast<std::uint64_t>(i)));
  }
}

void log_likelihood_scan(const FamilySpec& family, std::span<const double> points,
                         std::span<const double> thetas, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(thetas.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = log_likelihood_at(family, Theta(thetas[k]), points);
  }
}

IntegerScan integer_peak_scan(std::span<const double> points, double delta,
                              std::uint64_t first, std::uint64_t last) {
  IntegerScan r;
  r.best_min_density = -1.0;
  const double tol = phase_tolerance(delta);

  for (std::uint64_t block = first; block <= last; block += kScanBlock) {
    const std::uint64_t block_last = std::min(last, block + kScanBlock - 1);
    const auto count = static_cast<std::int64_t>(block_last - block + 1);
    std::uint64_t accepted = std::numeric_limits<std::uint64_t>::max();
    double best_md = -1.0;
    std::uint64_t best_k = block;

#pragma omp parallel
    {
      std::uint64_t local_accepted = std::numeric_limits<std::uint64_t>::max();
      double local_md = -1.0;
      std::uint64_t local_k = block;
#pragma omp for schedule(static) nowait
      for (std::int64_t i = 0; i < count; ++i) {
        const std::uint64_t k = block + static_cast<std::uint64_t>(i);
        const double t = static_cast<double>(k);
        const double md = min_cosine_density(points, t);
        if (md > local_md || (md == local_md && k < local_k)) {
          local_md = md;
          local_k = k;
        }
        if (k < local_accepted && integer_peak_accepts(points, t, delta, tol)) local_accepted = k;
      }
#pragma omp critical
      {
        accepted = std::min(accepted, local_accepted);
        if (local_md > best_md || (local_md == best_md && local_k < best_k)) {
          best_md = local_md;
          best_k = local_k;
        }
      }
    }

    if (accepted != std::numeric_limits<std::uint64_t>::max()) {
      // Match the serial scan: it stops at the accepted theta, so only
      // candidates up to it count towards the best-seen record.
      r.found = true;
      r.theta = accepted;
      r.scanned += accepted - block + 1;
      const auto within = static_cast<std::size_t>(accepted - block + 1);
      for (std::size_t i = 0; i < within; ++i) {
        const std::uint64_t k = block + i;
        const double md = min_cosine_density(points, static_cast<double>(k));
        if (md > r.best_min_density) {
          r.best_min_density = md;
          r.best_theta = k;
        }
      }
      return r;
    }
    r.scanned += static_cast<std::uint64_t>(count);
    if (best_md > r.best_min_density) {
      r.best_min_density = best_md;
      r.best_theta = best_k;
    }
    if (block_last == last) break;
  }
  return r;
}

}  // namespace postcon::kernels::parallel
