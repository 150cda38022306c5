#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP implementation in
// `parallel` and a plain loop in `serial` with identical results; the serial
// versions are the reference the tests compare against.

#include <cstdint>
#include <span>

#include "postcon/model.hpp"

namespace postcon::kernels {

/// Outcome of scanning integer theta in [first, last].
struct IntegerScan {
  bool found = false;
  std::uint64_t theta = 0;         // smallest accepted integer (valid when found)
  std::uint64_t best_theta = 0;    // largest min-density seen, ties to smaller theta
  double best_min_density = 0.0;
  std::uint64_t scanned = 0;
};

/// Acceptance rule of the integer peak scan: |sin t / t| < delta/4 and every
/// t * x_i within `phase_tol` of a multiple of 2 pi.
bool integer_peak_accepts(std::span<const double> points, double theta, double delta,
                          double phase_tol) noexcept;

/// Sum of log Cosine/extended densities at `theta`; -inf when a point sits on a zero.
double log_likelihood_at(const FamilySpec& family, Theta theta,
                         std::span<const double> points) noexcept;

/// min_i f_theta(x_i) for the Cosine family.
double min_cosine_density(std::span<const double> points, double theta) noexcept;

namespace serial {

void inverse_cdf_draws(const FamilySpec& family, Theta theta, std::uint64_t seed,
                       std::uint64_t first_index, std::span<double> out);

void log_likelihood_scan(const FamilySpec& family, std::span<const double> points,
                         std::span<const double> thetas, std::span<double> out);

IntegerScan integer_peak_scan(std::span<const double> points, double delta,
                              std::uint64_t first, std::uint64_t last);

}  // namespace serial

namespace parallel {

void inverse_cdf_draws(const FamilySpec& family, Theta theta, std::uint64_t seed,
                       std::uint64_t first_index, std::span<double> out);

void log_likelihood_scan(const FamilySpec& family, std::span<const double> points,
                         std::span<const double> thetas, std::span<double> out);

/// Processes fixed-size blocks in order and stops after the first block with
/// an accepted theta, so the answer does not depend on the thread schedule.
IntegerScan integer_peak_scan(std::span<const double> points, double delta,
                              std::uint64_t first, std::uint64_t last);

}  // namespace parallel

/// Largest phase p with cos p >= 1 - delta/2.
double phase_tolerance(double delta) noexcept;

}  // namespace postcon::kernels
