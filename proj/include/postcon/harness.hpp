#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "postcon/config.hpp"
#include "postcon/model.hpp"
#include "postcon/prior.hpp"
#include "postcon/quadrature.hpp"

namespace postcon {

struct ExperimentConfig {
  FamilySpec family = FamilySpec::cosine();
  Theta theta_star;
  PriorSpec prior = PriorSpec::exponential(1.0);
  std::vector<std::size_t> n_schedule;
  std::size_t replicates = 1;
  double epsilon = 0.25;
  std::uint64_t master_seed = 0;
  double theta_max = 100.0;
  QuadratureConfig quadrature;
  std::string output_path;
  /// Predictive Hellinger and posterior-mean Levy columns (the costly part).
  bool distances = true;

  void validate() const;
};

/// Keys: family keys, quadrature keys, theta_star, prior, n_schedule,
/// replicates, epsilon, master_seed, theta_max, output, distances.
ExperimentConfig experiment_config_from(const Config& cfg);

struct ConsistencyRow {
  std::size_t replicate = 0;
  std::size_t n = 0;
  double mass_in = 0.0;   // posterior mass of |theta - theta_star| < epsilon
  double mass_out = 0.0;  // 1 - mass_in
  double hellinger = 0.0; // predictive vs f_theta_star
  double levy = 0.0;      // F at the posterior mean vs F_theta_star
  double posterior_mean = 0.0;
  bool tail_ok = true;
  std::string status = "ok";  // "ok" or "failed: <reason>"
};

/// Seed of replicate r: mix_seed(master_seed, r). Replicate r draws one
/// sample of size max(n_schedule) and uses its prefixes for the schedule.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate) noexcept;

/// Rows in (replicate, n) order; a failed posterior only marks its own row.
std::vector<ConsistencyRow> run_consistency_experiment(const ExperimentConfig& cfg);

/// replicate,n,mass_in,mass_out,hellinger,levy,posterior_mean,tail_ok,status
void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows);

/// Median over replicates of a column for each n in the schedule.
std::vector<double> median_by_n(std::span<const ConsistencyRow> rows,
                                std::span<const std::size_t> n_schedule,
                                double ConsistencyRow::*column);

struct ProbeRow {
  Theta theta;
  double levy = 0.0;
  double hellinger = 0.0;
  std::size_t oscillations = 0;
};

/// Cosine family: Levy and Hellinger distance and oscillation count of each
/// f_theta_j against f_reference.
std::vector<ProbeRow> weak_vs_strong_probe(std::span<const Theta> sequence, Theta reference);
/// theta,levy,hellinger,oscillations
void write_probe_csv(std::ostream& out, std::span<const ProbeRow> rows);

/// Long-format `theta,x,density,cdf` on an equispaced grid of [0, 1] (Cosine).
void emit_figure_data(std::ostream& out, std::span<const Theta> thetas, std::size_t grid_points);
inline const std::vector<double> kFigureThetas{5.0, 20.0, 80.0, 320.0};

}  // namespace postcon
