#include "postcon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "postcon/csv.hpp"
#include "postcon/error.hpp"
#include "postcon/metrics.hpp"
#include "postcon/oscillations.hpp"
#include "postcon/posterior.hpp"

namespace postcon {

void ExperimentConfig::validate() const {
  require(!n_schedule.empty(), "n_schedule must not be empty");
  for (std::size_t i = 1; i < n_schedule.size(); ++i) {
    require(n_schedule[i] > n_schedule[i - 1], "n_schedule must be strictly increasing");
  }
  require(replicates >= 1, "replicates must be at least 1");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(std::isfinite(theta_max) && theta_max > 0.0, "theta_max must be positive");
  quadrature.validate();
}

ExperimentConfig experiment_config_from(const Config& cfg) {
  std::set<std::string> known{"theta_star", "prior",       "n_schedule", "replicates",
                              "epsilon",    "master_seed", "theta_max",  "output",
                              "distances"};
  known.insert(kFamilyKeys.begin(), kFamilyKeys.end());
  known.insert(kQuadratureKeys.begin(), kQuadratureKeys.end());
  cfg.check_known(known);

  ExperimentConfig e;
  e.family = family_from_config(cfg);
  e.theta_star = Theta(cfg.get_double("theta_star"));
  e.prior = parse_prior(cfg.get_string("prior"));
  for (auto n : cfg.get_u64s("n_schedule")) e.n_schedule.push_back(static_cast<std::size_t>(n));
  e.replicates = static_cast<std::size_t>(cfg.get_u64("replicates", 1));
  e.epsilon = cfg.get_double("epsilon", e.epsilon);
  e.master_seed = cfg.get_u64("master_seed", 0);
  e.theta_max = cfg.get_double("theta_max", e.theta_max);
  e.quadrature = quadrature_from_config(cfg);
  e.output_path = cfg.get_string("output", "");
  e.distances = cfg.get_bool("distances", true);
  e.validate();
  return e;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate) noexcept {
  return mix_seed(master_seed, replicate);
}

std::vector<ConsistencyRow> run_consistency_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t per = cfg.n_schedule.size();
  std::vector<ConsistencyRow> rows(cfg.replicates * per);
  const std::size_t n_max = cfg.n_schedule.back();
  const double ts = cfg.theta_star.value();
  const auto reps = static_cast<std::int64_t>(cfg.replicates);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < reps; ++r) {
    const auto rep = static_cast<std::size_t>(r);
    std::vector<double> points;
    SampleMeta meta;
    std::string sample_failure;
    try {
      const SampleSet full = sample(cfg.family, cfg.theta_star, n_max, replicate_seed(cfg.master_seed, rep));
      points = full.points;
      meta = full.meta;
    } catch (const std::exception& e) {
      sample_failure = e.what();
    }
    for (std::size_t j = 0; j < per; ++j) {
      ConsistencyRow& row = rows[rep * per + j];
      row.replicate = rep;
      row.n = cfg.n_schedule[j];
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.mass_in = row.mass_out = row.hellinger = row.levy = row.posterior_mean = nan;
      if (!sample_failure.empty()) {
        row.status = "failed: " + sample_failure;
        continue;
      }
      try {
        SampleSet prefix;
        prefix.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(row.n));
        prefix.meta = meta;
        const auto grid = build_posterior(cfg.prior, cfg.family, prefix, cfg.quadrature,
                                          cfg.theta_max, TailPolicy::Report);
        row.mass_in = posterior_mass(grid, std::max(0.0, ts - cfg.epsilon), ts + cfg.epsilon);
        row.mass_out = 1.0 - row.mass_in;
        row.posterior_mean = grid.mean();
        row.tail_ok = grid.diagnostics().tail_ok;
        if (cfg.distances) {
          row.hellinger = predictive_hellinger(grid, cfg.theta_star, cfg.quadrature);
          row.levy = levy_distance({cfg.family, Theta(row.posterior_mean)}, {cfg.family, cfg.theta_star});
        }
      } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
      }
    }
  }
  return rows;
}

void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows) {
  CsvWriter csv(out, {"replicate", "n", "mass_in", "mass_out", "hellinger", "levy",
                      "posterior_mean", "tail_ok", "status"});
  for (const auto& r : rows) {
    csv.row(r.replicate, r.n, r.mass_in, r.mass_out, r.hellinger, r.levy, r.posterior_mean,
            r.tail_ok, r.status);
  }
}

std::vector<double> median_by_n(std::span<const ConsistencyRow> rows,
                                std::span<const std::size_t> n_schedule,
                                double ConsistencyRow::*column) {
  std::vector<double> out;
  for (std::size_t n : n_schedule) {
    std::vector<double> v;
    for (const auto& r : rows) {
      if (r.n == n && r.status == "ok") v.push_back(r.*column);
    }
    if (v.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    out.push_back(v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]));
  }
  return out;
}

std::vector<ProbeRow> weak_vs_strong_probe(std::span<const Theta> sequence, Theta reference) {
  require(!sequence.empty(), "weak_vs_strong_probe needs a nonempty sequence");
  const Member ref{FamilySpec::cosine(), reference};
  std::vector<ProbeRow> rows(sequence.size());
  const auto count = static_cast<std::int64_t>(sequence.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Member f{ref.family, sequence[k]};
    rows[k] = {sequence[k], levy_distance(f, ref), hellinger(f, ref), oscillation_count(f, ref)};
  }
  return rows;
}

void write_probe_csv(std::ostream& out, std::span<const ProbeRow> rows) {
  CsvWriter csv(out, {"theta", "levy", "hellinger", "oscillations"});
  for (const auto& r : rows) csv.row(r.theta.value(), r.levy, r.hellinger, r.oscillations);
}

void emit_figure_data(std::ostream& out, std::span<const Theta> thetas, std::size_t grid_points) {
  require(grid_points >= 2, "figure data needs at least 2 grid points");
  require(!thetas.empty(), "figure data needs at least one theta");
  const FamilySpec cosine = FamilySpec::cosine();
  CsvWriter csv(out, {"theta", "x", "density", "cdf"});
  for (Theta t : thetas) {
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(grid_points - 1);
      csv.row(t.value(), x, density(cosine, t, x), cdf(cosine, t, x));
    }
  }
}

}  // namespace postcon
