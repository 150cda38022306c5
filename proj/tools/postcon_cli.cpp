// Command-line front end. Every subcommand reads flat key = value settings
// from --config and/or --set, and writes one CSV table.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "postcon/config.hpp"
#include "postcon/csv.hpp"
#include "postcon/error.hpp"
#include "postcon/harness.hpp"
#include "postcon/metrics.hpp"
#include "postcon/mle.hpp"
#include "postcon/oscillations.hpp"
#include "postcon/posterior.hpp"

using namespace postcon;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::set<std::string> with_family(std::set<std::string> keys) {
  keys.insert(kFamilyKeys.begin(), kFamilyKeys.end());
  return keys;
}

std::set<std::string> with_quadrature(std::set<std::string> keys) {
  keys.insert(kQuadratureKeys.begin(), kQuadratureKeys.end());
  return keys;
}

std::vector<double> x_grid(const Config& cfg, Interval domain) {
  if (cfg.has("x")) return cfg.get_doubles("x");
  const auto n = cfg.get_u64("grid_points", 101);
  require(n >= 2, "grid_points must be at least 2");
  std::vector<double> xs;
  for (std::uint64_t k = 0; k < n; ++k) {
    xs.push_back(domain.lo + domain.length() * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return xs;
}

// `thetas = a,b,...` or `j_max = J` for theta_j = 2 pi j, j = 1..J.
std::vector<Theta> theta_sequence(const Config& cfg) {
  std::vector<Theta> seq;
  if (cfg.has("thetas")) {
    for (double t : cfg.get_doubles("thetas")) seq.emplace_back(t);
  } else {
    const auto j_max = cfg.get_u64("j_max");
    for (std::uint64_t j = 1; j <= j_max; ++j) {
      seq.emplace_back(2.0 * std::numbers::pi * static_cast<double>(j));
    }
  }
  require(!seq.empty(), "theta sequence is empty");
  return seq;
}

// `points = ...`, or a Cosine-family draw from theta_star, n, seed.
SampleSet sample_from(const Config& cfg, const FamilySpec& family) {
  if (cfg.has("points")) {
    SampleMeta meta;
    meta.family = family;
    return make_sample_set(cfg.get_doubles("points"), meta);
  }
  return sample(family, Theta(cfg.get_double("theta_star")), cfg.get_u64("n"), cfg.get_u64("seed", 0));
}

void cmd_density(const Config& cfg, std::ostream& out, bool want_cdf) {
  cfg.check_known(with_family({"theta", "x", "grid_points"}));
  const FamilySpec family = family_from_config(cfg);
  const Theta theta(cfg.get_double("theta"));
  CsvWriter csv(out, {"x", want_cdf ? "cdf" : "density"});
  for (double x : x_grid(cfg, support(family, theta))) {
    csv.row(x, want_cdf ? cdf(family, theta, x) : density(family, theta, x));
  }
}

void cmd_sample(const Config& cfg, std::ostream& out) {
  cfg.check_known(with_family({"theta", "n", "seed"}));
  const FamilySpec family = family_from_config(cfg);
  const auto s = sample(family, Theta(cfg.get_double("theta")), cfg.get_u64("n"), cfg.get_u64("seed", 0));
  CsvWriter csv(out, {"index", "x"});
  for (std::size_t i = 0; i < s.points.size(); ++i) csv.row(i, s.points[i]);
}

void cmd_metric(const Config& cfg, std::ostream& out) {
  cfg.check_known(with_quadrature(with_family({"theta_a", "theta_b", "metric"})));
  const FamilySpec family = family_from_config(cfg);
  const QuadratureConfig q = quadrature_from_config(cfg);
  const Member a{family, Theta(cfg.get_double("theta_a"))};
  const Member b{family, Theta(cfg.get_double("theta_b"))};
  const std::map<std::string, std::function<double()>> metrics{
      {"hellinger", [&] { return hellinger(a, b, q); }},
      {"kl", [&] { return kl_divergence(a, b, q); }},
      {"tv", [&] { return total_variation(a, b, q); }},
      {"kolmogorov", [&] { return kolmogorov_distance(a, b); }},
      {"levy", [&] { return levy_distance(a, b); }},
      {"prokhorov_bound", [&] { return prokhorov_upper_bound(a, b); }},
  };
  const std::string which = cfg.get_string("metric", "all");
  CsvWriter csv(out, {"metric", "value"});
  if (which == "all") {
    for (const auto& [name, fn] : metrics) csv.row(name, fn());
    return;
  }
  const auto it = metrics.find(which);
  require(it != metrics.end(), "unknown metric '" + which + "'");
  csv.row(which, it->second());
}

void cmd_oscillations(const Config& cfg, std::ostream& out) {
  cfg.check_known(with_family({"mode", "thetas", "j_max", "theta", "reference", "eps"}));
  const std::string mode = cfg.get_string("mode", "theorem3");
  const Theta reference(cfg.get_double("reference", 0.0));
  if (mode == "intervals") {
    const FamilySpec family = family_from_config(cfg);
    const auto set = exceedance_intervals({family, Theta(cfg.get_double("theta"))}, {family, reference});
    CsvWriter csv(out, {"lo", "hi"});
    for (const auto& iv : set.intervals) csv.row(iv.lo, iv.hi);
    return;
  }
  const auto seq = theta_sequence(cfg);
  if (mode == "probe") {
    write_probe_csv(out, weak_vs_strong_probe(seq, reference));
    return;
  }
  require(mode == "theorem3", "mode must be theorem3, probe or intervals");
  const FamilySpec family = family_from_config(cfg);
  const auto reports = theorem3_check(seq, {family, reference}, cfg.get_double("eps", 0.30));
  CsvWriter csv(out, {"theta", "count", "lp_delta", "levy_delta", "tv", "tv_epsilon", "modulus",
                      "inequality_holds"});
  for (const auto& r : reports) {
    csv.row(r.theta.value(), r.count, r.lp_delta, r.levy_delta, r.tv, r.tv_epsilon, r.modulus,
            r.inequality_holds);
  }
}

void cmd_posterior(const Config& cfg, std::ostream& out) {
  cfg.check_known(with_quadrature(with_family(
      {"prior", "theta_max", "points", "theta_star", "n", "seed", "tail_policy"})));
  const FamilySpec family = family_from_config(cfg);
  const std::string policy = cfg.get_string("tail_policy", "error");
  require(policy == "error" || policy == "report", "tail_policy must be error or report");
  const auto grid = build_posterior(parse_prior(cfg.get_string("prior")), family,
                                    sample_from(cfg, family), quadrature_from_config(cfg),
                                    cfg.get_double("theta_max"),
                                    policy == "error" ? TailPolicy::Error : TailPolicy::Report);
  write_posterior_csv(out, grid);
}

void cmd_mle(const Config& cfg, std::ostream& out) {
  cfg.check_known({"theta_star", "n", "M_list", "delta", "seed", "scan_bound", "force"});
  std::optional<double> delta;
  if (cfg.has("delta")) delta = cfg.get_double("delta");
  const auto ms = cfg.get_doubles("M_list");
  const auto report = escape_experiment(Theta(cfg.get_double("theta_star", 0.0)), cfg.get_u64("n"), ms,
                                        delta, cfg.get_u64("seed", 0),
                                        cfg.get_u64("scan_bound", kDefaultScanBound),
                                        cfg.get_bool("force", false));
  write_escape_csv(out, report);
}

void cmd_peak_search(const Config& cfg, std::ostream& out) {
  cfg.check_known({"points", "theta_star", "n", "seed", "delta", "scan_bound", "first"});
  const auto data = sample_from(cfg, FamilySpec::cosine());
  const auto r = dirichlet_peak_search(data, cfg.get_double("delta"),
                                       cfg.get_u64("scan_bound", kDefaultScanBound),
                                       cfg.get_u64("first", 1));
  CsvWriter csv(out, {"theta", "found", "min_density", "iterations", "refined_theta",
                      "refined_log_lik"});
  csv.row(r.theta.value(), r.found, r.min_density, r.iterations, r.refined_theta.value(),
          r.refined_log_lik);
}

void cmd_figure_data(const Config& cfg, std::ostream& out) {
  cfg.check_known({"thetas", "grid_points"});
  std::vector<Theta> thetas;
  for (double t : cfg.has("thetas") ? cfg.get_doubles("thetas") : kFigureThetas) thetas.emplace_back(t);
  emit_figure_data(out, thetas, cfg.get_u64("grid_points", 512));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior consistency and oscillating-density toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "csv";
  std::vector<std::string> overrides;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"density", "Density on a grid of x"},
      {"cdf", "CDF on a grid of x"},
      {"sample", "Seeded inverse-CDF draws"},
      {"metric", "Distances between two family members"},
      {"oscillations", "Exceedance intervals, oscillation counts, weak/strong probe"},
      {"posterior", "Quadrature posterior grid"},
      {"mle", "Restricted MLE and likelihood-peak escape experiment"},
      {"peak-search", "Integer likelihood-peak search"},
      {"experiment", "Seeded posterior-consistency Monte Carlo"},
      {"figure-data", "Density and CDF table for a list of theta"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Flat key = value settings file");
    sub->add_option("--seed", seed, "Seed (overrides seed / master_seed)");
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
    sub->add_option("--set", overrides, "Extra key=value setting (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      require(eq != std::string::npos && eq > 0, "--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.set(command == "experiment" ? "master_seed" : "seed", std::to_string(*seed));

    std::ostringstream buffer;
    if (command == "density" || command == "cdf") {
      cmd_density(cfg, buffer, command == "cdf");
    } else if (command == "sample") {
      cmd_sample(cfg, buffer);
    } else if (command == "metric") {
      cmd_metric(cfg, buffer);
    } else if (command == "oscillations") {
      cmd_oscillations(cfg, buffer);
    } else if (command == "posterior") {
      cmd_posterior(cfg, buffer);
    } else if (command == "mle") {
      cmd_mle(cfg, buffer);
    } else if (command == "peak-search") {
      cmd_peak_search(cfg, buffer);
    } else if (command == "figure-data") {
      cmd_figure_data(cfg, buffer);
    } else {
      const auto exp = experiment_config_from(cfg);
      if (out_path.empty()) out_path = exp.output_path;
      write_consistency_csv(buffer, run_consistency_experiment(exp));
    }

    if (out_path.empty()) {
      std::cout << buffer.str() << std::flush;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ValidationError("cannot write '" + out_path + "'");
      file << buffer.str();
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << '\n';
    return 1;
  }
}
