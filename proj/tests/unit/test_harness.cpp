#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "postcon/config.hpp"
#include "postcon/csv.hpp"
#include "postcon/error.hpp"
#include "postcon/harness.hpp"
#include "postcon/metrics.hpp"

using namespace postcon;
using std::numbers::pi;

namespace {

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  return rows;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing") {
  std::istringstream in("# comment\n\ntheta_star = 1.5\nn_schedule=10, 20,40\nprior = exponential(2)\n");
  const auto cfg = Config::parse(in);
  CHECK(cfg.get_double("theta_star") == 1.5);
  CHECK(cfg.get_u64s("n_schedule") == std::vector<std::uint64_t>{10, 20, 40});
  CHECK(cfg.get_double("missing", 3.0) == 3.0);
  CHECK_THROWS_AS(cfg.get_double("missing"), ValidationError);
  CHECK_THROWS_AS(cfg.check_known({"theta_star"}), ValidationError);

  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(Config::parse(dup), ValidationError);
  std::istringstream junk("just text\n");
  CHECK_THROWS_AS(Config::parse(junk), ValidationError);
  std::istringstream num("x = 1.5abc\n");
  CHECK_THROWS_AS(Config::parse(num).get_double("x"), ValidationError);
}

TEST_CASE("family and prior descriptors") {
  Config c;
  c.set("family", "extended_cosine");
  c.set("lambda", "1.5");
  CHECK(family_from_config(c) == FamilySpec::extended_cosine(1.5));
  Config m;
  m.set("family", "gauss_mixture");
  m.set("mixture", "0.25:0:1;0.75:2:4");
  CHECK(family_from_config(m) == FamilySpec::gauss_mixture({{0.25, 0, 1}, {0.75, 2, 4}}));
  CHECK(parse_prior("pareto_tail(0.5, 1)") == PriorSpec::pareto_tail(0.5, 1.0));
  CHECK(parse_prior("truncated_uniform(50,1e4)") == PriorSpec::truncated_uniform(50.0, 1e4));
  CHECK(parse_prior("phi_tail(power, 0.5)") == PriorSpec::phi_tail(PhiShape::Power, 0.5));
  CHECK_THROWS_AS(parse_prior("gamma(1)"), ValidationError);
  CHECK_THROWS_AS(parse_prior("exponential(1"), ValidationError);
}

TEST_CASE("experiment configuration validation") {
  Config c;
  c.set("theta_star", "1");
  c.set("n_schedule", "10,10");
  CHECK_THROWS_AS(experiment_config_from(c), ValidationError);
  c.set("n_schedule", "10,100");
  c.set("epsilon", "0");
  CHECK_THROWS_AS(experiment_config_from(c), ValidationError);
  c.set("epsilon", "0.25");
  c.set("replicates", "0");
  CHECK_THROWS_AS(experiment_config_from(c), ValidationError);
  c.set("replicates", "3");
  c.set("colour", "blue");
  CHECK_THROWS_AS(experiment_config_from(c), ValidationError);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "1.0000000000000001e-01");
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK(format_double(INFINITY) == "inf");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.0x"), ValidationError);
  std::ostringstream out;
  CsvWriter w(out, {"a", "b", "c"});
  w.row(1.0, true, std::string("x,y"));
  CHECK(out.str() == "a,b,c\n1.0000000000000000e+00,true,\"x,y\"\n");
}

TEST_CASE("figure data") {
  std::ostringstream out;
  const Theta zero[] = {Theta(0.0)};
  emit_figure_data(out, zero, 11);
  const auto rows = parse_rows(out.str());
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"theta", "x", "density", "cdf"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(parse_double(rows[i][2]) == 1.0);
    CHECK(parse_double(rows[i][3]) == parse_double(rows[i][1]));
  }

  std::vector<Theta> thetas;
  for (double t : kFigureThetas) thetas.emplace_back(t);
  std::ostringstream big;
  emit_figure_data(big, thetas, 512);
  const auto br = parse_rows(big.str());
  REQUIRE(br.size() == 1 + 4 * 512);
  std::vector<double> dev(4, 0.0);
  for (std::size_t i = 1; i < br.size(); ++i) {
    const std::size_t j = (i - 1) / 512;
    const double t = parse_double(br[i][0]), x = parse_double(br[i][1]);
    CHECK(parse_double(br[i][2]) == density(FamilySpec::cosine(), Theta(t), x));
    CHECK(parse_double(br[i][3]) == cdf(FamilySpec::cosine(), Theta(t), x));
    dev[j] = std::max(dev[j], std::abs(parse_double(br[i][3]) - x));
  }
  for (std::size_t j = 1; j < 4; ++j) CHECK(dev[j] < dev[j - 1]);
}

TEST_CASE("weak versus strong probe") {
  std::vector<Theta> seq;
  for (int j = 1; j <= 20; ++j) seq.emplace_back(2 * pi * j);
  const auto rows = weak_vs_strong_probe(seq, Theta(0.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      CHECK(rows[i].levy < rows[i - 1].levy);
      CHECK(rows[i].oscillations > rows[i - 1].oscillations);
    }
    if (i >= 4) CHECK(rows[i].hellinger >= 0.40);
  }
  const Theta self[] = {Theta(3.0)};
  const auto zero = weak_vs_strong_probe(self, Theta(3.0));
  CHECK(zero[0].levy == doctest::Approx(0.0));
  CHECK(zero[0].hellinger == doctest::Approx(0.0));
  CHECK(zero[0].oscillations == 0);

  std::vector<Theta> close;
  for (int j = 1; j <= 10; ++j) close.emplace_back(2.0 + 1.0 / j);
  const auto c = weak_vs_strong_probe(close, Theta(2.0));
  for (std::size_t i = 1; i < c.size(); ++i) {
    CHECK(c[i].levy < c[i - 1].levy);
    CHECK(c[i].hellinger < c[i - 1].hellinger);
  }
  std::ostringstream out;
  write_probe_csv(out, c);
  CHECK(out.str().rfind("theta,levy,hellinger,oscillations\n", 0) == 0);
}

TEST_CASE("consistency experiment is deterministic") {
  ExperimentConfig cfg;
  cfg.theta_star = Theta(1.0);
  cfg.prior = PriorSpec::exponential(1.0);
  cfg.n_schedule = {5, 20};
  cfg.replicates = 3;
  cfg.theta_max = 50.0;
  cfg.master_seed = 99;
  const auto a = run_consistency_experiment(cfg);
  const auto b = run_consistency_experiment(cfg);
  std::ostringstream sa, sb;
  write_consistency_csv(sa, a);
  write_consistency_csv(sb, b);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].replicate == i / 2);
    CHECK(a[i].n == cfg.n_schedule[i % 2]);
    CHECK(a[i].status == "ok");
    CHECK(a[i].mass_in + a[i].mass_out == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a[i].tail_ok);
  }
  CHECK(sa.str().rfind("replicate,n,mass_in,mass_out,hellinger,levy,posterior_mean,tail_ok,status\n", 0) == 0);
  CHECK(replicate_seed(99, 1) == mix_seed(99, 1));

  cfg.master_seed = 100;
  std::ostringstream sc;
  write_consistency_csv(sc, run_consistency_experiment(cfg));
  CHECK(sc.str() != sa.str());
}

TEST_CASE("a failed replicate marks only its own rows") {
  ExperimentConfig cfg;
  cfg.family = FamilySpec::uniform_scale();
  cfg.theta_star = Theta(1.0);
  cfg.prior = PriorSpec::truncated_uniform(0.0, 0.9);
  cfg.n_schedule = {1, 50};
  cfg.replicates = 8;
  cfg.theta_max = 0.9;
  cfg.distances = false;
  const auto rows = run_consistency_experiment(cfg);
  REQUIRE(rows.size() == 16);
  std::size_t ok = 0;
  for (const auto& r : rows) {
    if (r.n == 50) CHECK(r.status.rfind("failed: ", 0) == 0);
    if (r.status == "ok") {
      ++ok;
      CHECK(r.mass_in + r.mass_out == doctest::Approx(1.0));
    }
  }
  CHECK(ok >= 1);
}

TEST_CASE("median by n") {
  std::vector<ConsistencyRow> rows(6);
  const double v[] = {3, 30, 1, 10, 2, 20};
  for (std::size_t i = 0; i < 6; ++i) {
    rows[i].replicate = i / 2;
    rows[i].n = i % 2 == 0 ? 10 : 100;
    rows[i].mass_in = v[i];
  }
  rows[5].status = "failed: x";
  const std::size_t sched[] = {10, 100};
  const auto m = median_by_n(rows, sched, &ConsistencyRow::mass_in);
  CHECK(m[0] == 2.0);
  CHECK(m[1] == 20.0);  // failed rows are skipped: median of {30, 10}
}

}
