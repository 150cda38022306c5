#include "postcon/posterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <string>

#include <fmt/format.h>

#include "postcon/csv.hpp"
#include "postcon/error.hpp"
#include "postcon/kernels.hpp"
#include "postcon/metrics.hpp"

namespace postcon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kK = KronrodRule::kSize;
// Relative size of the neglected prior tail against the evidence.
constexpr double kTailRatio = 1e-12;
// Running sums are kept relative to a reference log value; rebase when a new
// panel exceeds it by this much.
constexpr double kRebase = 200.0;

struct WorkPanel {
  double lo = 0.0;
  double hi = 0.0;
  int depth = 0;
  std::array<double, kK> log_f{};  // log(likelihood * prior) at the nodes
  double log_value = kNegInf;
  double log_error = kNegInf;
};

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

bool oscillates(const FamilySpec& family) {
  return family.kind() == FamilyKind::Cosine || family.kind() == FamilyKind::ExtendedCosine;
}

// Barycentric weights of the Kronrod nodes on [-1, 1].
const std::array<double, kK>& barycentric_weights() {
  static const std::array<double, kK> w = [] {
    std::array<double, kK> out{};
    const auto& x = KronrodRule::nodes();
    for (std::size_t j = 0; j < kK; ++j) {
      double p = 1.0;
      for (std::size_t k = 0; k < kK; ++k) {
        if (k != j) p *= x[j] - x[k];
      }
      out[j] = 1.0 / p;
    }
    return out;
  }();
  return w;
}

double interpolate(const std::array<double, kK>& values, double t) {
  const auto& x = KronrodRule::nodes();
  const auto& w = barycentric_weights();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < kK; ++j) {
    const double d = t - x[j];
    if (d == 0.0) return values[j];
    const double c = w[j] / d;
    num += c * values[j];
    den += c;
  }
  return num / den;
}

}  // namespace

double log_likelihood(const FamilySpec& family, Theta theta, const SampleSet& sample) {
  return kernels::log_likelihood_at(family, theta, sample.points);
}

PosteriorGrid::PosteriorGrid(FamilySpec family, std::vector<PosteriorPanel> panels,
                             std::vector<double> log_weights, PosteriorDiagnostics diagnostics)
    : family_(std::move(family)),
      panels_(std::move(panels)),
      log_weights_(std::move(log_weights)),
      diagnostics_(diagnostics) {
  require(!panels_.empty(), "posterior grid needs at least one panel");
  require(log_weights_.size() == panels_.size() * kNodesPerPanel,
          "posterior grid needs 15 log weights per panel");
  const auto& x = KronrodRule::nodes();
  nodes_.reserve(log_weights_.size());
  for (std::size_t p = 0; p < panels_.size(); ++p) {
    const auto& panel = panels_[p];
    require(panel.hi > panel.lo, "posterior panels must have positive width");
    if (p > 0) require(panel.lo >= panels_[p - 1].hi, "posterior panels must be sorted");
    const double c = 0.5 * (panel.lo + panel.hi);
    const double h = 0.5 * (panel.hi - panel.lo);
    for (std::size_t i = 0; i < kK; ++i) nodes_.push_back(c + h * x[i]);
  }
  log_normalizer_ = log_sum_exp(log_weights_);
  if (!std::isfinite(log_normalizer_)) {
    throw NumericalError("degenerate posterior: the likelihood vanishes on the whole domain");
  }
  diagnostics_.panels = panels_.size();
}

Interval PosteriorGrid::domain() const noexcept { return {panels_.front().lo, panels_.back().hi}; }

double PosteriorGrid::weight(std::size_t i) const noexcept {
  return std::exp(log_weights_[i] - log_normalizer_);
}

double PosteriorGrid::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) m += weight(i) * nodes_[i];
  return m;
}

PosteriorGrid build_posterior(const PriorSpec& prior, const FamilySpec& family,
                              const SampleSet& sample, const QuadratureConfig& cfg,
                              double theta_max, TailPolicy tail_policy) {
  cfg.validate();
  const Interval ps = prior.support();
  require(std::isfinite(theta_max) && theta_max > ps.lo,
          "theta_max must be finite and above the prior's lower end");
  for (double x : sample.points) {
    require(std::isfinite(x), "sample points must be finite");
  }
  const Interval domain{ps.lo, std::min(ps.hi, theta_max)};

  double x_max = 0.0;
  for (double x : sample.points) x_max = std::max(x_max, std::abs(x));
  const double frequency = oscillates(family) ? x_max : 0.0;
  std::vector<double> bps = prior.breakpoints();
  if (family.kind() == FamilyKind::UniformScale && !sample.points.empty()) bps.push_back(x_max);

  const std::span<const double> points = sample.points;
  const auto& xk = KronrodRule::nodes();
  const auto& wk = KronrodRule::kronrod_weights();
  const auto& wg = KronrodRule::gauss_weights();
  auto evaluate = [&](WorkPanel& p) {
    const double c = 0.5 * (p.lo + p.hi);
    const double h = 0.5 * (p.hi - p.lo);
    double m = kNegInf;
    for (std::size_t i = 0; i < kK; ++i) {
      const double t = c + h * xk[i];
      const double pd = prior.density(t);
      double lf = kNegInf;
      if (pd > 0.0) {
        const double ll = family.kind() == FamilyKind::UniformScale && t <= 0.0
                              ? kNegInf
                              : kernels::log_likelihood_at(family, Theta(t), points);
        lf = ll + std::log(pd);
      }
      if (std::isnan(lf)) throw NumericalError("posterior integrand is NaN");
      p.log_f[i] = lf;
      m = std::max(m, lf);
    }
    if (m == kNegInf || m == std::numeric_limits<double>::infinity()) {
      if (m > 0) throw NumericalError("posterior integrand overflowed");
      p.log_value = kNegInf;
      p.log_error = kNegInf;
      return;
    }
    double k = 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i < kK; ++i) {
      const double v = std::exp(p.log_f[i] - m);
      k += wk[i] * v;
      g += wg[i] * v;
    }
    p.log_value = m + std::log(h * k);
    const double diff = std::abs(k - g);
    p.log_error = diff > 0.0 ? m + std::log(h * diff) : kNegInf;
  };

  const auto seeds = initial_panels(domain, frequency, cfg.oscillation_guard, bps);
  if (seeds.size() > cfg.max_panels) {
    throw NumericalError(fmt::format(
        "oscillation guard needs {} panels, above max_panels = {}", seeds.size(), cfg.max_panels));
  }
  std::vector<WorkPanel> panels(seeds.size());
  const auto count = static_cast<std::int64_t>(seeds.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    auto& p = panels[static_cast<std::size_t>(i)];
    p.lo = seeds[static_cast<std::size_t>(i)].lo;
    p.hi = seeds[static_cast<std::size_t>(i)].hi;
    try {
      evaluate(p);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError(failure);

  double ref = kNegInf;
  for (const auto& p : panels) ref = std::max(ref, p.log_value);
  if (ref == kNegInf) {
    throw NumericalError("degenerate posterior: the likelihood vanishes on the whole domain");
  }
  double total = 0.0;
  double total_err = 0.0;
  for (const auto& p : panels) {
    total += std::exp(p.log_value - ref);
    total_err += std::exp(p.log_error - ref);
  }

  auto worse = [&](std::size_t a, std::size_t b) { return panels[a].log_error < panels[b].log_error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

  while (total_err > cfg.rel_tol * total) {
    if (panels.size() >= cfg.max_panels) {
      throw NumericalError(fmt::format(
          "posterior refinement did not converge within {} panels (relative error {:.3e})",
          cfg.max_panels, total_err / total));
    }
    const std::size_t worst = heap.top();
    heap.pop();
    const WorkPanel parent = panels[worst];
    const double mid = 0.5 * (parent.lo + parent.hi);
    if (!(mid > parent.lo && mid < parent.hi)) {
      total_err -= std::exp(parent.log_error - ref);
      panels[worst].log_error = kNegInf;
      heap.push(worst);
      if (heap.top() == worst) break;
      continue;
    }
    WorkPanel left;
    left.lo = parent.lo;
    left.hi = mid;
    left.depth = parent.depth + 1;
    WorkPanel right = left;
    right.lo = mid;
    right.hi = parent.hi;
    evaluate(left);
    evaluate(right);
    const double top = std::max(left.log_value, right.log_value);
    if (top > ref + kRebase) {
      const double scale = std::exp(ref - top);
      total *= scale;
      total_err *= scale;
      ref = top;
    }
    total += std::exp(left.log_value - ref) + std::exp(right.log_value - ref) -
             std::exp(parent.log_value - ref);
    total_err += std::exp(left.log_error - ref) + std::exp(right.log_error - ref) -
                 std::exp(parent.log_error - ref);
    panels[worst] = left;
    panels.push_back(right);
    heap.push(worst);
    heap.push(panels.size() - 1);
  }

  std::sort(panels.begin(), panels.end(),
            [](const WorkPanel& a, const WorkPanel& b) { return a.lo < b.lo; });
  std::vector<PosteriorPanel> out_panels;
  std::vector<double> log_weights;
  out_panels.reserve(panels.size());
  log_weights.reserve(panels.size() * kK);
  PosteriorDiagnostics diag;
  std::vector<double> log_errors;
  log_errors.reserve(panels.size());
  for (const auto& p : panels) {
    out_panels.push_back({p.lo, p.hi, p.depth});
    diag.max_depth = std::max(diag.max_depth, p.depth);
    const double h = 0.5 * (p.hi - p.lo);
    for (std::size_t i = 0; i < kK; ++i) log_weights.push_back(p.log_f[i] + std::log(wk[i] * h));
    log_errors.push_back(p.log_error);
  }
  diag.log_evidence = log_sum_exp(log_weights);
  diag.error_estimate = std::exp(log_sum_exp(log_errors) - diag.log_evidence);
  const double tail = domain.hi < ps.hi ? prior.tail_mass(domain.hi) : 0.0;
  diag.log_tail_mass = tail > 0.0 ? std::log(tail) : kNegInf;
  diag.tail_ok = diag.log_tail_mass < std::log(kTailRatio) + diag.log_evidence;
  if (!diag.tail_ok && tail_policy == TailPolicy::Error) {
    throw ValidationError(fmt::format(
        "prior mass beyond theta_max = {} is {:.3e}, not below 1e-12 of the evidence "
        "{:.3e}; increase theta_max",
        theta_max, tail, std::exp(diag.log_evidence)));
  }
  return PosteriorGrid(family, std::move(out_panels), std::move(log_weights), diag);
}

double posterior_mass(const PosteriorGrid& grid, double lo, double hi) {
  require(!std::isnan(lo) && !std::isnan(hi) && lo <= hi, "posterior_mass needs lo <= hi");
  const auto panels = grid.panels();
  const auto lw = grid.log_weights();
  const double lz = grid.log_normalizer();
  const auto& xk = KronrodRule::nodes();
  const auto& wk = KronrodRule::kronrod_weights();
  double mass = 0.0;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    if (panel.hi <= lo || panel.lo >= hi) continue;
    const std::size_t base = p * PosteriorGrid::kNodesPerPanel;
    if (panel.lo >= lo && panel.hi <= hi) {
      for (std::size_t i = 0; i < kK; ++i) mass += std::exp(lw[base + i] - lz);
      continue;
    }
    // Integrate the interpolant of the panel's integrand over the overlap.
    const double h = 0.5 * (panel.hi - panel.lo);
    const double c = 0.5 * (panel.lo + panel.hi);
    std::array<double, kK> log_f{};
    double m = kNegInf;
    for (std::size_t i = 0; i < kK; ++i) {
      log_f[i] = lw[base + i] - std::log(wk[i] * h);
      m = std::max(m, log_f[i]);
    }
    if (m == kNegInf) continue;
    std::array<double, kK> f{};
    for (std::size_t i = 0; i < kK; ++i) f[i] = std::exp(log_f[i] - m);
    const double a = std::max(lo, panel.lo);
    const double b = std::min(hi, panel.hi);
    const double sc = 0.5 * (a + b);
    const double sh = 0.5 * (b - a);
    double part = 0.0;
    for (std::size_t i = 0; i < kK; ++i) {
      const double t = (sc + sh * xk[i] - c) / h;
      part += wk[i] * interpolate(f, t);
    }
    part *= sh;
    if (part > 0.0) mass += std::exp(m - lz) * part;
  }
  return std::clamp(mass, 0.0, 1.0);
}

PosteriorPredictive::PosteriorPredictive(const PosteriorGrid& grid)
    : family_(grid.family()) {
  const auto nodes = grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = grid.weight(i);
    if (w < kPredictiveWeightFloor) continue;
    thetas_.push_back(nodes[i]);
    coeffs_.push_back(w);
    max_theta_ = std::max(max_theta_, nodes[i]);
  }
  domain_ = family_.kind() == FamilyKind::UniformScale ? Interval{0.0, max_theta_}
                                                       : support(family_, Theta(max_theta_));
}

double PosteriorPredictive::operator()(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    s += coeffs_[i] * density_or_zero(family_, Theta(thetas_[i]), x);
  }
  return std::max(0.0, s);
}

double posterior_predictive(const PosteriorGrid& grid, double x) {
  return PosteriorPredictive(grid)(x);
}

double predictive_hellinger(const PosteriorGrid& grid, Theta theta_star,
                            const QuadratureConfig& cfg) {
  const FamilySpec& family = grid.family();
  if (!oscillates(family)) {
    const PosteriorPredictive pred(grid);
    const Member star{family, theta_star};
    const Interval ds = support(family, theta_star);
    const Interval dp = pred.domain();
    const Interval domain{std::min(ds.lo, dp.lo), std::max(ds.hi, dp.hi)};
    std::vector<double> bps = breakpoints(family, theta_star);
    bps.push_back(dp.hi);
    return hellinger_between(pred, [&](double x) { return density_or_zero(family, theta_star, x); },
                             domain, cfg, 0.0, bps);
  }

  // Cosine-type families: predictive(x) = A + sum_i c_i cos(t_i x) on [0, L].
  // Evaluated on an equispaced grid by rotating e^{i t_i x} from point to
  // point, then integrated by composite Simpson. The grid keeps at least 16
  // points per period of the fastest component.
  const double lam = family.kind() == FamilyKind::Cosine ? 1.0 : family.lambda();
  const double mu = family.kind() == FamilyKind::Cosine ? 1.0 : family.mu();
  auto norm = [&](double t) {
    return family.kind() == FamilyKind::Cosine ? 1.0 + sinc(t) : 1.0 + mu * lam * sinc(t * lam);
  };
  const auto nodes = grid.nodes();
  double base = 0.0;
  double t_max = theta_star.value();
  std::vector<double> ts;
  std::vector<double> cs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = grid.weight(i);
    if (w < kPredictiveWeightFloor) continue;
    const double n = norm(nodes[i]);
    base += w * (family.kind() == FamilyKind::Cosine ? 1.0 : 1.0 / lam) / n;
    ts.push_back(nodes[i]);
    cs.push_back(w * mu / n);
    t_max = std::max(t_max, nodes[i]);
  }
  const double periods = t_max * lam / (2.0 * std::numbers::pi);
  std::size_t m = 4096;
  while (static_cast<double>(m) < 16.0 * periods && m < (std::size_t{1} << 20)) m *= 2;
  const double dx = lam / static_cast<double>(m);
  std::vector<double> pred(m + 1, base);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::complex<double> step = std::polar(1.0, ts[i] * dx);
    std::complex<double> z = 1.0;
    for (std::size_t k = 0; k <= m; ++k) {
      // Re-anchor periodically to stop rounding drift.
      if ((k & 1023) == 0) z = std::polar(1.0, ts[i] * dx * static_cast<double>(k));
      pred[k] += cs[i] * z.real();
      z *= step;
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    const double x = dx * static_cast<double>(k);
    const double d = std::sqrt(std::max(0.0, pred[k])) -
                     std::sqrt(density_or_zero(family, theta_star, x));
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * d * d;
  }
  return std::clamp(std::sqrt(std::max(0.0, sum * dx / 3.0)), 0.0, std::numbers::sqrt2);
}

std::vector<KlProfilePoint> kl_profile(Theta theta_star, std::span<const double> radii,
                                       const QuadratureConfig& cfg) {
  constexpr int kGrid = 200;
  const Member star{FamilySpec::cosine(), theta_star};
  std::vector<KlProfilePoint> out;
  out.reserve(radii.size());
  for (double r : radii) {
    require(std::isfinite(r) && r >= 0.0, "kl_profile radii must be finite and nonnegative");
    KlProfilePoint point{r, 0.0};
    if (r > 0.0) {
      const double a = std::max(0.0, theta_star.value() - r);
      const double b = theta_star.value() + r;
      for (int k = 0; k <= kGrid; ++k) {
        const double t = a + (b - a) * k / kGrid;
        point.max_kl = std::max(point.max_kl, kl_divergence(star, {star.family, Theta(t)}, cfg));
      }
    }
    out.push_back(point);
  }
  return out;
}

void write_posterior_csv(std::ostream& out, const PosteriorGrid& grid) {
  CsvWriter csv(out, {"theta", "log_weight"});
  const auto nodes = grid.nodes();
  const auto lw = grid.log_weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) csv.row(nodes[i], lw[i]);
  csv.comment("log_normalizer=" + format_double(grid.log_normalizer()));
}

PosteriorGrid read_posterior_csv(std::istream& in, const FamilySpec& family) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == "theta,log_weight",
          "posterior CSV must start with the header theta,log_weight");
  std::vector<double> nodes;
  std::vector<double> lw;
  double lz = std::numeric_limits<double>::quiet_NaN();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string key = "# log_normalizer=";
      if (line.rfind(key, 0) == 0) lz = parse_double(std::string_view(line).substr(key.size()));
      continue;
    }
    const auto fields = split_csv_line(line);
    require(fields.size() == 2, "posterior CSV rows need two fields");
    nodes.push_back(parse_double(fields[0]));
    lw.push_back(parse_double(fields[1]));
  }
  require(!nodes.empty() && nodes.size() % kK == 0,
          "posterior CSV must hold a positive multiple of 15 nodes");
  // Each group of 15 nodes is the Kronrod rule on one panel: recover the panel.
  const auto& xk = KronrodRule::nodes();
  std::vector<PosteriorPanel> panels;
  for (std::size_t base = 0; base < nodes.size(); base += kK) {
    const double c = nodes[base + kK / 2];
    const double h = (nodes[base + kK - 1] - nodes[base]) / (xk[kK - 1] - xk[0]);
    require(h > 0.0, "posterior CSV nodes must be increasing");
    panels.push_back({c - h, c + h, 0});
  }
  // Neighbouring panels share endpoints; snap the reconstructed ones together.
  for (std::size_t p = 1; p < panels.size(); ++p) {
    if (std::abs(panels[p].lo - panels[p - 1].hi) <= 1e-9 * std::max(1.0, std::abs(panels[p].lo))) {
      panels[p].lo = panels[p - 1].hi;
    }
  }
  PosteriorGrid grid(family, std::move(panels), std::move(lw), {});
  if (std::isfinite(lz) && std::abs(lz - grid.log_normalizer()) > 1e-9 * std::max(1.0, std::abs(lz))) {
    throw ValidationError("posterior CSV footer disagrees with its log weights");
  }
  return grid;
}

}  // namespace postcon
