#include "postcon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <sstream>

#include "postcon/error.hpp"

namespace postcon {

namespace {

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

void evaluate(const Integrand& f, Panel& p) {
  const auto& x = KronrodRule::nodes();
  const auto& wk = KronrodRule::kronrod_weights();
  const auto& wg = KronrodRule::gauss_weights();
  const double c = 0.5 * (p.lo + p.hi);
  const double h = 0.5 * (p.hi - p.lo);
  double k = 0.0;
  double g = 0.0;
  for (std::size_t i = 0; i < KronrodRule::kSize; ++i) {
    const double v = f(c + h * x[i]);
    k += wk[i] * v;
    g += wg[i] * v;
  }
  p.value = h * k;
  p.error = std::abs(h * (k - g));
  if (!std::isfinite(p.value)) {
    std::ostringstream msg;
    msg << "non-finite integrand on panel [" << p.lo << ", " << p.hi << "]";
    throw NumericalError(msg.str());
  }
}

}  // namespace

void QuadratureConfig::validate() const {
  require(abs_tol > 0.0 && rel_tol > 0.0, "quadrature tolerances must be positive");
  require(max_panels >= 2, "max_panels must be at least 2");
  require(oscillation_guard >= 4, "oscillation_guard must be at least 4");
}

const std::array<double, KronrodRule::kSize>& KronrodRule::nodes() {
  static const std::array<double, kSize> x = {
      -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
      -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
      -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
      -0.207784955007898467600689403773245, 0.0,
      0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
      0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
      0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
      0.991455371120812639206854697526329};
  return x;
}

const std::array<double, KronrodRule::kSize>& KronrodRule::kronrod_weights() {
  static const std::array<double, kSize> w = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
      0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
      0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
      0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
      0.022935322010529224963732008058970};
  return w;
}

const std::array<double, KronrodRule::kSize>& KronrodRule::gauss_weights() {
  static const std::array<double, kSize> w = {
      0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
      0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
      0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
      0.0, 0.129484966168869693270611432679082, 0.0};
  return w;
}

std::vector<Interval> initial_panels(Interval domain, double frequency, std::size_t guard,
                                     std::span<const double> breakpoints) {
  require(domain.hi >= domain.lo, "quadrature domain must satisfy lo <= hi");
  std::vector<double> cuts{domain.lo};
  for (double b : breakpoints) {
    if (b > domain.lo && b < domain.hi) cuts.push_back(b);
  }
  cuts.push_back(domain.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double max_width = frequency > 0.0
                               ? (2.0 * std::numbers::pi / frequency) / static_cast<double>(guard)
                               : std::numeric_limits<double>::infinity();
  std::vector<Interval> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
    for (std::size_t k = 0; k < pieces; ++k) {
      const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces);
      const double hi = k + 1 == pieces
                            ? b
                            : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(pieces);
      panels.push_back({lo, hi});
    }
  }
  if (panels.empty()) panels.push_back(domain);
  return panels;
}

QuadratureResult integrate(const Integrand& f, Interval domain, const QuadratureConfig& cfg,
                           double frequency, std::span<const double> breakpoints) {
  cfg.validate();
  QuadratureResult result;
  if (domain.hi == domain.lo) return result;

  const auto seeds = initial_panels(domain, frequency, cfg.oscillation_guard, breakpoints);
  if (seeds.size() > cfg.max_panels) {
    std::ostringstream msg;
    msg << "oscillation guard needs " << seeds.size() << " panels, above max_panels = "
        << cfg.max_panels;
    throw NumericalError(msg.str());
  }

  std::vector<Panel> panels(seeds.size());
  const auto count = static_cast<std::int64_t>(seeds.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < count; ++i) {
    auto& p = panels[static_cast<std::size_t>(i)];
    p.lo = seeds[static_cast<std::size_t>(i)].lo;
    p.hi = seeds[static_cast<std::size_t>(i)].hi;
    try {
      evaluate(f, p);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError(failure);

  double total = 0.0;
  double total_err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    total_err += p.error;
  }

  auto worse = [&](std::size_t a, std::size_t b) { return panels[a].error < panels[b].error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (panels.size() >= cfg.max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge: " << panels.size() << " panels, value " << total
          << ", error estimate " << total_err;
      throw NumericalError(msg.str());
    }
    const std::size_t worst = heap.top();
    heap.pop();
    Panel parent = panels[worst];
    const double mid = 0.5 * (parent.lo + parent.hi);
    if (!(mid > parent.lo && mid < parent.hi)) {
      // Cannot bisect further in double precision; accept the panel as is.
      total_err -= parent.error;
      panels[worst].error = 0.0;
      heap.push(worst);
      if (heap.top() == worst) break;
      continue;
    }
    Panel left{parent.lo, mid, 0.0, 0.0, parent.depth + 1};
    Panel right{mid, parent.hi, 0.0, 0.0, parent.depth + 1};
    evaluate(f, left);
    evaluate(f, right);
    total += left.value + right.value - parent.value;
    total_err += left.error + right.error - parent.error;
    panels[worst] = left;
    panels.push_back(right);
    heap.push(worst);
    heap.push(panels.size() - 1);
  }

  std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  for (const auto& p : panels) {
    result.value += p.value;
    result.error += p.error;
    result.max_depth = std::max(result.max_depth, p.depth);
  }
  result.panels = panels.size();
  return result;
}

}  // namespace postcon
