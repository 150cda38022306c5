#pragma once

#include <cmath>
#include <utility>

namespace postcon {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of `f` on [a, b], stopping when the
/// bracket is narrower than `tol`. Returns the best point evaluated,
/// including the endpoints, ties resolved toward smaller x.
template <class F>
ScalarMax golden_section_max(F&& f, double a, double b, double tol, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498948482;
  ScalarMax best{a, f(a)};
  auto consider = [&](double x, double v) {
    if (v > best.value || (v == best.value && x < best.x)) best = {x, v};
  };
  consider(b, f(b));
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    }
  }
  return best;
}

}  // namespace postcon
