#pragma once

// Independent reference integrators for the tests: plain composite Simpson
// on a dense grid, nothing shared with the library's adaptive code.

#include <cmath>
#include <functional>

namespace oracle {

template <class F>
auto simpson(F&& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  auto sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * (h / 3.0);
}

inline double coth_term(double w, double kt_over_hbar) {
  // w coth(w / 2kT)
  if (kt_over_hbar == 0.0) return w;
  const double x = w / (2.0 * kt_over_hbar);
  return x < 1e-8 ? 2.0 * kt_over_hbar : w / std::tanh(x);
}

inline double kt(double temperature_k) { return 0.0861733 * temperature_k / 0.6582119; }

}  // namespace oracle
