#pragma once

#include <complex>
#include <functional>

namespace polaronlab {

/// Controls for the frequency-domain integrals. The upper limit is
/// omega_max_factor * omega_c; the Gaussian cutoff makes the tail beyond
/// 6 omega_c negligible for every integrand in this library.
struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  unsigned max_subdivisions = 12;  // bisection depth per panel
  double omega_max_factor = 6.0;
  double tail_rel_tol = 1e-6;      // allowed truncation error of half-Fourier transforms

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexQuadResult {
  std::complex<double> value;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b], split into panels no wider than
/// panel_width (pass 0 for a single panel). Throws NumericalError when the
/// estimated error misses max(rel_tol |I|, abs_tol).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& q, double panel_width = 0.0);

ComplexQuadResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, const QuadratureSpec& q,
                                    double panel_width = 0.0);

}  // namespace polaronlab
