#include "polaronlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polaronlab/units.hpp"

namespace polaronlab {

void QuadratureSpec::validate() const {
  detail::require(rel_tol > 0.0, "quadrature rel_tol must be > 0");
  detail::require(abs_tol >= 0.0, "quadrature abs_tol must be >= 0");
  detail::require(omega_max_factor >= 6.0, "omega_max_factor must be >= 6");
  detail::require(max_subdivisions >= 1, "max_subdivisions must be >= 1");
  detail::require(tail_rel_tol > 0.0, "tail_rel_tol must be > 0");
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

int panel_count(double a, double b, double panel_width) {
  if (panel_width <= 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
}

[[noreturn]] void fail(double value, double error, const QuadratureSpec& q) {
  std::ostringstream os;
  os << "quadrature did not converge: estimate " << value << ", achieved error " << error
     << ", requested rel_tol " << q.rel_tol;
  throw NumericalError(os.str());
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& q, double panel_width) {
  QuadResult out;
  if (b <= a) return out;
  const int panels = panel_count(a, b, panel_width);
  const double h = (b - a) / panels;
  double l1 = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == panels) ? b : lo + h;
    double err = 0.0;
    double panel_l1 = 0.0;
    out.value += Kronrod::integrate(f, lo, hi, q.max_subdivisions, q.rel_tol * 0.1, &err, &panel_l1);
    out.error += err;
    l1 += panel_l1;
  }
  // Cancellation between panels is judged against the L1 norm.
  const double scale = std::max(std::abs(out.value), 1e-3 * l1);
  if (!std::isfinite(out.value) || out.error > std::max(q.rel_tol * scale, q.abs_tol)) {
    fail(out.value, out.error, q);
  }
  return out;
}

ComplexQuadResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, const QuadratureSpec& q,
                                    double panel_width) {
  const auto re = integrate([&](double x) { return f(x).real(); }, a, b, q, panel_width);
  const auto im = integrate([&](double x) { return f(x).imag(); }, a, b, q, panel_width);
  return {{re.value, im.value}, std::hypot(re.error, im.error)};
}

}  // namespace polaronlab
