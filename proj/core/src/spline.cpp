#include "polaronlab/spline.hpp"

#include <algorithm>
#include <stdexcept>

#include "polaronlab/units.hpp"

namespace polaronlab {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw InvalidParameter("spline needs >= 2 matching knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw InvalidParameter("spline knots must increase");
  }
  m_.assign(n, 0.0);
  if (n == 2) return;

  // Thomas algorithm on the natural-spline tridiagonal system.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0 / 6.0;
    const double b = (h0 + h1) / 3.0;
    const double cc = h1 / 6.0;
    const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
  }
}

double CubicSpline::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

ComplexSpline::ComplexSpline(const std::vector<double>& x,
                             const std::vector<std::complex<double>>& y) {
  std::vector<double> re(y.size()), im(y.size());
  std::transform(y.begin(), y.end(), re.begin(), [](auto z) { return z.real(); });
  std::transform(y.begin(), y.end(), im.begin(), [](auto z) { return z.imag(); });
  re_ = CubicSpline(x, std::move(re));
  im_ = CubicSpline(x, std::move(im));
}

}  // namespace polaronlab
