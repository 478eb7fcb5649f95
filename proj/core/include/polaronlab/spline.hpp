#pragma once

#include <complex>
#include <vector>

namespace polaronlab {

/// Natural cubic spline over strictly increasing knots. Evaluation outside the
/// knot range clamps to the end values.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  bool empty() const { return x_.empty(); }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives
};

/// Pair of splines for a complex-valued sample set.
class ComplexSpline {
 public:
  ComplexSpline() = default;
  ComplexSpline(const std::vector<double>& x, const std::vector<std::complex<double>>& y);

  std::complex<double> operator()(double x) const { return {re_(x), im_(x)}; }

 private:
  CubicSpline re_;
  CubicSpline im_;
};

}  // namespace polaronlab
