#pragma once

// Box-constrained Levenberg-Marquardt with a central-difference Jacobian.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "polaronlab/units.hpp"

namespace polaronlab::fit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Raised when a fit does not converge or its normal equations are singular.
class FitError : public NumericalError {
 public:
  FitError(const std::string& what, double condition = 0.0)
      : NumericalError(what), condition_(condition) {}
  double condition_estimate() const { return condition_; }

 private:
  double condition_;
};

struct Bounds {
  VectorXd lower;
  VectorXd upper;

  static Bounds unbounded(Eigen::Index n);
  static Bounds non_negative(Eigen::Index n);
  bool contains(const VectorXd& p) const;
  VectorXd project(const VectorXd& p) const;
};

struct LeastSquaresOptions {
  int max_iterations = 200;
  double chi2_rel_tol = 1e-10;
  double gradient_tol = 1e-8;
  // Also stop once the Gauss-Newton predicted decrease of chi^2 falls below
  // this (0 disables). Meaningful when residuals are in units of their errors.
  double edm_tol = 0.0;
  double initial_damping = 1e-3;
  double damping_decrease = 0.3;
  double damping_increase = 2.0;
  double singular_condition = 1e12;
  bool allow_singular = false;   // report instead of throwing
  bool require_convergence = true;
};

struct FitResult {
  VectorXd parameters;
  MatrixXd covariance;
  VectorXd residuals;  // weighted, (y - f) / sigma
  double chi_square = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // max |J_i . r| / (|J_i| max(1, chi^2))
  double predicted_decrease = 0.0;  // Gauss-Newton estimate of the remaining chi^2 drop
  double condition_number = 1.0;
  bool singular = false;

  VectorXd standard_errors() const;
};

/// Weighted residual vector as a function of the parameters.
using ResidualFn = std::function<VectorXd(const VectorXd&)>;

/// Central-difference Jacobian, step max(1e-6 |p|, 1e-9), kept inside bounds.
MatrixXd numeric_jacobian(const ResidualFn& r, const VectorXd& p, const Bounds& b);

/// Jacobian of the weighted residuals; an empty function selects
/// numeric_jacobian.
using JacobianFn = std::function<MatrixXd(const VectorXd&)>;

FitResult minimize(const ResidualFn& residuals, const VectorXd& initial, const Bounds& bounds,
                   const LeastSquaresOptions& opts = {});
FitResult minimize(const ResidualFn& residuals, const JacobianFn& jacobian,
                   const VectorXd& initial, const Bounds& bounds,
                   const LeastSquaresOptions& opts = {});

struct FitProblem {
  std::function<double(double, const VectorXd&)> model;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;  // empty means unit weights
  VectorXd initial;
  Bounds bounds;
  LeastSquaresOptions options;

  void validate() const;
};

FitResult least_squares(const FitProblem& p);

}  // namespace polaronlab::fit
