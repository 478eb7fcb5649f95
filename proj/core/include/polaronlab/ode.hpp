#pragma once

#include <functional>
#include <vector>

#include "polaronlab/lindblad.hpp"

namespace polaronlab {

/// Adaptive embedded Runge-Kutta 4(5) (Dormand-Prince) settings.
struct IntegratorSpec {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;  // ps; 0 leaves the step unbounded
  double initial_step = 1e-3;

  void validate() const;
};

using MatrixRhs = std::function<CMatrix(double, const CMatrix&)>;

struct MatrixTrajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
};

/// Integrates dM/dt = rhs(t, M) and records M at every entry of sample_times
/// (ascending, first entry is the initial time).
MatrixTrajectory integrate_matrix(const MatrixRhs& rhs, const CMatrix& initial,
                                  const std::vector<double>& sample_times,
                                  const IntegratorSpec& spec);

}  // namespace polaronlab
