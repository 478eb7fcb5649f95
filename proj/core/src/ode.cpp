#include "polaronlab/ode.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "polaronlab/units.hpp"

namespace polaronlab {

namespace odeint = boost::numeric::odeint;

void IntegratorSpec::validate() const {
  detail::require(rtol > 0.0 && atol > 0.0, "integrator tolerances must be > 0");
  detail::require(max_step >= 0.0, "max_step must be >= 0");
  detail::require(initial_step > 0.0, "initial_step must be > 0");
}

namespace {

using State = std::vector<double>;

void pack(const CMatrix& m, State& x) {
  x.resize(2 * static_cast<std::size_t>(m.size()));
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    x[2 * k] = m.data()[k].real();
    x[2 * k + 1] = m.data()[k].imag();
  }
}

void unpack(const State& x, CMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = {x[2 * k], x[2 * k + 1]};
}

}  // namespace

MatrixTrajectory integrate_matrix(const MatrixRhs& rhs, const CMatrix& initial,
                                  const std::vector<double>& sample_times,
                                  const IntegratorSpec& spec) {
  spec.validate();
  if (sample_times.empty()) throw std::invalid_argument("need at least one sample time");
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (sample_times[i] < sample_times[i - 1]) {
      throw std::invalid_argument("sample times must be ascending");
    }
  }

  MatrixTrajectory out;
  out.times.reserve(sample_times.size());
  out.states.reserve(sample_times.size());
  if (sample_times.size() == 1 || sample_times.front() == sample_times.back()) {
    for (double t : sample_times) {
      out.times.push_back(t);
      out.states.push_back(initial);
    }
    return out;
  }

  const Eigen::Index rows = initial.rows();
  const Eigen::Index cols = initial.cols();
  CMatrix work(rows, cols);
  auto system = [&](const State& x, State& dxdt, double t) {
    unpack(x, work);
    const CMatrix d = rhs(t, work);
    pack(d, dxdt);
  };
  auto observer = [&](const State& x, double t) {
    CMatrix m(rows, cols);
    unpack(x, m);
    if (!m.allFinite()) {
      std::ostringstream os;
      os << "integrator produced non-finite state at t = " << t;
      throw NumericalError(os.str());
    }
    out.times.push_back(t);
    out.states.push_back(std::move(m));
  };

  State x;
  pack(initial, x);
  using Stepper = odeint::runge_kutta_dopri5<State>;
  const double span = sample_times.back() - sample_times.front();
  const double max_dt = spec.max_step > 0.0 ? spec.max_step : span;
  const double dt0 = std::min(spec.initial_step, max_dt);
  try {
    odeint::integrate_times(odeint::make_dense_output(spec.atol, spec.rtol, max_dt, Stepper()),
                            system, x, sample_times.begin(), sample_times.end(), dt0, observer);
  } catch (const std::overflow_error& e) {
    std::ostringstream os;
    os << "adaptive integrator failed (rtol " << spec.rtol << ", atol " << spec.atol
       << "): " << e.what();
    throw NumericalError(os.str());
  }
  return out;
}

}  // namespace polaronlab
