#include "polaronlab/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polaronlab/dynamics.hpp"
#include "polaronlab/lindblad.hpp"

namespace polaronlab::coherence {

using detail::require;
using cplx = std::complex<double>;

DephasingBudget::DephasingBudget(double gamma_pd, double gamma_charge)
    : gamma_pd_(gamma_pd), gamma_charge_(gamma_charge) {
  require(gamma_pd >= 0.0 && gamma_charge >= 0.0, "dephasing rates must be >= 0");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::analytic: return "analytic";
    case Method::oracle: return "oracle";
    case Method::three_level: return "three-level";
  }
  return "unknown";
}

double charge_noise_rate(double tau_d_ns, const ChargeNoise& noise) {
  require(tau_d_ns >= 0.0, "pulse separation must be >= 0");
  const double x = tau_d_ns / noise.tau_c_ns();
  return -noise.gamma0_uev() * std::expm1(-x * x);
}

double indistinguishability_resonant(double gamma_emission, double gamma_total) {
  require(gamma_emission > 0.0, "emission rate must be > 0");
  require(gamma_total >= 0.0, "dephasing rate must be >= 0");
  return gamma_emission / (gamma_emission + 2.0 * gamma_total);
}

IndistinguishabilityResult indistinguishability_with_jitter(double gamma_relax,
                                                            double gamma_emission,
                                                            double gamma_total) {
  require(gamma_relax > 0.0, "pump relaxation rate must be > 0");
  IndistinguishabilityResult r;
  r.method = Method::analytic;
  r.jitter_factor = std::isinf(gamma_relax) ? 1.0 : gamma_relax / (gamma_relax + gamma_emission);
  r.dephasing_factor = indistinguishability_resonant(gamma_emission, gamma_total);
  r.value = r.jitter_factor * r.dephasing_factor;
  return r;
}

cplx g1_resonant(double t, double tau, double rho_xx0, double gamma_emission,
                 double gamma_total) {
  require(t >= 0.0 && tau >= 0.0, "g1 needs t, tau >= 0");
  const double population = rho_xx0 * std::exp(-gamma_emission * t);
  return population * std::exp(-0.5 * (gamma_emission + 2.0 * gamma_total) * tau);
}

double indistinguishability_oracle(double gamma_emission, double gamma_total, double rho_xx0,
                                   const OracleSpec& spec) {
  require(gamma_emission > 0.0, "emission rate must be > 0");
  require(gamma_total >= 0.0, "dephasing rate must be >= 0");
  require(rho_xx0 > 0.0, "initial exciton population must be > 0");
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double t_max = spec.truncation_lifetimes / gamma_emission;

  auto double_integral = [&](auto&& integrand) {
    double err_outer = 0.0;
    const double v = GK::integrate(
        [&](double t) {
          return GK::integrate([&](double tau) { return integrand(t, tau); }, 0.0, t_max,
                               spec.max_depth, spec.rel_tol);
        },
        0.0, t_max, spec.max_depth, spec.rel_tol, &err_outer);
    if (!std::isfinite(v) || err_outer > 1e3 * spec.rel_tol * std::abs(v)) {
      throw NumericalError("indistinguishability double integral did not converge");
    }
    return v;
  };

  const double num = double_integral([&](double t, double tau) {
    return std::norm(g1_resonant(t, tau, rho_xx0, gamma_emission, gamma_total));
  });
  const double den = double_integral([&](double t, double tau) {
    return (g1_resonant(t, 0.0, rho_xx0, gamma_emission, gamma_total) *
            g1_resonant(t + tau, 0.0, rho_xx0, gamma_emission, gamma_total))
        .real();
  });
  return num / den;
}

double indistinguishability_after_pulse(const dynamics::SimulationResult& pulse,
                                        double gamma_emission, double gamma_total,
                                        const OracleSpec& spec) {
  return indistinguishability_oracle(gamma_emission, gamma_total,
                                     pulse.rho_end.exciton_population(), spec);
}

namespace {

// Basis {|X>, |0>, |P>}.
constexpr Eigen::Index kX = 0, kG = 1, kP = 2;

CMatrix ket_bra(Eigen::Index i, Eigen::Index j) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

struct Nodes {
  std::vector<double> t;
  std::vector<double> w;
};

// Composite Gauss-Legendre on [0, t_max] with geometrically growing panels
// starting at h0.
Nodes graded_nodes(double t_max, double h0, double growth) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  Nodes n;
  double a = 0.0;
  double h = h0;
  while (a < t_max) {
    const double b = std::min(t_max, a + h);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double x = abscissa[k];
      if (x == 0.0) {
        n.t.push_back(mid);
        n.w.push_back(half * weights[k]);
      } else {
        n.t.push_back(mid - half * x);
        n.w.push_back(half * weights[k]);
        n.t.push_back(mid + half * x);
        n.w.push_back(half * weights[k]);
      }
    }
    a = b;
    h *= growth;
  }
  // integrate_matrix needs ascending sample times
  std::vector<std::size_t> idx(n.t.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto l, auto r) { return n.t[l] < n.t[r]; });
  Nodes sorted;
  for (auto i : idx) {
    sorted.t.push_back(n.t[i]);
    sorted.w.push_back(n.w[i]);
  }
  return sorted;
}

double three_level_value(const PumpLevel& pump, double gamma_emission, double gamma_total,
                         const ThreeLevelSpec& spec) {
  const CMatrix h = pump.level_shift() * ket_bra(kP, kP);
  const Liouvillian l(h, {
                             {ket_bra(kX, kX), gamma_total},
                             {ket_bra(kG, kX), 0.5 * gamma_emission},
                             {ket_bra(kX, kP), 0.5 * pump.gamma_relax()},
                         });
  const CMatrix s = l.superoperator();

  const double fastest = std::max({pump.gamma_relax(), gamma_emission + 2.0 * gamma_total});
  const double t_max = spec.truncation_lifetimes * (1.0 / gamma_emission + 1.0 / pump.gamma_relax());
  const Nodes nodes = graded_nodes(t_max, 0.25 / fastest, spec.panel_growth);

  // Propagator U(t) = exp(S t) for every node, from dU/dt = S U.
  std::vector<double> times{0.0};
  times.insert(times.end(), nodes.t.begin(), nodes.t.end());
  const auto traj = integrate_matrix([&](double, const CMatrix& u) -> CMatrix { return s * u; },
                                     CMatrix::Identity(9, 9), times, spec.integrator);
  const std::size_t n = nodes.t.size();

  const CVector rho0 = vectorize(ket_bra(kP, kP));
  const CMatrix sigma = ket_bra(kG, kX);
  // tr(A M) = vec(A^T) . vec(M)
  const CVector tr_sigma_dag = vectorize(CMatrix(sigma.adjoint().transpose()));
  const CVector tr_pop = vectorize(CMatrix(ket_bra(kX, kX).transpose()));

  std::vector<CVector> rho_t(n), sigma_rho_t(n);
  std::vector<double> pop_t(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho_t[i] = traj.states[i + 1] * rho0;
    sigma_rho_t[i] = vectorize(CMatrix(sigma * unvectorize(rho_t[i], 3)));
    pop_t[i] = tr_pop.cwiseProduct(rho_t[i]).sum().real();
  }

  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const CMatrix& u_tau = traj.states[j + 1];
    const CVector g1_row = u_tau.transpose() * tr_sigma_dag;
    const CVector pop_row = u_tau.transpose() * tr_pop;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = nodes.w[i] * nodes.w[j];
      const cplx g1 = g1_row.cwiseProduct(sigma_rho_t[i]).sum();
      const double pop_t_tau = pop_row.cwiseProduct(rho_t[i]).sum().real();
      num += w * std::norm(g1);
      den += w * pop_t[i] * pop_t_tau;
    }
  }
  return num / den;
}

}  // namespace

IndistinguishabilityResult three_level_simulation(const PumpLevel& pump, const EmitterParams& e,
                                                  double gamma_total, const ThreeLevelSpec& spec) {
  require(gamma_total >= 0.0, "dephasing rate must be >= 0");
  require(spec.truncation_lifetimes > 0.0 && spec.panel_growth >= 1.0,
          "invalid three-level quadrature settings");
  IndistinguishabilityResult r;
  r.method = Method::three_level;
  r.value = three_level_value(pump, e.gamma_emission(), gamma_total, spec);
  r.jitter_factor =
      gamma_total == 0.0 ? r.value : three_level_value(pump, e.gamma_emission(), 0.0, spec);
  r.dephasing_factor = r.value / r.jitter_factor;
  return r;
}

}  // namespace polaronlab::coherence
